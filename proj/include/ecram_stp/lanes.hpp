#pragma once

// Batch engine: many independent single-input neurons under periodic drive,
// advanced in lockstep through the SIMD lane kernels. Event timing and update
// order match sim::run exactly, so a lane reproduces the general engine.

#include <cstdint>
#include <span>
#include <vector>

#include "ecram_stp/analysis.hpp"
#include "ecram_stp/lif.hpp"
#include "ecram_stp/stp.hpp"

namespace ecram_stp::lanes {

struct AbstractLane {
  StpParams stp;
  double w = 0.6;
  double theta = 0.8;
  double tau_s = 0.015;
  double rate = 100.0;  // periodic input, first spike one period in
};

struct LaneCounts {
  std::int64_t inputs = 0;
  std::int64_t outputs = 0;
};

/// Runs every lane for `duration` at step `dt`. Requires 1/rate >= dt.
/// Inputs and outputs are counted only at steps with time >= `settle`.
std::vector<LaneCounts> run_abstract(std::span<const AbstractLane> lanes, double dt, double duration,
                                     int jobs = 1, double settle = 0.0);

struct CircuitLane {
  double delta_v = 0;  // V per input
  double gap = 0;      // rest-to-threshold distance, V
  double leak = 0;     // V/s (constant rate) or time constant in s (exponential)
  double carry = 0;
  double refractory = 2e-3;
  double rate = 100.0;
  double pulse_width = 0;  // input pulse width used to place the crossing inside the pulse
};

struct CircuitFirst {
  std::int64_t inputs = 0;     // index of the input that fired; 0 when it never fired
  double time_to_fire = 0;     // s; infinity when it never fired
};

/// First output of each lane within `max_inputs` periodic inputs.
std::vector<CircuitFirst> first_fire(std::span<const CircuitLane> lanes, LeakLaw law, double dt,
                                     std::int64_t max_inputs, int jobs = 1);

// ---------------------------------------------------------------------------
// Analytic vs simulated frequency response.

struct ComparisonRow {
  double nu_in = 0;
  double analytic = 0;
  double simulated = 0;
  double error = 0;
  double slack = 0;
  bool within = false;
  std::int64_t inputs = 0;
  std::int64_t outputs = 0;
};

struct Comparison {
  double dt = 0;
  double duration = 0;
  double settle = 0;
  std::vector<ComparisonRow> rows;
  double max_error = 0;
  bool all_within = true;
};

/// Allowed |analytic - simulated| at one frequency: the one-spike step
/// 1/m - 1/(m+1) of the analytic count, plus the spread of the analytic
/// response over the two step-aligned periods floor(T/dt)dt and ceil(T/dt)dt
/// that the snapped input train alternates between, plus one output over the
/// counting window for its phase.
double quantization_slack(const StpParams& stp, double w, double theta, double tau_s, double nu_in,
                          double dt, std::int64_t inputs);

/// The closed form describes steady state, so the simulated ratio is counted
/// after a settling time of 20 * max(tau_s, tau_f, tau_d), capped at half the run.
double settling_time(const StpParams& stp, double tau_s, double duration);

Comparison compare_analytic(const StpParams& stp, double w, double theta, double tau_s,
                            std::span<const double> nu_grid, double dt, double duration, int jobs = 1);

}  // namespace ecram_stp::lanes
