#pragma once

// Closed-form frequency response of an LIF neuron driven through one
// facilitating/depressing synapse by a periodic spike train.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ecram_stp/spike_count.hpp"
#include "ecram_stp/stp.hpp"

namespace ecram_stp::analysis {

/// Below this leak-per-period ratio T/tau_s the leak-free limit ceil(theta/w) is used.
inline constexpr double kLeakFreeRatio = 1e-6;

/// Post-spike fixed point of x_{k+1} = x_k e^{-T/tau} + delta.
double steady_state_level(double delta, double tau, double period);

/// Steady-state effective weight for periodic drive at `nu_in`.
double effective_weight_at_frequency(const StpParams& params, double w, double nu_in);

/// Smallest m with w_eff * (1 - alpha^m) / (1 - alpha) >= theta.
SpikeCount min_spikes_to_threshold(double theta, double w_eff, double alpha);

struct AnalysisPoint {
  double nu_in = 0;
  double period = 0;
  double alpha = 0;
  double f_ss = 0;
  double d_ss = 0;
  double w_eff = 0;
  SpikeCount m_star = SpikeCount::never();
  double response = 0;
};

/// Evaluates one operating point.
AnalysisPoint analyze(const StpParams& params, double w, double theta, double tau_s, double nu_in);

std::vector<AnalysisPoint> frequency_response(const StpParams& params, double w, double theta,
                                              double tau_s, std::span<const double> nu_grid);

// ---------------------------------------------------------------------------
// Dense parameter sweeps.

/// Parameters a sweep axis may vary. df_ratio sets delta_f = df_ratio * delta_d.
enum class SweepParam { nu_in, tau_s, theta, w, tau_f, tau_d, delta_f, delta_d, df_ratio };

SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam p);

struct SweepAxis {
  SweepParam param;
  std::vector<double> values;
};

struct SweepGrid {
  // Outermost first; the last axis varies fastest in the output.
  std::vector<SweepAxis> axes;
  StpParams stp;
  double w = 0.6;
  double theta = 0.8;
  double tau_s = 0.015;
  double nu_in = 100.0;  // used only when nu_in is not an axis

  void validate() const;
  std::size_t size() const;
};

struct SweepRow {
  std::vector<double> coords;  // one per axis
  AnalysisPoint point;
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<SweepRow> rows;  // row-major over axes
};

/// Dense evaluation; `jobs` worker lanes, output independent of `jobs`.
SweepResult sweep(const SweepGrid& grid, int jobs = 1);

/// Header: swept parameter names, f_ss, d_ss, w_eff, m_star, response.
void write_csv(std::ostream& out, const SweepResult& result);

/// Linearly or logarithmically spaced values, endpoints inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

}  // namespace ecram_stp::analysis
