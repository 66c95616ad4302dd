#pragma once

#include <string_view>

#include "ecram_stp/ecram.hpp"
#include "ecram_stp/spike_count.hpp"

namespace ecram_stp {

// ---------------------------------------------------------------------------
// Abstract LIF: unitless membrane s, exponential leak, reset to exactly 0.

struct AbstractLifParams {
  double tau_s = 0.015;
  double theta = 0.8;

  void validate() const;
};

struct AbstractLifState {
  double s = 0.0;
  double last_spike_time = -1.0;  // negative until the first spike
};

/// s += w_eff; fires (and resets to 0) when s >= theta. Returns whether it fired.
bool integrate_spike(AbstractLifState& state, const AbstractLifParams& params, double w_eff);

void leak(AbstractLifState& state, const AbstractLifParams& params, double dt);

// ---------------------------------------------------------------------------
// Circuit-behavioral LIF: voltage membrane that moves from rest toward the
// firing rail by delta_v_per_unit_g * g per input, leaks back toward rest,
// and ignores inputs during a hard refractory window after each output.

enum class Polarity { discharge_to_fire, charge_to_fire };
enum class LeakLaw { constant_rate, exponential };

Polarity parse_polarity(std::string_view s);
LeakLaw parse_leak_law(std::string_view s);
std::string_view to_string(Polarity p);
std::string_view to_string(LeakLaw l);

struct CircuitLifParams {
  Polarity polarity = Polarity::discharge_to_fire;
  double v_supply = 1.2;
  double v_threshold = 0.6;
  double delta_v_per_unit_g = 0.0;  // V per siemens
  LeakLaw leak_law = LeakLaw::constant_rate;
  double leak_rate = 0.0;  // V/s, constant_rate law
  double leak_tau = 0.0;   // s, exponential law
  double refractory = 2e-3;
  double spike_width = 1.2e-3;
  // Fraction of the threshold overshoot that survives the reset.
  double reset_carry = 0.0;

  void validate() const;

  double v_rest() const { return polarity == Polarity::discharge_to_fire ? v_supply : 0.0; }
  /// Distance from rest to threshold (always positive for a valid config).
  double threshold_gap() const;
};

enum class InputOutcome { integrated, fired, absorbed };

class CircuitLif {
 public:
  explicit CircuitLif(const CircuitLifParams& params);

  const CircuitLifParams& params() const { return params_; }

  /// Excursion from rest toward the firing rail, in volts (>= 0).
  double excursion() const { return excursion_; }
  double v_mem() const;
  bool refractory() const { return refractory_left_ > 0; }

  /// Inject one input through total conductance `g_total`.
  InputOutcome integrate_spike(double g_total);

  /// Leak toward rest over `dt` and run down the refractory timer.
  void leak(double dt);

  /// Membrane step a single input of conductance `g_total` produces.
  double delta_v(double g_total) const { return params_.delta_v_per_unit_g * g_total; }

 private:
  CircuitLifParams params_;
  double gap_;
  double excursion_ = 0.0;
  double refractory_left_ = 0.0;
};

/// Simulates a periodic input train at `rate` into a neuron at rest through a
/// synapse fixed at nonvolatile state `state` (no volatile modulation) and
/// returns the index of the input that produces the first output.
SpikeCount spikes_to_fire(const CircuitLifParams& neuron, const EcramParams& synapse, int state,
                          double rate);

}  // namespace ecram_stp
