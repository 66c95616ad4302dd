#include "ecram_stp/lif.hpp"

#include <cmath>
#include <string>

#include "ecram_stp/errors.hpp"

namespace ecram_stp {

void AbstractLifParams::validate() const {
  if (!(tau_s > 0)) throw DomainError("lif: tau_s must be > 0");
  if (!(theta > 0)) throw DomainError("lif: theta must be > 0");
}

bool integrate_spike(AbstractLifState& state, const AbstractLifParams& params, double w_eff) {
  state.s += w_eff;
  if (state.s >= params.theta) {
    state.s = 0.0;
    return true;
  }
  return false;
}

void leak(AbstractLifState& state, const AbstractLifParams& params, double dt) {
  if (dt < 0) throw DomainError("lif leak: dt must be >= 0");
  if (dt > 0) state.s *= std::exp(-dt / params.tau_s);
}

Polarity parse_polarity(std::string_view s) {
  if (s == "discharge_to_fire") return Polarity::discharge_to_fire;
  if (s == "charge_to_fire") return Polarity::charge_to_fire;
  throw ConfigError("unknown polarity '" + std::string(s) + "'");
}

LeakLaw parse_leak_law(std::string_view s) {
  if (s == "constant_rate") return LeakLaw::constant_rate;
  if (s == "exponential") return LeakLaw::exponential;
  throw ConfigError("unknown leak_law '" + std::string(s) + "'");
}

std::string_view to_string(Polarity p) {
  return p == Polarity::discharge_to_fire ? "discharge_to_fire" : "charge_to_fire";
}

std::string_view to_string(LeakLaw l) {
  return l == LeakLaw::constant_rate ? "constant_rate" : "exponential";
}

double CircuitLifParams::threshold_gap() const {
  return polarity == Polarity::discharge_to_fire ? v_rest() - v_threshold : v_threshold - v_rest();
}

void CircuitLifParams::validate() const {
  if (!(v_supply > 0)) throw DomainError("circuit lif: v_supply must be > 0");
  if (!(v_threshold > 0 && v_threshold < v_supply)) {
    throw DomainError("circuit lif: v_threshold must lie strictly between the rails");
  }
  if (!(delta_v_per_unit_g >= 0)) throw DomainError("circuit lif: delta_v_per_unit_g must be >= 0");
  if (leak_law == LeakLaw::constant_rate && !(leak_rate >= 0)) {
    throw DomainError("circuit lif: leak_rate must be >= 0");
  }
  if (leak_law == LeakLaw::exponential && !(leak_tau > 0)) {
    throw DomainError("circuit lif: leak_tau must be > 0 for the exponential leak law");
  }
  if (!(spike_width > 0) || !(refractory >= spike_width)) {
    throw DomainError("circuit lif: need refractory >= spike_width > 0");
  }
  if (!(reset_carry >= 0 && reset_carry < 1)) throw DomainError("circuit lif: reset_carry must be in [0, 1)");
}

CircuitLif::CircuitLif(const CircuitLifParams& params) : params_(params) {
  params_.validate();
  gap_ = params_.threshold_gap();
}

double CircuitLif::v_mem() const {
  return params_.polarity == Polarity::discharge_to_fire ? params_.v_rest() - excursion_
                                                         : params_.v_rest() + excursion_;
}

InputOutcome CircuitLif::integrate_spike(double g_total) {
  if (refractory_left_ > 0) return InputOutcome::absorbed;
  excursion_ += delta_v(g_total);
  if (excursion_ >= gap_) {
    excursion_ = params_.reset_carry * (excursion_ - gap_);
    refractory_left_ = params_.refractory;
    return InputOutcome::fired;
  }
  return InputOutcome::integrated;
}

void CircuitLif::leak(double dt) {
  if (dt < 0) throw DomainError("circuit lif leak: dt must be >= 0");
  if (dt == 0) return;
  if (params_.leak_law == LeakLaw::constant_rate) {
    excursion_ -= params_.leak_rate * dt;
    if (excursion_ < 0) excursion_ = 0;
  } else {
    excursion_ *= std::exp(-dt / params_.leak_tau);
  }
  // Absorb rounding so a window of k steps of size refractory/k closes on time.
  refractory_left_ -= dt;
  if (refractory_left_ < 1e-12 * dt) refractory_left_ = 0;
}

SpikeCount spikes_to_fire(const CircuitLifParams& neuron, const EcramParams& synapse, int state,
                          double rate) {
  if (!(rate > 0)) throw DomainError("spikes_to_fire: rate must be > 0");
  const double g = g_nonvolatile(synapse, state);
  const double period = 1.0 / rate;
  CircuitLif lif(neuron);
  constexpr std::int64_t kMaxInputs = 1'000'000;
  double previous_peak = -1.0;
  for (std::int64_t n = 1; n <= kMaxInputs; ++n) {
    if (n > 1) lif.leak(period);
    if (lif.integrate_spike(g) == InputOutcome::fired) return SpikeCount::of(n);
    // Post-input peaks rise monotonically from rest; once they stop rising the
    // membrane has reached its asymptote below threshold.
    if (!(lif.excursion() > previous_peak)) return SpikeCount::never();
    previous_peak = lif.excursion();
  }
  return SpikeCount::never();
}

}  // namespace ecram_stp
