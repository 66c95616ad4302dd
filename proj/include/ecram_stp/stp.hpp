#pragma once

// Facilitation/depression synapse: per-spike jumps in f and d, exponential
// relaxation between spikes, combined into a sign-preserving effective weight.

namespace ecram_stp {

struct StpParams {
  double tau_f = 0.05;
  double tau_d = 0.1;
  double delta_f = 0.0;
  double delta_d = 0.0;

  void validate() const;
};

struct StpSynapseState {
  double w = 0.0;  // base efficacy, signed
  double f = 0.0;
  double d = 0.0;

  friend bool operator==(const StpSynapseState&, const StpSynapseState&) = default;
};

/// Whether a spike's own jump is visible to the membrane injection it causes.
enum class StpRead { post_jump, pre_jump };

StpSynapseState decay(StpSynapseState state, const StpParams& params, double dt);

StpSynapseState on_presynaptic_spike(StpSynapseState state, const StpParams& params);

/// max(w + f - d, 0) for w > 0, min(w + d - f, 0) for w < 0, 0 for w == 0.
double effective_weight(const StpSynapseState& state);

/// Same clamp on raw values; shared with the lane kernels and closed-form code.
inline double clamp_effective_weight(double w, double f, double d) {
  if (w > 0) {
    const double v = w + f - d;
    return v > 0 ? v : 0.0;
  }
  if (w < 0) {
    const double v = w + d - f;
    return v < 0 ? v : 0.0;
  }
  return 0.0;
}

}  // namespace ecram_stp
