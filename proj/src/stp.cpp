#include "ecram_stp/stp.hpp"

#include <cmath>

#include "ecram_stp/errors.hpp"

namespace ecram_stp {

void StpParams::validate() const {
  if (!(tau_f > 0) || !(tau_d > 0)) throw DomainError("stp: tau_f and tau_d must be > 0");
  if (delta_f < 0 || delta_d < 0) throw DomainError("stp: delta_f and delta_d must be >= 0");
}

StpSynapseState decay(StpSynapseState state, const StpParams& params, double dt) {
  if (dt < 0) throw DomainError("stp decay: dt must be >= 0");
  if (dt == 0) return state;
  state.f *= std::exp(-dt / params.tau_f);
  state.d *= std::exp(-dt / params.tau_d);
  return state;
}

StpSynapseState on_presynaptic_spike(StpSynapseState state, const StpParams& params) {
  state.f += params.delta_f;
  state.d += params.delta_d;
  return state;
}

double effective_weight(const StpSynapseState& state) {
  return clamp_effective_weight(state.w, state.f, state.d);
}

}  // namespace ecram_stp
