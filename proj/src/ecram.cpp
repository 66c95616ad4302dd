#include "ecram_stp/ecram.hpp"

#include <cmath>
#include <string>

#include "ecram_stp/errors.hpp"

namespace ecram_stp {

namespace {

void check_state(const EcramParams& p, int state) {
  if (state < 1 || state > p.n_states) {
    throw DomainError("ECRAM state " + std::to_string(state) + " outside [1, " +
                      std::to_string(p.n_states) + "]");
  }
}

}  // namespace

void EcramParams::validate() const {
  if (n_states < 1) throw DomainError("ecram: n_states must be >= 1");
  if (!(g_state_min > 0)) throw DomainError("ecram: g_state_min must be > 0");
  if (!(g_state_max > g_state_min)) throw DomainError("ecram: g_state_max must exceed g_state_min");
  if (!(tau_rise > 0) || !(tau_decay > 0)) throw DomainError("ecram: time constants must be > 0");
  if (drive_gain < 0) throw DomainError("ecram: drive_gain must be >= 0");
  if (state_scaling < 0) throw DomainError("ecram: state_scaling must be >= 0");
}

double EcramParams::g_drive(double v_gate, int state) const {
  const double over = v_gate - v_gate_threshold;
  if (!(over > 0)) return 0.0;
  double g = drive_gain * over;
  if (state_scaling != 0.0) g *= std::pow(g_nonvolatile(*this, state) / g_state_min, state_scaling);
  return g;
}

double g_nonvolatile(const EcramParams& p, int state) {
  check_state(p, state);
  if (p.n_states == 1) return p.g_state_min;
  const double frac = static_cast<double>(state - 1) / static_cast<double>(p.n_states - 1);
  return p.g_state_min + frac * (p.g_state_max - p.g_state_min);
}

EcramDevice::EcramDevice(const EcramParams& params, int state) : params_(params), state_(state) {
  params_.validate();
  g_nv_ = g_nonvolatile(params_, state);
}

double EcramDevice::projected_volatile(double dt, double v_gate) const {
  if (dt < 0) throw DomainError("ecram step: dt must be >= 0");
  if (dt == 0) return g_volatile_;
  const double target = params_.g_drive(v_gate, state_);
  if (target > 0) {
    return target + (g_volatile_ - target) * std::exp(-dt / params_.tau_rise);
  }
  return g_volatile_ * std::exp(-dt / params_.tau_decay);
}

void EcramDevice::step(double dt, double v_gate) {
  g_volatile_ = projected_volatile(dt, v_gate);
  if (g_volatile_ < 0) g_volatile_ = 0;
}

void EcramDevice::program_state(int new_state) {
  g_nv_ = g_nonvolatile(params_, new_state);
  state_ = new_state;
}

}  // namespace ecram_stp
