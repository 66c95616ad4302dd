#pragma once

// Behavioral model of a three-terminal ECRAM synapse: a linear ladder of
// nonvolatile conductance states with a first-order volatile transient on top.

namespace ecram_stp {

struct EcramParams {
  int n_states = 128;
  double g_state_min = 1e-6;  // S
  double g_state_max = 2e-6;  // S
  double tau_rise = 1e-2;     // s, time constant while the gate is biased
  double tau_decay = 1.0;     // s, relaxation after the gate is released
  double drive_gain = 0.0;    // S/V at g_state_min
  double v_gate_threshold = 0.0;
  // Exponent on (g_nv / g_state_min) applied to the volatile drive.
  // 0 gives a state-independent increment, 1 an increment proportional to the
  // programmed conductance.
  double state_scaling = 0.0;

  void validate() const;

  /// Volatile equilibrium increment for a gate held at `v_gate` with the device
  /// programmed to `state`. Zero at or below the gate threshold.
  double g_drive(double v_gate, int state) const;
};

/// Conductance of nonvolatile state `state` (1-based) on the linear ladder.
double g_nonvolatile(const EcramParams& params, int state);

class EcramDevice {
 public:
  EcramDevice(const EcramParams& params, int state);

  const EcramParams& params() const { return params_; }
  int state() const { return state_; }
  double g_volatile() const { return g_volatile_; }
  double g_nv() const { return g_nv_; }
  double g_total() const { return g_nv_ + g_volatile_; }
  double resistance() const { return 1.0 / g_total(); }

  /// Advance by `dt` with the gate held at `v_gate`. Exact for a gate voltage
  /// that is constant over the step.
  void step(double dt, double v_gate);

  /// Volatile conductance this device would reach after `dt` at `v_gate`,
  /// without mutating it.
  double projected_volatile(double dt, double v_gate) const;

  void program_state(int new_state);

  friend bool operator==(const EcramDevice& a, const EcramDevice& b) {
    return a.state_ == b.state_ && a.g_volatile_ == b.g_volatile_ && a.g_nv_ == b.g_nv_;
  }

 private:
  EcramParams params_;
  int state_;
  double g_nv_;
  double g_volatile_ = 0.0;
};

}  // namespace ecram_stp
