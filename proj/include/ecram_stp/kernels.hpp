#pragma once

// Lockstep lane kernels: many independent single-input neurons advanced one
// time step at a time in structure-of-arrays form. Every kernel has a scalar
// reference and an AVX2 variant; the variant is chosen at runtime and must
// agree with the reference bit for bit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace ecram_stp::kernels {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);

/// True when the CPU and the build both support the AVX2 path.
bool avx2_available();

/// Backend used by the dispatching entry points. Defaults to the widest
/// available; ECRAM_STP_KERNELS=scalar in the environment forces the reference.
Backend active_backend();

/// Pins the backend (tests); nullopt restores automatic selection.
void force_backend(std::optional<Backend> b);

/// Abstract LIF lanes, each fed by one STP synapse.
struct AbstractLanes {
  std::span<double> s, f, d;
  // Per-step decay factors e^{-dt/tau}.
  std::span<const double> decay_s, decay_f, decay_d;
  std::span<const double> delta_f, delta_d, w, theta;
};

/// One step: decay everything, then for lanes with events[i] != 0 apply the
/// synaptic jump, inject the post-jump effective weight, and fire/reset at
/// s >= theta. fired[i] is set to 1 for lanes that fired, else 0.
void abstract_step(const AbstractLanes& lanes, std::span<const std::uint8_t> events,
                   std::span<std::uint8_t> fired);

/// Circuit-behavioral lanes with a fixed synaptic conductance per lane.
struct CircuitLanes {
  std::span<double> excursion, refractory_left;
  // Per-step leak: excursion = max(excursion - leak_step, 0) (constant rate) or
  // excursion *= leak_step (exponential).
  std::span<const double> leak_step;
  std::span<const double> delta_v, gap, carry, refractory;
  bool exponential_leak = false;
  double dt = 0;
};

/// One step: leak and run down refractory timers, then integrate events.
/// pre[i] receives the excursion just before injection (for sub-step crossing
/// interpolation); fired[i] is 1 for lanes that fired.
void circuit_step(const CircuitLanes& lanes, std::span<const std::uint8_t> events,
                  std::span<double> pre, std::span<std::uint8_t> fired);

namespace scalar {
void abstract_step(const AbstractLanes& lanes, std::span<const std::uint8_t> events,
                   std::span<std::uint8_t> fired);
void circuit_step(const CircuitLanes& lanes, std::span<const std::uint8_t> events,
                  std::span<double> pre, std::span<std::uint8_t> fired);
}  // namespace scalar

namespace avx2 {
void abstract_step(const AbstractLanes& lanes, std::span<const std::uint8_t> events,
                   std::span<std::uint8_t> fired);
void circuit_step(const CircuitLanes& lanes, std::span<const std::uint8_t> events,
                  std::span<double> pre, std::span<std::uint8_t> fired);
}  // namespace avx2

}  // namespace ecram_stp::kernels
