#include <atomic>
#include <cstdlib>
#include <string>

#include "ecram_stp/kernels.hpp"

namespace ecram_stp::kernels {

namespace {

// -1: automatic, otherwise a Backend value.
std::atomic<int> g_forced{-1};

Backend detect() {
  if (const char* env = std::getenv("ECRAM_STP_KERNELS"); env && std::string(env) == "scalar") {
    return Backend::scalar;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

std::string_view to_string(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(ECRAM_STP_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Backend>(forced);
  static const Backend detected = detect();
  return detected;
}

void force_backend(std::optional<Backend> b) {
  if (b == Backend::avx2 && !avx2_available()) b = Backend::scalar;
  g_forced.store(b ? static_cast<int>(*b) : -1, std::memory_order_relaxed);
}

void abstract_step(const AbstractLanes& lanes, std::span<const std::uint8_t> events,
                   std::span<std::uint8_t> fired) {
#if defined(ECRAM_STP_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return avx2::abstract_step(lanes, events, fired);
#endif
  scalar::abstract_step(lanes, events, fired);
}

void circuit_step(const CircuitLanes& lanes, std::span<const std::uint8_t> events, std::span<double> pre,
                  std::span<std::uint8_t> fired) {
#if defined(ECRAM_STP_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return avx2::circuit_step(lanes, events, pre, fired);
#endif
  scalar::circuit_step(lanes, events, pre, fired);
}

}  // namespace ecram_stp::kernels
