#include "ecram_stp/kernels.hpp"
#include "ecram_stp/stp.hpp"

namespace ecram_stp::kernels::scalar {

void abstract_step(const AbstractLanes& l, std::span<const std::uint8_t> events,
                   std::span<std::uint8_t> fired) {
  const std::size_t n = l.s.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = l.s[i] * l.decay_s[i];
    double f = l.f[i] * l.decay_f[i];
    double d = l.d[i] * l.decay_d[i];
    std::uint8_t spiked = 0;
    if (events[i]) {
      f = f + l.delta_f[i];
      d = d + l.delta_d[i];
      s = s + clamp_effective_weight(l.w[i], f, d);
      if (s >= l.theta[i]) {
        s = 0.0;
        spiked = 1;
      }
    }
    l.s[i] = s;
    l.f[i] = f;
    l.d[i] = d;
    fired[i] = spiked;
  }
}

void circuit_step(const CircuitLanes& l, std::span<const std::uint8_t> events, std::span<double> pre,
                  std::span<std::uint8_t> fired) {
  const std::size_t n = l.excursion.size();
  const double eps = 1e-12 * l.dt;
  for (std::size_t i = 0; i < n; ++i) {
    double x = l.excursion[i];
    if (l.exponential_leak) {
      x = x * l.leak_step[i];
    } else {
      x = x - l.leak_step[i];
      if (x < 0) x = 0;
    }
    double r = l.refractory_left[i] - l.dt;
    if (r < eps) r = 0;
    pre[i] = x;
    std::uint8_t spiked = 0;
    if (events[i] && !(r > 0)) {
      x = x + l.delta_v[i];
      if (x >= l.gap[i]) {
        x = l.carry[i] * (x - l.gap[i]);
        r = l.refractory[i];
        spiked = 1;
      }
    }
    l.excursion[i] = x;
    l.refractory_left[i] = r;
    fired[i] = spiked;
  }
}

}  // namespace ecram_stp::kernels::scalar
