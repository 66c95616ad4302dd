// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "ecram_stp/kernels.hpp"

namespace ecram_stp::kernels::avx2 {

namespace {

// Lane mask (all-ones per double) from four event bytes.
inline __m256d event_mask(const std::uint8_t* ev) {
  std::uint32_t packed;
  __builtin_memcpy(&packed, ev, 4);
  const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(packed)));
  return _mm256_castsi256_pd(_mm256_cmpgt_epi64(wide, _mm256_setzero_si256()));
}

inline void store_mask(std::uint8_t* out, __m256d m) {
  const int bits = _mm256_movemask_pd(m);
  out[0] = bits & 1;
  out[1] = (bits >> 1) & 1;
  out[2] = (bits >> 2) & 1;
  out[3] = (bits >> 3) & 1;
}

// max(w + f - d, 0) for w > 0, min(w + d - f, 0) for w < 0, 0 otherwise;
// operand order matches the scalar clamp so results are identical.
inline __m256d effective_weight(__m256d w, __m256d f, __m256d d) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d pos = _mm256_max_pd(_mm256_sub_pd(_mm256_add_pd(w, f), d), zero);
  const __m256d neg = _mm256_min_pd(_mm256_sub_pd(_mm256_add_pd(w, d), f), zero);
  __m256d r = _mm256_blendv_pd(zero, pos, _mm256_cmp_pd(w, zero, _CMP_GT_OQ));
  return _mm256_blendv_pd(r, neg, _mm256_cmp_pd(w, zero, _CMP_LT_OQ));
}

}  // namespace

void abstract_step(const AbstractLanes& l, std::span<const std::uint8_t> events,
                   std::span<std::uint8_t> fired) {
  const std::size_t n = l.s.size();
  const std::size_t vec_end = n - n % 4;
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0; i < vec_end; i += 4) {
    __m256d s = _mm256_mul_pd(_mm256_loadu_pd(&l.s[i]), _mm256_loadu_pd(&l.decay_s[i]));
    __m256d f = _mm256_mul_pd(_mm256_loadu_pd(&l.f[i]), _mm256_loadu_pd(&l.decay_f[i]));
    __m256d d = _mm256_mul_pd(_mm256_loadu_pd(&l.d[i]), _mm256_loadu_pd(&l.decay_d[i]));
    const __m256d ev = event_mask(&events[i]);
    f = _mm256_blendv_pd(f, _mm256_add_pd(f, _mm256_loadu_pd(&l.delta_f[i])), ev);
    d = _mm256_blendv_pd(d, _mm256_add_pd(d, _mm256_loadu_pd(&l.delta_d[i])), ev);
    const __m256d wp = effective_weight(_mm256_loadu_pd(&l.w[i]), f, d);
    s = _mm256_blendv_pd(s, _mm256_add_pd(s, wp), ev);
    const __m256d fire = _mm256_and_pd(ev, _mm256_cmp_pd(s, _mm256_loadu_pd(&l.theta[i]), _CMP_GE_OQ));
    s = _mm256_blendv_pd(s, zero, fire);
    _mm256_storeu_pd(&l.s[i], s);
    _mm256_storeu_pd(&l.f[i], f);
    _mm256_storeu_pd(&l.d[i], d);
    store_mask(&fired[i], fire);
  }
  if (vec_end < n) {
    auto tail = [&](auto sp) { return sp.subspan(vec_end); };
    const AbstractLanes rest{tail(l.s),       tail(l.f),       tail(l.d),     tail(l.decay_s),
                             tail(l.decay_f), tail(l.decay_d), tail(l.delta_f), tail(l.delta_d),
                             tail(l.w),       tail(l.theta)};
    scalar::abstract_step(rest, events.subspan(vec_end), fired.subspan(vec_end));
  }
}

void circuit_step(const CircuitLanes& l, std::span<const std::uint8_t> events, std::span<double> pre,
                  std::span<std::uint8_t> fired) {
  const std::size_t n = l.excursion.size();
  const std::size_t vec_end = n - n % 4;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d dt = _mm256_set1_pd(l.dt);
  const __m256d eps = _mm256_set1_pd(1e-12 * l.dt);
  for (std::size_t i = 0; i < vec_end; i += 4) {
    __m256d x = _mm256_loadu_pd(&l.excursion[i]);
    const __m256d leak = _mm256_loadu_pd(&l.leak_step[i]);
    if (l.exponential_leak) {
      x = _mm256_mul_pd(x, leak);
    } else {
      x = _mm256_sub_pd(x, leak);
      x = _mm256_blendv_pd(x, zero, _mm256_cmp_pd(x, zero, _CMP_LT_OQ));
    }
    __m256d r = _mm256_sub_pd(_mm256_loadu_pd(&l.refractory_left[i]), dt);
    r = _mm256_blendv_pd(r, zero, _mm256_cmp_pd(r, eps, _CMP_LT_OQ));
    _mm256_storeu_pd(&pre[i], x);
    const __m256d active = _mm256_andnot_pd(_mm256_cmp_pd(r, zero, _CMP_GT_OQ), event_mask(&events[i]));
    const __m256d gap = _mm256_loadu_pd(&l.gap[i]);
    const __m256d xn = _mm256_add_pd(x, _mm256_loadu_pd(&l.delta_v[i]));
    const __m256d fire = _mm256_and_pd(active, _mm256_cmp_pd(xn, gap, _CMP_GE_OQ));
    x = _mm256_blendv_pd(x, xn, active);
    x = _mm256_blendv_pd(x, _mm256_mul_pd(_mm256_loadu_pd(&l.carry[i]), _mm256_sub_pd(xn, gap)), fire);
    r = _mm256_blendv_pd(r, _mm256_loadu_pd(&l.refractory[i]), fire);
    _mm256_storeu_pd(&l.excursion[i], x);
    _mm256_storeu_pd(&l.refractory_left[i], r);
    store_mask(&fired[i], fire);
  }
  if (vec_end < n) {
    auto tail = [&](auto sp) { return sp.subspan(vec_end); };
    const CircuitLanes rest{tail(l.excursion), tail(l.refractory_left), tail(l.leak_step),
                            tail(l.delta_v),   tail(l.gap),             tail(l.carry),
                            tail(l.refractory), l.exponential_leak,     l.dt};
    scalar::circuit_step(rest, events.subspan(vec_end), pre.subspan(vec_end), fired.subspan(vec_end));
  }
}

}  // namespace ecram_stp::kernels::avx2
