#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ecram_stp::rng {

/// Name recorded in output headers; bump if the stream derivation changes.
inline constexpr std::string_view kGeneratorName = "philox4x32-10/v1";

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
Counter philox4x32_10(Counter ctr, Key key);

/// Stateless stream: draw i of stream s under seed k is a pure function of (k, s, i),
/// so samples can be generated in any order or on any thread.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  /// Four 32-bit words for block `block`.
  Counter block(std::uint64_t block) const;

  /// Uniform in (0, 1), 53-bit resolution, from the first two words of block i.
  double uniform(std::uint64_t i) const;

  /// Standard normal via Box-Muller on block i (both uniforms from one block).
  double normal(std::uint64_t i) const;

  /// Exponential with unit mean.
  double exponential(std::uint64_t i) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace ecram_stp::rng
