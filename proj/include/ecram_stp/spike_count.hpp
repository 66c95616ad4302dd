#pragma once

#include <cstdint>
#include <string>

namespace ecram_stp {

/// Number of input spikes needed to reach threshold, or "never" when the
/// membrane's asymptote stays below threshold. Never is a value, not an error.
class SpikeCount {
 public:
  static constexpr SpikeCount never() { return SpikeCount{}; }
  static constexpr SpikeCount of(std::int64_t n) { return SpikeCount{n}; }

  constexpr bool finite() const { return value_ > 0; }
  constexpr std::int64_t value() const { return value_; }

  /// 1/m for finite counts, 0 otherwise.
  constexpr double response() const { return finite() ? 1.0 / static_cast<double>(value_) : 0.0; }

  /// "inf" for never, decimal integer otherwise.
  std::string to_string() const { return finite() ? std::to_string(value_) : std::string("inf"); }

  friend constexpr bool operator==(SpikeCount, SpikeCount) = default;

 private:
  constexpr SpikeCount() = default;
  constexpr explicit SpikeCount(std::int64_t n) : value_(n) {}
  std::int64_t value_ = 0;
};

}  // namespace ecram_stp
