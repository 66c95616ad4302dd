#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace ecram_stp {

struct PeriodicSpec {
  double rate = 100.0;
  double phase = -1.0;  // time of the first spike; negative means one period in
};

struct PoissonSpec {
  double rate = 100.0;
  std::optional<std::uint64_t> seed;  // falls back to the run seed
};

struct ExplicitSpec {
  std::vector<double> times;
};

using GeneratorSpec = std::variant<PeriodicSpec, PoissonSpec, ExplicitSpec>;

struct SpikeTrain {
  int channel = 0;
  double duration = 0.0;
  std::vector<double> times;  // strictly increasing, within [0, duration]

  void validate() const;
};

/// Materializes a train on [0, duration]. Poisson trains draw from stream
/// `channel` of the counter-based generator, so each channel is independent.
SpikeTrain generate(int channel, const GeneratorSpec& spec, double duration,
                    std::uint64_t default_seed = 0);

}  // namespace ecram_stp
