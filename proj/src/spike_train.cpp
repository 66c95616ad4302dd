#include "ecram_stp/spike_train.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecram_stp/errors.hpp"
#include "ecram_stp/rng.hpp"

namespace ecram_stp {

void SpikeTrain::validate() const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0 && times[i] <= duration)) {
      throw ConfigError("spike train " + std::to_string(channel) + ": event outside [0, duration]");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw ConfigError("spike train " + std::to_string(channel) + ": times must be strictly increasing");
    }
  }
}

namespace {

struct Generator {
  int channel;
  double duration;
  std::uint64_t default_seed;

  std::vector<double> operator()(const PeriodicSpec& p) const {
    if (!(p.rate > 0)) throw ConfigError("periodic source: rate must be > 0");
    const double period = 1.0 / p.rate;
    const double first = p.phase < 0 ? period : p.phase;
    std::vector<double> t;
    // Index-based times avoid drift from repeated addition.
    for (std::int64_t k = 0;; ++k) {
      const double tk = first + static_cast<double>(k) * period;
      if (tk > duration * (1 + 1e-12)) break;
      t.push_back(std::min(tk, duration));
    }
    return t;
  }

  std::vector<double> operator()(const PoissonSpec& p) const {
    if (!(p.rate > 0)) throw ConfigError("poisson source: rate must be > 0");
    const rng::CounterStream stream(p.seed.value_or(default_seed), static_cast<std::uint64_t>(channel));
    std::vector<double> t;
    double now = 0;
    for (std::uint64_t i = 0;; ++i) {
      now += stream.exponential(i) / p.rate;
      if (now > duration) break;
      if (!t.empty() && !(now > t.back())) continue;
      t.push_back(now);
    }
    return t;
  }

  std::vector<double> operator()(const ExplicitSpec& e) const { return e.times; }
};

}  // namespace

SpikeTrain generate(int channel, const GeneratorSpec& spec, double duration, std::uint64_t default_seed) {
  if (!(duration >= 0)) throw ConfigError("spike train duration must be >= 0");
  SpikeTrain train{channel, duration, std::visit(Generator{channel, duration, default_seed}, spec)};
  train.validate();
  return train;
}

}  // namespace ecram_stp
