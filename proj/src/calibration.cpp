#include "ecram_stp/calibration.hpp"

#include <regex>

#include "ecram_stp/config.hpp"

namespace ecram_stp::calibration {

double resistance_drop(const EcramParams& params, int state, double width, double amplitude) {
  EcramDevice d(params, state);
  const double before = d.resistance();
  d.step(width, amplitude);
  return before - d.resistance();
}

sim::SimResult run_single(const YAML::Node& presets, const SingleRun& spec) {
  const config::NeuronPreset np = config::neuron_preset(presets, spec.preset);
  sim::SimConfig c;
  c.dt = np.dt;
  c.duration = spec.duration;
  c.sources.emplace_back(PeriodicSpec{spec.rate > 0 ? spec.rate : np.rate, -1.0});
  c.neurons.push_back({np.lif, spec.wiring});
  c.synapses.push_back({0, 0, sim::EcramSynapse{np.ecram, spec.state, np.input, StpRead::post_jump}});
  c.record.membrane = false;
  c.record.weights = false;
  return sim::run(c);
}

std::optional<std::size_t> sustained_from(std::span<const int> counts, int value) {
  std::size_t i = counts.size();
  while (i > 0 && counts[i - 1] == value) --i;
  if (i == counts.size()) return std::nullopt;
  return i;
}

std::string encode(std::span<const int> counts) {
  std::string s;
  for (int c : counts) {
    if (c >= 0 && c <= 9) {
      s += static_cast<char>('0' + c);
    } else if (c >= 10 && c < 36) {
      s += static_cast<char>('a' + c - 10);
    } else {
      s += '+';
    }
  }
  return s;
}

bool intermittent_transition(std::span<const int> counts, int hi, int lo, int min_alternations, int min_tail) {
  if (hi < 0 || hi > 9 || lo < 0 || lo > 9) return false;
  const std::string h(1, static_cast<char>('0' + hi));
  const std::string l(1, static_cast<char>('0' + lo));
  const std::regex re("^" + h + "+(" + l + h + "){" + std::to_string(min_alternations) + ",}" + l + "{" +
                      std::to_string(min_tail) + ",}$");
  return std::regex_match(encode(counts), re);
}

}  // namespace ecram_stp::calibration
