#pragma once

// YAML configuration: shipped presets, run files, dotted-path overrides, and
// a canonical form whose hash identifies a resolved run.

#include <cstdint>
#include <string>
#include <string_view>

#include <yaml-cpp/yaml.h>

#include "json.hpp"

#include "ecram_stp/analysis.hpp"
#include "ecram_stp/ecram.hpp"
#include "ecram_stp/lif.hpp"
#include "ecram_stp/montecarlo.hpp"
#include "ecram_stp/sim.hpp"

namespace ecram_stp::config {

/// $ECRAM_STP_PRESETS if set, else the presets file in the source tree.
std::string default_presets_path();

/// Parses a file; throws ConfigError with the path on failure.
YAML::Node load_file(const std::string& path);

/// "5ms", "10 us", "2s", "100ns" or a bare number of seconds.
double parse_duration(std::string_view text);
/// "100Hz", "100 kHz" or a bare number of hertz.
double parse_rate(std::string_view text);

/// Sets `dotted` (e.g. "neuron.delay_feedback_slow.leak_rate" or
/// "synapses.0.state") to `value`, parsed as a YAML scalar or flow collection.
void set_path(YAML::Node& root, std::string_view dotted, std::string_view value);

/// Snapshot form used in manifests. Numeric-looking scalars become numbers,
/// true/false become booleans, everything else stays a string. Object keys
/// are sorted, so dump() is canonical.
nlohmann::json to_json(const YAML::Node& node);
/// JSON is a YAML subset, so this is a plain re-parse.
YAML::Node from_json(const nlohmann::json& j);
/// FNV-1a of the canonical dump.
std::uint64_t hash(const nlohmann::json& snapshot);

EcramParams ecram_params(const YAML::Node& presets, const std::string& name);

struct NeuronPreset {
  std::string name;
  CircuitLifParams lif;
  std::string ecram_name;
  EcramParams ecram;
  double rate = 100.0;
  sim::GatePulse input;
  double dt = 1e-4;
};

NeuronPreset neuron_preset(const YAML::Node& presets, const std::string& name);

/// Builds an engine config from a run file (schema in docs/config.md).
sim::SimConfig sim_config(const YAML::Node& run, const YAML::Node& presets);

/// Monte-Carlo spec from a `montecarlo` section (presets or run file).
mc::MonteCarloSpec mc_spec(const YAML::Node& section, const YAML::Node& presets);

/// Base analysis point from `analysis.base`.
struct AnalysisBase {
  StpParams stp;
  double w = 0.6;
  double theta = 0.8;
  double tau_s = 0.015;
};
AnalysisBase analysis_base(const YAML::Node& presets);

/// A list of values or {lin: [lo, hi], n} / {log: [lo, hi], n}.
std::vector<double> axis_values(const YAML::Node& node);

}  // namespace ecram_stp::config
