#pragma once

// Measurements behind the preset anchors, shared by the calibration tool and
// the acceptance checks.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "ecram_stp/ecram.hpp"
#include "ecram_stp/sim.hpp"

namespace ecram_stp::calibration {

/// Resistance drop (ohm) right after one gate pulse from baseline.
double resistance_drop(const EcramParams& params, int state, double width, double amplitude);

/// One neuron preset driven through one ECRAM synapse by a periodic train.
struct SingleRun {
  std::string preset;
  int state = 60;
  sim::StpWiring wiring = sim::StpWiring::none;
  double duration = 2.0;
  double rate = 0;  // 0 means the preset rate
};

sim::SimResult run_single(const YAML::Node& presets, const SingleRun& spec);

/// First index from which every remaining count equals `value`.
std::optional<std::size_t> sustained_from(std::span<const int> counts, int value);

/// Counts as a compact string, one character per output ('0'-'9', then 'a'-'z', '+' beyond).
std::string encode(std::span<const int> counts);

/// True for hi+ (lo hi){min_alternations,} lo{min_tail,}: a run at `hi`, an
/// intermittent stretch alternating lo/hi, then a sustained run at `lo` to the end.
bool intermittent_transition(std::span<const int> counts, int hi, int lo, int min_alternations = 2,
                             int min_tail = 10);

}  // namespace ecram_stp::calibration
