#pragma once

// Fixed-step simulator: spike sources -> synapses (abstract STP or ECRAM) ->
// neurons (abstract or circuit-behavioral). Within each step the order is
// decay -> input events (synapse jump, membrane injection, threshold check
// per event) -> refractory bookkeeping. Events snap to floor(t / dt).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ecram_stp/csv.hpp"
#include "ecram_stp/ecram.hpp"
#include "ecram_stp/lif.hpp"
#include "ecram_stp/spike_train.hpp"
#include "ecram_stp/stp.hpp"

namespace ecram_stp::sim {

enum class StpWiring { none, synaptic_facilitation, intrinsic_excitability };

StpWiring parse_wiring(std::string_view s);
std::string_view to_string(StpWiring w);

struct GatePulse {
  double width = 1e-3;
  double amplitude = 1.2;
};

struct AbstractSynapse {
  StpParams stp;
  double w = 0.6;
  StpRead read = StpRead::post_jump;
};

struct EcramSynapse {
  EcramParams device;
  int state = 1;
  GatePulse input_pulse;  // gate pulse each input applies under synaptic wiring
  StpRead read = StpRead::post_jump;
};

struct NeuronSpec {
  std::variant<AbstractLifParams, CircuitLifParams> model;
  StpWiring wiring = StpWiring::none;
};

struct SynapseSpec {
  int source = 0;
  int neuron = 0;
  std::variant<AbstractSynapse, EcramSynapse> model;
};

struct RecordSpec {
  bool membrane = true;
  bool weights = true;
  int every = 1;  // keep one trace row every N steps
};

struct SimConfig {
  double dt = 1e-4;
  double duration = 1.0;
  std::vector<GeneratorSpec> sources;
  std::vector<NeuronSpec> neurons;
  std::vector<SynapseSpec> synapses;
  RecordSpec record;
  std::uint64_t seed = 0;
  bool allow_coarse_dt = false;

  /// Structural checks (ConfigError) and the time-step guard (NumericalGuardError).
  void validate() const;
  /// Smallest time constant among all configured dynamics.
  double min_time_constant() const;
};

struct SpikeEvent {
  int neuron;
  double time;
};

struct Trace {
  std::vector<std::string> columns;
  std::vector<double> time;
  std::vector<double> values;  // row-major, columns.size() per row
};

struct EventTally {
  std::int64_t generated = 0;
  std::int64_t integrated = 0;  // includes inputs that triggered an output
  std::int64_t absorbed = 0;    // arrived during a refractory window
};

struct SimResult {
  std::vector<SpikeEvent> raster;
  Trace trace;
  // Per neuron: number of inputs integrated since the previous output, one
  // entry per output spike.
  std::vector<std::vector<int>> input_counts;
  EventTally tally;
  std::vector<std::string> warnings;
};

SimResult run(const SimConfig& config);

void write_raster_csv(std::ostream& out, const SimResult& result, const csv::Provenance& prov);
void write_trace_csv(std::ostream& out, const SimResult& result, const csv::Provenance& prov);

}  // namespace ecram_stp::sim
