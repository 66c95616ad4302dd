#pragma once

// Device/circuit variability: each sample scales a few circuit parameters by
// independent log-normal factors and measures the per-input membrane step and
// the time to the first output under periodic drive.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ecram_stp/csv.hpp"
#include "ecram_stp/ecram.hpp"
#include "ecram_stp/lif.hpp"

namespace ecram_stp::mc {

/// Relative sigma of the factor exp(sigma * z), z ~ N(0, 1), per parameter.
struct Sigma {
  double c_mem = 0;        // divides the per-input step
  double v_threshold = 0;  // scales the threshold voltage
  double leak = 0;         // scales leak_rate or leak_tau
  double g_state = 0;      // scales the programmed conductance
};

struct MonteCarloSpec {
  CircuitLifParams neuron;
  EcramParams device;
  double rate = 1e5;
  double pulse_width = 1e-6;
  double dt = 1e-7;
  int n_samples = 100;
  std::vector<int> states{1, 32, 64, 96, 128};
  Sigma sigma;
  std::int64_t max_inputs = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Sample {
  int sample = 0;
  int state = 0;
  double delta_v = 0;        // V per input
  double time_to_fire = 0;   // s, infinity if it never fired
  std::int64_t inputs_to_fire = 0;  // 0 if it never fired
};

struct StateSummary {
  int state = 0;
  double mean_delta_v = 0, std_delta_v = 0;
  double mean_time_to_fire = 0, std_time_to_fire = 0;  // over samples that fired
  int never_fired = 0;
};

struct Result {
  std::vector<Sample> samples;  // state-major, samples in index order
  std::vector<StateSummary> summary;
};

/// Sample j draws the same factors for every state (common random numbers),
/// so differences between states come from the states alone.
Result monte_carlo(const MonteCarloSpec& spec, int jobs = 1);

/// Columns: sample, state, delta_v_per_input, time_to_fire, inputs_to_fire.
void write_csv(std::ostream& out, const Result& result, const csv::Provenance& prov);

}  // namespace ecram_stp::mc
