#include "ecram_stp/montecarlo.hpp"

#include <cmath>
#include <ostream>

#include "ecram_stp/errors.hpp"
#include "ecram_stp/lanes.hpp"
#include "ecram_stp/rng.hpp"

namespace ecram_stp::mc {

namespace {

enum Stream : std::uint64_t { kCmem = 0, kThreshold = 1, kLeak = 2, kGstate = 3 };

double factor(std::uint64_t seed, Stream stream, int sample, double sigma) {
  if (sigma == 0) return 1.0;
  return std::exp(sigma * rng::CounterStream(seed, stream).normal(static_cast<std::uint64_t>(sample)));
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0;
  sd = 0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

void MonteCarloSpec::validate() const {
  neuron.validate();
  device.validate();
  if (n_samples < 1) throw ConfigError("montecarlo: n_samples must be >= 1");
  if (states.empty()) throw ConfigError("montecarlo: states must be nonempty");
  for (int s : states) (void)g_nonvolatile(device, s);
  for (double s : {sigma.c_mem, sigma.v_threshold, sigma.leak, sigma.g_state}) {
    if (!(s >= 0)) throw ConfigError("montecarlo: sigma must be >= 0");
  }
  if (!(rate > 0) || !(pulse_width > 0) || !(dt > 0)) {
    throw ConfigError("montecarlo: rate, pulse_width and dt must be > 0");
  }
  if (max_inputs < 1) throw ConfigError("montecarlo: max_inputs must be >= 1");
}

Result monte_carlo(const MonteCarloSpec& spec, int jobs) {
  spec.validate();
  const bool exponential = spec.neuron.leak_law == LeakLaw::exponential;
  std::vector<lanes::CircuitLane> lane_spec;
  std::vector<Sample> samples;
  for (int state : spec.states) {
    const double g = g_nonvolatile(spec.device, state);
    for (int j = 0; j < spec.n_samples; ++j) {
      const double c = factor(spec.seed, kCmem, j, spec.sigma.c_mem);
      const double vt = factor(spec.seed, kThreshold, j, spec.sigma.v_threshold);
      const double lk = factor(spec.seed, kLeak, j, spec.sigma.leak);
      const double gs = factor(spec.seed, kGstate, j, spec.sigma.g_state);
      lanes::CircuitLane l;
      l.delta_v = spec.neuron.delta_v_per_unit_g * (g * gs) / c;
      l.gap = std::abs(spec.neuron.v_rest() - spec.neuron.v_threshold * vt);
      l.leak = (exponential ? spec.neuron.leak_tau : spec.neuron.leak_rate) * lk;
      l.carry = spec.neuron.reset_carry;
      l.refractory = spec.neuron.refractory;
      l.rate = spec.rate;
      l.pulse_width = spec.pulse_width;
      lane_spec.push_back(l);
      samples.push_back({j, state, l.delta_v, 0.0, 0});
    }
  }
  const auto first = lanes::first_fire(lane_spec, spec.neuron.leak_law, spec.dt, spec.max_inputs, jobs);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i].time_to_fire = first[i].time_to_fire;
    samples[i].inputs_to_fire = first[i].inputs;
  }

  Result result{std::move(samples), {}};
  for (std::size_t k = 0; k < spec.states.size(); ++k) {
    StateSummary s;
    s.state = spec.states[k];
    std::vector<double> dv, ttf;
    for (int j = 0; j < spec.n_samples; ++j) {
      const Sample& x = result.samples[k * spec.n_samples + j];
      dv.push_back(x.delta_v);
      if (std::isfinite(x.time_to_fire)) {
        ttf.push_back(x.time_to_fire);
      } else {
        ++s.never_fired;
      }
    }
    mean_std(dv, s.mean_delta_v, s.std_delta_v);
    mean_std(ttf, s.mean_time_to_fire, s.std_time_to_fire);
    result.summary.push_back(s);
  }
  return result;
}

void write_csv(std::ostream& out, const Result& result, const csv::Provenance& prov) {
  prov.write(out);
  out << "sample,state,delta_v_per_input,time_to_fire,inputs_to_fire\n";
  for (const Sample& s : result.samples) {
    out << s.sample << ',' << s.state << ',' << csv::number(s.delta_v) << ','
        << csv::number(s.time_to_fire) << ',' << s.inputs_to_fire << '\n';
  }
}

}  // namespace ecram_stp::mc
