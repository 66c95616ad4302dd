#include "ecram_stp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ecram_stp/errors.hpp"

namespace ecram_stp::sim {

StpWiring parse_wiring(std::string_view s) {
  if (s == "none") return StpWiring::none;
  if (s == "synaptic" || s == "synaptic_facilitation") return StpWiring::synaptic_facilitation;
  if (s == "intrinsic" || s == "intrinsic_excitability") return StpWiring::intrinsic_excitability;
  throw ConfigError("unknown stp wiring '" + std::string(s) + "'");
}

std::string_view to_string(StpWiring w) {
  switch (w) {
    case StpWiring::none: return "none";
    case StpWiring::synaptic_facilitation: return "synaptic_facilitation";
    case StpWiring::intrinsic_excitability: return "intrinsic_excitability";
  }
  return "none";
}

double SimConfig::min_time_constant() const {
  double tau = std::numeric_limits<double>::infinity();
  for (const auto& n : neurons) {
    if (const auto* a = std::get_if<AbstractLifParams>(&n.model)) {
      tau = std::min(tau, a->tau_s);
    } else {
      const auto& c = std::get<CircuitLifParams>(n.model);
      if (c.leak_law == LeakLaw::exponential) tau = std::min(tau, c.leak_tau);
    }
  }
  for (const auto& s : synapses) {
    if (const auto* a = std::get_if<AbstractSynapse>(&s.model)) {
      tau = std::min({tau, a->stp.tau_f, a->stp.tau_d});
    } else {
      const auto& e = std::get<EcramSynapse>(s.model);
      tau = std::min({tau, e.device.tau_rise, e.device.tau_decay});
    }
  }
  return tau;
}

void SimConfig::validate() const {
  if (!(dt > 0)) throw ConfigError("dt must be > 0");
  if (!(duration >= dt)) throw ConfigError("duration must be >= dt");
  if (record.every < 1) throw ConfigError("record.every must be >= 1");
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    const auto& n = neurons[i];
    if (const auto* a = std::get_if<AbstractLifParams>(&n.model)) {
      a->validate();
      if (n.wiring != StpWiring::none) {
        throw ConfigError("neuron " + std::to_string(i) + ": stp wiring requires a circuit neuron");
      }
    } else {
      std::get<CircuitLifParams>(n.model).validate();
    }
  }
  for (std::size_t i = 0; i < synapses.size(); ++i) {
    const auto& s = synapses[i];
    const std::string where = "synapse " + std::to_string(i);
    if (s.source < 0 || static_cast<std::size_t>(s.source) >= sources.size()) {
      throw ConfigError(where + ": source index out of range");
    }
    if (s.neuron < 0 || static_cast<std::size_t>(s.neuron) >= neurons.size()) {
      throw ConfigError(where + ": neuron index out of range");
    }
    const bool abstract_neuron = std::holds_alternative<AbstractLifParams>(neurons[s.neuron].model);
    if (const auto* a = std::get_if<AbstractSynapse>(&s.model)) {
      a->stp.validate();
      if (!abstract_neuron) throw ConfigError(where + ": abstract synapse must target an abstract neuron");
    } else {
      const auto& e = std::get<EcramSynapse>(s.model);
      e.device.validate();
      (void)g_nonvolatile(e.device, e.state);
      if (!(e.input_pulse.width > 0)) throw ConfigError(where + ": input pulse width must be > 0");
      if (abstract_neuron) throw ConfigError(where + ": ECRAM synapse must target a circuit neuron");
    }
  }
  const double tau = min_time_constant();
  if (dt > tau && !allow_coarse_dt) {
    throw NumericalGuardError("dt " + csv::number(dt) + " s exceeds the fastest time constant " +
                              csv::number(tau) + " s (pass allow_coarse_dt to override)");
  }
}

namespace {

struct AbstractNeuronRt {
  AbstractLifParams params;
  AbstractLifState state;
  double decay;
};

struct AbstractSynapseRt {
  AbstractSynapse spec;
  StpSynapseState state;
  double decay_f, decay_d;
};

struct EcramSynapseRt {
  EcramSynapse spec;
  EcramDevice device;
  double gate_end = -1.0;
  double gate_amplitude = 0.0;
};

struct NeuronRt {
  std::variant<AbstractNeuronRt, CircuitLif> model;
  StpWiring wiring;
  std::vector<int> ecram_synapses;
  int inputs_since_output = 0;
};

using SynapseRt = std::variant<AbstractSynapseRt, EcramSynapseRt>;

// Portion of (t_prev, t_prev + dt] covered by a gate window that ends at gate_end.
double gate_overlap(double gate_end, double t_prev, double dt) {
  double on = gate_end - t_prev;
  if (on <= 1e-9 * dt) return 0.0;
  if (on >= dt * (1 - 1e-9)) return dt;
  return on;
}

void open_gate(EcramSynapseRt& syn, double t, const GatePulse& pulse) {
  const double end = t + pulse.width;
  if (end > syn.gate_end) syn.gate_end = end;
  syn.gate_amplitude = pulse.amplitude;
}

}  // namespace

SimResult run(const SimConfig& config) {
  config.validate();
  SimResult result;
  const double dt = config.dt;
  if (dt > config.min_time_constant() / 10) {
    result.warnings.push_back("dt exceeds a tenth of the fastest time constant");
  }
  const auto n_steps = static_cast<std::int64_t>(std::llround(config.duration / dt));

  // Events bucketed by step index.
  std::vector<std::pair<std::int64_t, int>> events;
  for (std::size_t src = 0; src < config.sources.size(); ++src) {
    const SpikeTrain train = generate(static_cast<int>(src), config.sources[src], config.duration, config.seed);
    for (double t : train.times) {
      auto k = static_cast<std::int64_t>(std::floor(t / dt + 1e-9));
      events.emplace_back(std::clamp<std::int64_t>(k, 0, n_steps), static_cast<int>(src));
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  result.tally.generated = static_cast<std::int64_t>(events.size());

  std::vector<NeuronRt> neurons;
  neurons.reserve(config.neurons.size());
  for (const auto& n : config.neurons) {
    if (const auto* a = std::get_if<AbstractLifParams>(&n.model)) {
      neurons.push_back({AbstractNeuronRt{*a, {}, std::exp(-dt / a->tau_s)}, n.wiring, {}, 0});
    } else {
      neurons.push_back({CircuitLif(std::get<CircuitLifParams>(n.model)), n.wiring, {}, 0});
    }
  }
  std::vector<SynapseRt> synapses;
  std::vector<std::vector<int>> by_source(config.sources.size());
  for (std::size_t i = 0; i < config.synapses.size(); ++i) {
    const auto& s = config.synapses[i];
    by_source[s.source].push_back(static_cast<int>(i));
    if (const auto* a = std::get_if<AbstractSynapse>(&s.model)) {
      synapses.emplace_back(AbstractSynapseRt{*a, StpSynapseState{a->w, 0, 0}, std::exp(-dt / a->stp.tau_f),
                                              std::exp(-dt / a->stp.tau_d)});
    } else {
      const auto& e = std::get<EcramSynapse>(s.model);
      synapses.emplace_back(EcramSynapseRt{e, EcramDevice(e.device, e.state)});
      neurons[s.neuron].ecram_synapses.push_back(static_cast<int>(i));
    }
  }

  result.input_counts.assign(neurons.size(), {});
  Trace& trace = result.trace;
  if (config.record.membrane) {
    for (std::size_t i = 0; i < neurons.size(); ++i) trace.columns.push_back("neuron" + std::to_string(i) + ".v");
  }
  if (config.record.weights) {
    for (std::size_t i = 0; i < synapses.size(); ++i) {
      const bool ecram = std::holds_alternative<EcramSynapseRt>(synapses[i]);
      trace.columns.push_back("syn" + std::to_string(i) + (ecram ? ".g" : ".w_eff"));
    }
  }

  auto fire = [&](int ni, double t) {
    NeuronRt& n = neurons[ni];
    result.raster.push_back({ni, t});
    result.input_counts[ni].push_back(n.inputs_since_output);
    n.inputs_since_output = 0;
    if (n.wiring == StpWiring::intrinsic_excitability) {
      const auto& p = std::get<CircuitLif>(n.model).params();
      for (int si : n.ecram_synapses) {
        open_gate(std::get<EcramSynapseRt>(synapses[si]), t, GatePulse{p.spike_width, p.v_supply});
      }
    }
  };

  std::size_t next_event = 0;
  for (std::int64_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k > 0) {
      const double t_prev = static_cast<double>(k - 1) * dt;
      for (auto& n : neurons) {
        if (auto* a = std::get_if<AbstractNeuronRt>(&n.model)) {
          a->state.s *= a->decay;
        } else {
          std::get<CircuitLif>(n.model).leak(dt);
        }
      }
      for (auto& s : synapses) {
        if (auto* a = std::get_if<AbstractSynapseRt>(&s)) {
          a->state.f *= a->decay_f;
          a->state.d *= a->decay_d;
        } else {
          auto& e = std::get<EcramSynapseRt>(s);
          const double on = gate_overlap(e.gate_end, t_prev, dt);
          if (on > 0) e.device.step(on, e.gate_amplitude);
          if (on < dt) e.device.step(dt - on, 0.0);
        }
      }
    }

    for (; next_event < events.size() && events[next_event].first == k; ++next_event) {
      const int src = events[next_event].second;
      if (by_source[src].empty()) {
        // Unbound source: generated but never reaches a neuron.
        ++result.tally.absorbed;
        continue;
      }
      for (int si : by_source[src]) {
        const int ni = config.synapses[si].neuron;
        NeuronRt& n = neurons[ni];
        if (auto* a = std::get_if<AbstractSynapseRt>(&synapses[si])) {
          double w_eff;
          if (a->spec.read == StpRead::post_jump) {
            a->state = on_presynaptic_spike(a->state, a->spec.stp);
            w_eff = effective_weight(a->state);
          } else {
            w_eff = effective_weight(a->state);
            a->state = on_presynaptic_spike(a->state, a->spec.stp);
          }
          auto& an = std::get<AbstractNeuronRt>(n.model);
          ++result.tally.integrated;
          ++n.inputs_since_output;
          if (integrate_spike(an.state, an.params, w_eff)) {
            an.state.last_spike_time = t;
            fire(ni, t);
          }
        } else {
          auto& e = std::get<EcramSynapseRt>(synapses[si]);
          double g = e.device.g_total();
          if (n.wiring == StpWiring::synaptic_facilitation) {
            if (e.spec.read == StpRead::post_jump) {
              g = e.device.g_nv() +
                  e.device.projected_volatile(e.spec.input_pulse.width, e.spec.input_pulse.amplitude);
            }
            open_gate(e, t, e.spec.input_pulse);
          }
          auto& lif = std::get<CircuitLif>(n.model);
          const InputOutcome outcome = lif.integrate_spike(g);
          if (outcome == InputOutcome::absorbed) {
            ++result.tally.absorbed;
            continue;
          }
          ++result.tally.integrated;
          ++n.inputs_since_output;
          if (outcome == InputOutcome::fired) fire(ni, t);
        }
      }
    }

    if (k % config.record.every == 0 && !trace.columns.empty()) {
      trace.time.push_back(t);
      if (config.record.membrane) {
        for (const auto& n : neurons) {
          if (const auto* a = std::get_if<AbstractNeuronRt>(&n.model)) {
            trace.values.push_back(a->state.s);
          } else {
            trace.values.push_back(std::get<CircuitLif>(n.model).v_mem());
          }
        }
      }
      if (config.record.weights) {
        for (const auto& s : synapses) {
          if (const auto* a = std::get_if<AbstractSynapseRt>(&s)) {
            trace.values.push_back(effective_weight(a->state));
          } else {
            trace.values.push_back(std::get<EcramSynapseRt>(s).device.g_total());
          }
        }
      }
    }
  }
  return result;
}

void write_raster_csv(std::ostream& out, const SimResult& result, const csv::Provenance& prov) {
  prov.write(out);
  out << "neuron_id,spike_time\n";
  for (const auto& e : result.raster) out << e.neuron << ',' << csv::number(e.time) << '\n';
}

void write_trace_csv(std::ostream& out, const SimResult& result, const csv::Provenance& prov) {
  prov.write(out);
  const auto& tr = result.trace;
  out << "time";
  for (const auto& c : tr.columns) out << ',' << c;
  out << '\n';
  const std::size_t width = tr.columns.size();
  for (std::size_t r = 0; r < tr.time.size(); ++r) {
    out << csv::number(tr.time[r]);
    for (std::size_t c = 0; c < width; ++c) out << ',' << csv::number(tr.values[r * width + c]);
    out << '\n';
  }
}

}  // namespace ecram_stp::sim
