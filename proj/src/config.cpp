#include "ecram_stp/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ecram_stp/csv.hpp"
#include "ecram_stp/errors.hpp"

#ifndef ECRAM_STP_PRESETS_PATH
#define ECRAM_STP_PRESETS_PATH "config/presets.yaml"
#endif

namespace ecram_stp::config {

std::string default_presets_path() {
  if (const char* env = std::getenv("ECRAM_STP_PRESETS"); env && *env) return env;
  return ECRAM_STP_PRESETS_PATH;
}

YAML::Node load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return YAML::Load(in);
  } catch (const YAML::Exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

namespace {

double parse_with_units(std::string_view text, std::string_view what,
                        std::initializer_list<std::pair<std::string_view, double>> units) {
  std::string s(text);
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("invalid " + std::string(what) + " '" + s + "'");
  }
  std::string_view rest = std::string_view(s).substr(used);
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);
  if (rest.empty()) return value;
  for (const auto& [unit, scale] : units) {
    if (rest == unit) return value * scale;
  }
  throw ConfigError("invalid " + std::string(what) + " unit in '" + s + "'");
}

[[noreturn]] void bad(const std::string& where, const std::string& why) {
  throw ConfigError(where + ": " + why);
}

template <class T>
T get(const YAML::Node& node, const std::string& key, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) bad(where, "missing key '" + key + "'");
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    bad(where, "bad value for '" + key + "'");
  }
}

template <class T>
T get_or(const YAML::Node& node, const std::string& key, T fallback, const std::string& where) {
  if (!node[key]) return fallback;
  return get<T>(node, key, where);
}

double time_or(const YAML::Node& node, const std::string& key, double fallback, const std::string& where) {
  if (!node[key]) return fallback;
  try {
    return parse_duration(get<std::string>(node, key, where));
  } catch (const ConfigError& e) {
    bad(where, e.what());
  }
}

double time_of(const YAML::Node& node, const std::string& key, const std::string& where) {
  if (!node[key]) bad(where, "missing key '" + key + "'");
  return time_or(node, key, 0.0, where);
}

double rate_or(const YAML::Node& node, const std::string& key, double fallback, const std::string& where) {
  if (!node[key]) return fallback;
  try {
    return parse_rate(get<std::string>(node, key, where));
  } catch (const ConfigError& e) {
    bad(where, e.what());
  }
}

YAML::Node section(const YAML::Node& root, const std::string& group, const std::string& name) {
  const YAML::Node g = root[group];
  if (!g || !g.IsMap()) bad("presets", "missing section '" + group + "'");
  const YAML::Node n = g[name];
  if (!n || !n.IsMap()) bad("presets", "unknown " + group + " preset '" + name + "'");
  return n;
}

StpParams stp_params(const YAML::Node& n, const std::string& where) {
  StpParams p;
  p.tau_f = time_of(n, "tau_f", where);
  p.tau_d = time_of(n, "tau_d", where);
  p.delta_f = get<double>(n, "delta_f", where);
  p.delta_d = get<double>(n, "delta_d", where);
  p.validate();
  return p;
}

StpRead parse_read(const std::string& s, const std::string& where) {
  if (s == "post_jump") return StpRead::post_jump;
  if (s == "pre_jump") return StpRead::pre_jump;
  bad(where, "read must be post_jump or pre_jump");
}

CircuitLifParams circuit_params(const YAML::Node& n, const std::string& where) {
  CircuitLifParams p;
  p.polarity = parse_polarity(get<std::string>(n, "polarity", where));
  p.v_supply = get<double>(n, "v_supply", where);
  p.v_threshold = get<double>(n, "v_threshold", where);
  p.delta_v_per_unit_g = get<double>(n, "delta_v_per_unit_g", where);
  p.leak_law = parse_leak_law(get_or<std::string>(n, "leak_law", "constant_rate", where));
  p.leak_rate = get_or<double>(n, "leak_rate", 0.0, where);
  p.leak_tau = time_or(n, "leak_tau", 0.0, where);
  p.refractory = time_or(n, "refractory", p.refractory, where);
  p.spike_width = time_or(n, "spike_width", p.spike_width, where);
  p.reset_carry = get_or<double>(n, "reset_carry", 0.0, where);
  try {
    p.validate();
  } catch (const DomainError& e) {
    bad(where, e.what());
  }
  return p;
}

// Merges `over` onto a copy of `base`, one level deep (enough for neuron entries).
YAML::Node merged(const YAML::Node& base, const YAML::Node& over) {
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : over) out[kv.first.as<std::string>()] = YAML::Clone(kv.second);
  return out;
}

}  // namespace

double parse_duration(std::string_view text) {
  return parse_with_units(text, "duration",
                          {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"min", 60.0}});
}

double parse_rate(std::string_view text) {
  return parse_with_units(text, "rate", {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}});
}

void set_path(YAML::Node& root, std::string_view dotted, std::string_view value) {
  if (dotted.empty()) throw ConfigError("empty override path");
  YAML::Node parsed;
  try {
    parsed = YAML::Load(std::string(value));
  } catch (const YAML::Exception& e) {
    throw ConfigError("override '" + std::string(dotted) + "': cannot parse value: " + e.what());
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    parts.emplace_back(dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start));
    if (parts.back().empty()) throw ConfigError("override path '" + std::string(dotted) + "' has an empty part");
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  // yaml-cpp nodes are handles, so walking with copies edits the tree in place.
  YAML::Node cur = root;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& key = parts[i];
    const bool last = i + 1 == parts.size();
    if (cur.IsSequence()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(key);
      } catch (const std::exception&) {
        throw ConfigError("override '" + std::string(dotted) + "': '" + key + "' is not a list index");
      }
      if (idx >= cur.size()) throw ConfigError("override '" + std::string(dotted) + "': index out of range");
      if (last) {
        cur[idx] = parsed;
        return;
      }
      cur.reset(cur[idx]);
    } else {
      if (cur.IsScalar()) throw ConfigError("override '" + std::string(dotted) + "': '" + key + "' is under a scalar");
      if (last) {
        cur[key] = parsed;
        return;
      }
      if (!cur[key]) cur[key] = YAML::Node(YAML::NodeType::Map);
      YAML::Node next = cur[key];
      cur.reset(next);
    }
  }
}

nlohmann::json to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& item : node) arr.push_back(to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      nlohmann::json obj = nlohmann::json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = to_json(kv.second);
      return obj;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted in the source
  if (s == "true") return true;
  if (s == "false") return false;
  if (!s.empty() && s.find_first_not_of("+-0123456789") == std::string::npos && s.size() < 19) {
    return std::stoll(s);
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (!s.empty() && end == s.c_str() + s.size() && std::isfinite(v) &&
      s.find_first_not_of("+-0123456789.eE") == std::string::npos) {
    return v;
  }
  return s;
}

YAML::Node from_json(const nlohmann::json& j) { return YAML::Load(j.dump()); }

std::uint64_t hash(const nlohmann::json& snapshot) { return csv::fnv1a64(snapshot.dump()); }

EcramParams ecram_params(const YAML::Node& presets, const std::string& name) {
  const YAML::Node n = section(presets, "ecram", name);
  const std::string where = "ecram." + name;
  EcramParams p;
  p.n_states = get<int>(n, "n_states", where);
  p.g_state_min = get<double>(n, "g_state_min", where);
  p.g_state_max = get<double>(n, "g_state_max", where);
  p.tau_rise = time_of(n, "tau_rise", where);
  p.tau_decay = time_of(n, "tau_decay", where);
  p.drive_gain = get<double>(n, "drive_gain", where);
  p.v_gate_threshold = get<double>(n, "v_gate_threshold", where);
  p.state_scaling = get_or<double>(n, "state_scaling", 0.0, where);
  try {
    p.validate();
  } catch (const DomainError& e) {
    bad(where, e.what());
  }
  return p;
}

NeuronPreset neuron_preset(const YAML::Node& presets, const std::string& name) {
  const YAML::Node n = section(presets, "neuron", name);
  const std::string where = "neuron." + name;
  NeuronPreset p;
  p.name = name;
  p.lif = circuit_params(n, where);
  p.ecram_name = get<std::string>(n, "ecram", where);
  p.ecram = ecram_params(presets, p.ecram_name);
  if (const YAML::Node in = n["input"]) {
    p.rate = rate_or(in, "rate", p.rate, where + ".input");
    p.input.width = time_or(in, "pulse_width", p.input.width, where + ".input");
    p.input.amplitude = get_or<double>(in, "amplitude", p.input.amplitude, where + ".input");
  }
  p.dt = time_or(n, "dt", p.dt, where);
  return p;
}

sim::SimConfig sim_config(const YAML::Node& run, const YAML::Node& presets) {
  sim::SimConfig c;
  c.dt = time_of(run, "dt", "run");
  c.duration = time_of(run, "duration", "run");
  c.seed = get_or<std::uint64_t>(run, "seed", 0, "run");
  c.allow_coarse_dt = get_or<bool>(run, "allow_coarse_dt", false, "run");

  if (const YAML::Node srcs = run["sources"]) {
    if (!srcs.IsSequence()) bad("run", "sources must be a list");
    for (std::size_t i = 0; i < srcs.size(); ++i) {
      const YAML::Node s = srcs[i];
      const std::string where = "sources." + std::to_string(i);
      if (const YAML::Node p = s["periodic"]) {
        c.sources.emplace_back(PeriodicSpec{rate_or(p, "rate", 0.0, where), time_or(p, "phase", -1.0, where)});
      } else if (const YAML::Node p = s["poisson"]) {
        PoissonSpec ps{rate_or(p, "rate", 0.0, where), std::nullopt};
        if (p["seed"]) ps.seed = get<std::uint64_t>(p, "seed", where);
        c.sources.emplace_back(ps);
      } else if (const YAML::Node p = s["explicit"]) {
        ExplicitSpec e;
        if (!p.IsSequence()) bad(where, "explicit must be a list of times");
        for (const auto& t : p) e.times.push_back(parse_duration(t.as<std::string>()));
        c.sources.emplace_back(e);
      } else {
        bad(where, "expected one of periodic, poisson, explicit");
      }
    }
  }

  std::vector<const NeuronPreset*> neuron_presets;
  std::vector<NeuronPreset> storage;
  const YAML::Node neurons = run["neurons"];
  if (neurons && !neurons.IsSequence()) bad("run", "neurons must be a list");
  storage.reserve(neurons ? neurons.size() : 0);
  for (std::size_t i = 0; neurons && i < neurons.size(); ++i) {
    const YAML::Node n = neurons[i];
    const std::string where = "neurons." + std::to_string(i);
    sim::NeuronSpec spec;
    spec.wiring = sim::parse_wiring(get_or<std::string>(n, "wiring", "none", where));
    if (const YAML::Node a = n["abstract"]) {
      AbstractLifParams p;
      p.tau_s = time_or(a, "tau_s", p.tau_s, where);
      p.theta = get_or<double>(a, "theta", p.theta, where);
      spec.model = p;
      neuron_presets.push_back(nullptr);
    } else if (n["preset"]) {
      const std::string name = get<std::string>(n, "preset", where);
      storage.push_back(neuron_preset(presets, name));
      // Any circuit key on the entry overrides the preset field.
      const YAML::Node base = section(presets, "neuron", name);
      YAML::Node over(YAML::NodeType::Map);
      for (const auto& kv : n) {
        const std::string k = kv.first.as<std::string>();
        if (k != "preset" && k != "wiring") over[k] = kv.second;
      }
      storage.back().lif = circuit_params(merged(base, over), where);
      spec.model = storage.back().lif;
      neuron_presets.push_back(&storage.back());
    } else {
      bad(where, "expected 'abstract' or 'preset'");
    }
    c.neurons.push_back(spec);
  }

  if (const YAML::Node syns = run["synapses"]) {
    if (!syns.IsSequence()) bad("run", "synapses must be a list");
    for (std::size_t i = 0; i < syns.size(); ++i) {
      const YAML::Node s = syns[i];
      const std::string where = "synapses." + std::to_string(i);
      sim::SynapseSpec spec;
      spec.source = get<int>(s, "source", where);
      spec.neuron = get<int>(s, "neuron", where);
      const StpRead read = parse_read(get_or<std::string>(s, "read", "post_jump", where), where);
      if (s["stp"] || s["w"]) {
        sim::AbstractSynapse a;
        if (s["stp"]) a.stp = stp_params(s["stp"], where + ".stp");
        a.w = get_or<double>(s, "w", a.w, where);
        a.read = read;
        spec.model = a;
      } else {
        if (spec.neuron < 0 || static_cast<std::size_t>(spec.neuron) >= neuron_presets.size()) {
          bad(where, "neuron index out of range");
        }
        const NeuronPreset* np = neuron_presets[spec.neuron];
        sim::EcramSynapse e;
        if (s["ecram"]) {
          e.device = ecram_params(presets, get<std::string>(s, "ecram", where));
        } else if (np) {
          e.device = np->ecram;
        } else {
          bad(where, "ecram synapse needs an 'ecram' preset name");
        }
        e.state = get<int>(s, "state", where);
        if (np) e.input_pulse = np->input;
        if (const YAML::Node p = s["pulse"]) {
          e.input_pulse.width = time_or(p, "width", e.input_pulse.width, where + ".pulse");
          e.input_pulse.amplitude = get_or<double>(p, "amplitude", e.input_pulse.amplitude, where + ".pulse");
        }
        e.read = read;
        spec.model = e;
      }
      c.synapses.push_back(spec);
    }
  }

  if (const YAML::Node r = run["record"]) {
    c.record.membrane = get_or<bool>(r, "membrane", c.record.membrane, "record");
    c.record.weights = get_or<bool>(r, "weights", c.record.weights, "record");
    c.record.every = get_or<int>(r, "every", c.record.every, "record");
  }
  return c;
}

mc::MonteCarloSpec mc_spec(const YAML::Node& s, const YAML::Node& presets) {
  const std::string where = "montecarlo";
  mc::MonteCarloSpec spec;
  const NeuronPreset np = neuron_preset(presets, get<std::string>(s, "neuron", where));
  spec.neuron = np.lif;
  spec.device = np.ecram;
  spec.rate = rate_or(s, "rate", np.rate, where);
  spec.pulse_width = time_or(s, "pulse_width", np.input.width, where);
  spec.dt = time_or(s, "dt", np.dt, where);
  spec.n_samples = get_or<int>(s, "n_samples", spec.n_samples, where);
  if (s["states"]) spec.states = get<std::vector<int>>(s, "states", where);
  spec.max_inputs = get_or<std::int64_t>(s, "max_inputs", spec.max_inputs, where);
  spec.seed = get_or<std::uint64_t>(s, "seed", spec.seed, where);
  if (const YAML::Node sg = s["sigma"]) {
    spec.sigma.c_mem = get_or<double>(sg, "c_mem", 0.0, where + ".sigma");
    spec.sigma.v_threshold = get_or<double>(sg, "v_threshold", 0.0, where + ".sigma");
    spec.sigma.leak = get_or<double>(sg, "leak", 0.0, where + ".sigma");
    spec.sigma.g_state = get_or<double>(sg, "g_state", 0.0, where + ".sigma");
  }
  try {
    spec.validate();
  } catch (const DomainError& e) {
    bad(where, e.what());
  }
  return spec;
}

AnalysisBase analysis_base(const YAML::Node& presets) {
  const YAML::Node a = presets["analysis"];
  if (!a || !a["base"]) bad("presets", "missing analysis.base");
  const YAML::Node b = a["base"];
  const std::string where = "analysis.base";
  AnalysisBase out;
  out.w = get<double>(b, "w", where);
  out.theta = get<double>(b, "theta", where);
  out.tau_s = time_of(b, "tau_s", where);
  out.stp.delta_d = get<double>(b, "delta_d", where);
  out.stp.delta_f = get<double>(b, "df_ratio", where) * out.stp.delta_d;
  out.stp.tau_f = time_of(b, "tau_f", where);
  out.stp.tau_d = time_or(b, "tau_d", out.stp.tau_f, where);
  return out;
}

std::vector<double> axis_values(const YAML::Node& node) {
  if (node.IsSequence()) return node.as<std::vector<double>>();
  if (node.IsMap() && node["n"]) {
    const auto n = node["n"].as<std::size_t>();
    if (node["lin"]) {
      const auto r = node["lin"].as<std::vector<double>>();
      if (r.size() != 2) bad("axis", "lin needs [lo, hi]");
      return analysis::linspace(r[0], r[1], n);
    }
    if (node["log"]) {
      const auto r = node["log"].as<std::vector<double>>();
      if (r.size() != 2) bad("axis", "log needs [lo, hi]");
      return analysis::logspace(r[0], r[1], n);
    }
  }
  if (node.IsScalar()) return {node.as<double>()};
  bad("axis", "expected a list, a scalar, or {lin|log: [lo, hi], n}");
}

}  // namespace ecram_stp::config
