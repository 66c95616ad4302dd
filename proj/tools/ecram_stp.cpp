// ecram-stp: command-line front end. Each subcommand resolves its flags into
// a JSON snapshot, executes from that snapshot alone, and writes CSVs plus a
// manifest.json into the output directory. `replay` re-executes a manifest.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecram_stp/analysis.hpp"
#include "ecram_stp/config.hpp"
#include "ecram_stp/csv.hpp"
#include "ecram_stp/errors.hpp"
#include "ecram_stp/kernels.hpp"
#include "ecram_stp/lanes.hpp"
#include "ecram_stp/montecarlo.hpp"
#include "ecram_stp/parallel.hpp"
#include "ecram_stp/rng.hpp"
#include "ecram_stp/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ecram_stp;

namespace {

struct Common {
  std::string out = "out";
  std::string presets;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::vector<std::string> sets;
};

struct Outcome {
  std::vector<std::string> outputs;
  std::string summary;
  std::vector<std::string> warnings;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--out", c.out, "Output directory (created if missing)")->capture_default_str();
  cmd->add_option("--presets", c.presets, "Preset file (default: $ECRAM_STP_PRESETS or the shipped config/presets.yaml)");
  cmd->add_option("--seed", c.seed, "Seed; overrides the config file and $ECRAM_STP_SEED");
  cmd->add_option("-j,--jobs", c.jobs, "Worker lanes for sweeps and Monte-Carlo; outputs do not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--set", c.sets,
                  "PATH=VALUE edit of the resolved config (paths as in manifest.json 'config'); repeatable");
}

std::uint64_t default_seed(const Common& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("ECRAM_STP_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("ECRAM_STP_SEED must be an unsigned integer");
    }
  }
  return 0;
}

YAML::Node load_presets(const Common& c) {
  return config::load_file(c.presets.empty() ? config::default_presets_path() : c.presets);
}

void apply_sets(YAML::Node& root, const std::vector<std::string>& sets) {
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects PATH=VALUE, got '" + s + "'");
    config::set_path(root, s.substr(0, eq), s.substr(eq + 1));
  }
}

std::vector<double> parse_list(const std::string& text, bool durations) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(durations ? config::parse_duration(item) : config::parse_rate(item));
  }
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

std::vector<int> parse_states(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dash));
        const int hi = std::stoi(item.substr(dash + 1));
        if (hi < lo) throw ConfigError("state range '" + item + "' is decreasing");
        for (int s = lo; s <= hi; ++s) out.push_back(s);
      }
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("invalid state list '" + text + "'");
  }
  if (out.empty()) throw ConfigError("empty state list");
  return out;
}

class OutDir {
 public:
  explicit OutDir(const std::string& path) : root_(path) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + path + "': " + ec.message());
  }

  std::ofstream open(const std::string& name, Outcome& outcome) const {
    std::ofstream f(root_ / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + (root_ / name).string() + "'");
    outcome.outputs.push_back(name);
    return f;
  }

  fs::path path(const std::string& name) const { return root_ / name; }

 private:
  fs::path root_;
};

csv::Provenance provenance(const json& snapshot, std::uint64_t seed, double dt) {
  return {config::hash(snapshot), seed, dt, ECRAM_STP_VERSION};
}

std::uint64_t snapshot_seed(const json& snap) { return snap.value("seed", std::uint64_t{0}); }

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags {
  std::string config;
  std::string preset = "delay_feedback_slow";
  int state = 60;
  std::string rate;
  std::string stp = "none";
  std::string duration;
  std::string dt;
  int record_every = 0;
  bool no_trace = false;
  bool allow_coarse_dt = false;
};

json resolve_simulate(const SimulateFlags& f, const Common& c) {
  const YAML::Node presets = load_presets(c);
  YAML::Node run;
  if (!f.config.empty()) {
    run = config::load_file(f.config);
  } else {
    const config::NeuronPreset np = config::neuron_preset(presets, f.preset);
    run["dt"] = np.dt;
    run["duration"] = "2s";
    YAML::Node src;
    src["periodic"]["rate"] = np.rate;
    run["sources"].push_back(src);
    YAML::Node neuron;
    neuron["preset"] = f.preset;
    neuron["wiring"] = std::string(sim::to_string(sim::parse_wiring(f.stp)));
    run["neurons"].push_back(neuron);
    YAML::Node syn;
    syn["source"] = 0;
    syn["neuron"] = 0;
    syn["state"] = f.state;
    run["synapses"].push_back(syn);
    run["record"]["membrane"] = true;
    run["record"]["weights"] = true;
    run["record"]["every"] = 10;
  }
  if (!f.rate.empty()) {
    if (!run["sources"] || run["sources"].size() == 0 || !run["sources"][0]["periodic"]) {
      throw ConfigError("--rate needs a periodic first source");
    }
    run["sources"][0]["periodic"]["rate"] = config::parse_rate(f.rate);
  }
  if (!f.dt.empty()) run["dt"] = config::parse_duration(f.dt);
  if (!f.duration.empty()) run["duration"] = config::parse_duration(f.duration);
  if (f.record_every > 0) run["record"]["every"] = f.record_every;
  if (f.no_trace) {
    run["record"]["membrane"] = false;
    run["record"]["weights"] = false;
  }
  if (f.allow_coarse_dt) run["allow_coarse_dt"] = true;
  if (c.seed || !run["seed"]) run["seed"] = default_seed(c);

  YAML::Node root;
  root["run"] = run;
  root["presets"] = presets;
  apply_sets(root, c.sets);
  json snap = config::to_json(root);
  snap["seed"] = snap["run"].value("seed", std::uint64_t{0});
  return snap;
}

Outcome execute_simulate(const json& snap, const OutDir& out, int) {
  const sim::SimConfig cfg = config::sim_config(config::from_json(snap.at("run")), config::from_json(snap.at("presets")));
  const sim::SimResult result = sim::run(cfg);
  Outcome o;
  const auto prov = provenance(snap, cfg.seed, cfg.dt);
  {
    auto f = out.open("raster.csv", o);
    sim::write_raster_csv(f, result, prov);
  }
  if (!result.trace.columns.empty()) {
    auto f = out.open("trace.csv", o);
    sim::write_trace_csv(f, result, prov);
  }
  {
    auto f = out.open("input_counts.csv", o);
    prov.write(f);
    f << "neuron_id,output_index,inputs\n";
    for (std::size_t n = 0; n < result.input_counts.size(); ++n) {
      for (std::size_t k = 0; k < result.input_counts[n].size(); ++k) {
        f << n << ',' << k << ',' << result.input_counts[n][k] << '\n';
      }
    }
  }
  o.warnings = result.warnings;
  o.summary = "simulate: " + std::to_string(result.raster.size()) + " output spikes from " +
              std::to_string(result.tally.generated) + " input events (" +
              std::to_string(result.tally.absorbed) + " absorbed)";
  return o;
}

// ---------------------------------------------------------------------------
// freq-response

struct FreqFlags {
  std::string grid = "point";
  std::optional<double> w, theta, delta_f, delta_d, df_ratio;
  std::string tau_s, tau_f, tau_d;
  std::string nu;
  bool verify = false;
  std::string dt = "1ms";
  std::string duration;
};

json axis(const std::string& name, const std::vector<double>& values) {
  return json{{"param", name}, {"values", values}};
}

json resolve_freq(const FreqFlags& f, const Common& c) {
  const YAML::Node presets = load_presets(c);
  const config::AnalysisBase base = config::analysis_base(presets);
  const YAML::Node an = presets["analysis"];
  json snap;
  snap["seed"] = default_seed(c);
  json b = {{"w", base.w},
            {"theta", base.theta},
            {"tau_s", base.tau_s},
            {"tau_f", base.stp.tau_f},
            {"tau_d", an["slice"]["tau_d"].as<double>()},
            {"delta_d", base.stp.delta_d},
            {"delta_f", base.stp.delta_f}};
  if (f.w) b["w"] = *f.w;
  if (f.theta) b["theta"] = *f.theta;
  if (!f.tau_s.empty()) b["tau_s"] = config::parse_duration(f.tau_s);
  if (!f.tau_f.empty()) b["tau_f"] = config::parse_duration(f.tau_f);
  if (!f.tau_d.empty()) b["tau_d"] = config::parse_duration(f.tau_d);
  if (f.delta_d) b["delta_d"] = *f.delta_d;
  if (f.df_ratio) b["delta_f"] = *f.df_ratio * b["delta_d"].get<double>();
  if (f.delta_f) b["delta_f"] = *f.delta_f;

  json axes = json::array();
  auto values = [&](const char* group, const char* key) {
    return config::axis_values(an[group][key]);
  };
  if (f.grid == "stp_panels" || f.grid == "lif_panels") {
    const char* g = f.grid.c_str();
    if (f.grid == "stp_panels") {
      axes.push_back(axis("tau_f", values(g, "tau_f")));
      axes.push_back(axis("df_ratio", values(g, "df_ratio")));
    } else {
      axes.push_back(axis("w", values(g, "w")));
      axes.push_back(axis("tau_s", values(g, "tau_s")));
    }
    axes.push_back(axis("tau_d", values(g, "tau_d")));
    axes.push_back(axis("nu_in", values(g, "nu_in")));
  } else if (f.grid == "slice" || f.grid == "point") {
    std::vector<double> nu = values("slice", "nu_in");
    if (!f.nu.empty()) nu = parse_list(f.nu, false);
    axes.push_back(axis("nu_in", nu));
  } else {
    throw ConfigError("unknown grid '" + f.grid + "' (point, slice, stp_panels, lif_panels)");
  }
  json fr = {{"grid", f.grid}, {"base", b}, {"axes", axes}};
  if (f.verify) {
    const double duration = f.duration.empty() ? an["slice"]["duration"].as<double>() : config::parse_duration(f.duration);
    fr["verify"] = {{"dt", parse_list(f.dt, true)}, {"duration", duration}};
  }
  snap["freq_response"] = fr;

  YAML::Node root = config::from_json(snap);
  apply_sets(root, c.sets);
  return config::to_json(root);
}

Outcome execute_freq(const json& snap, const OutDir& out, int jobs) {
  const json& fr = snap.at("freq_response");
  const json& b = fr.at("base");
  analysis::SweepGrid grid;
  grid.w = b.at("w").get<double>();
  grid.theta = b.at("theta").get<double>();
  grid.tau_s = b.at("tau_s").get<double>();
  grid.stp = {b.at("tau_f").get<double>(), b.at("tau_d").get<double>(), b.at("delta_f").get<double>(),
              b.at("delta_d").get<double>()};
  for (const json& a : fr.at("axes")) {
    grid.axes.push_back({analysis::parse_sweep_param(a.at("param").get<std::string>()),
                         a.at("values").get<std::vector<double>>()});
  }
  const analysis::SweepResult result = analysis::sweep(grid, jobs);
  Outcome o;
  const std::uint64_t seed = snapshot_seed(snap);
  {
    auto f = out.open("freq_response.csv", o);
    provenance(snap, seed, 0).write(f);
    analysis::write_csv(f, result);
  }
  o.summary = "freq-response: " + std::to_string(result.rows.size()) + " points";
  if (fr.contains("verify") && !fr["verify"].is_null()) {
    if (grid.axes.size() != 1 || grid.axes[0].param != analysis::SweepParam::nu_in) {
      throw ConfigError("--verify needs a single nu_in axis (grid point or slice)");
    }
    const auto dts = fr["verify"].at("dt").get<std::vector<double>>();
    const double duration = fr["verify"].at("duration").get<double>();
    auto f = out.open("verify.csv", o);
    provenance(snap, seed, dts.front()).write(f);
    f << "dt,nu_in,analytic,simulated,error,slack,within,inputs,outputs\n";
    bool all = true;
    std::string maxes;
    for (double dt : dts) {
      const lanes::Comparison cmp = lanes::compare_analytic(grid.stp, grid.w, grid.theta, grid.tau_s,
                                                            grid.axes[0].values, dt, duration, jobs);
      for (const auto& r : cmp.rows) {
        csv::write_row(f, {csv::number(dt), csv::number(r.nu_in), csv::number(r.analytic), csv::number(r.simulated),
                           csv::number(r.error), csv::number(r.slack), r.within ? "1" : "0",
                           std::to_string(r.inputs), std::to_string(r.outputs)});
      }
      all = all && cmp.all_within;
      maxes += (maxes.empty() ? "" : ", ") + csv::number(cmp.max_error) + " at dt=" + csv::number(dt);
    }
    o.summary += "; verify max error " + maxes + (all ? " (all within slack)" : " (SLACK EXCEEDED)");
  }
  return o;
}

// ---------------------------------------------------------------------------
// montecarlo

struct McFlags {
  std::string config;
  std::string neuron;
  int samples = 0;
  std::string states;
};

json resolve_mc(const McFlags& f, const Common& c) {
  const YAML::Node presets = load_presets(c);
  YAML::Node section;
  if (!f.config.empty()) {
    const YAML::Node file = config::load_file(f.config);
    section = file["montecarlo"] ? file["montecarlo"] : file;
  } else {
    if (!presets["montecarlo"]) throw ConfigError("presets: missing montecarlo section");
    section = YAML::Clone(presets["montecarlo"]);
  }
  if (!f.neuron.empty()) section["neuron"] = f.neuron;
  if (f.samples > 0) section["n_samples"] = f.samples;
  if (!f.states.empty()) {
    section["states"] = YAML::Node(YAML::NodeType::Sequence);
    for (int s : parse_states(f.states)) section["states"].push_back(s);
  }
  if (c.seed || !section["seed"]) section["seed"] = default_seed(c);
  YAML::Node root;
  root["montecarlo"] = section;
  root["presets"] = presets;
  apply_sets(root, c.sets);
  json snap = config::to_json(root);
  snap["seed"] = snap["montecarlo"].value("seed", std::uint64_t{0});
  return snap;
}

Outcome execute_mc(const json& snap, const OutDir& out, int jobs) {
  const mc::MonteCarloSpec spec =
      config::mc_spec(config::from_json(snap.at("montecarlo")), config::from_json(snap.at("presets")));
  const mc::Result result = mc::monte_carlo(spec, jobs);
  Outcome o;
  {
    auto f = out.open("mc.csv", o);
    mc::write_csv(f, result, provenance(snap, spec.seed, spec.dt));
  }
  json states = json::array();
  for (const auto& s : result.summary) {
    states.push_back({{"state", s.state},
                      {"mean_delta_v", s.mean_delta_v},
                      {"std_delta_v", s.std_delta_v},
                      {"cv_delta_v", s.mean_delta_v > 0 ? s.std_delta_v / s.mean_delta_v : 0.0},
                      {"mean_time_to_fire", s.mean_time_to_fire},
                      {"std_time_to_fire", s.std_time_to_fire},
                      {"never_fired", s.never_fired}});
  }
  {
    auto f = out.open("summary.json", o);
    f << json{{"n_samples", spec.n_samples}, {"seed", spec.seed}, {"rng", rng::kGeneratorName}, {"states", states}}
             .dump(2)
      << '\n';
  }
  const auto& lo = result.summary.front();
  const auto& hi = result.summary.back();
  o.summary = "montecarlo: " + std::to_string(result.samples.size()) + " samples, mean dV " +
              csv::number(lo.mean_delta_v) + " V (state " + std::to_string(lo.state) + ") to " +
              csv::number(hi.mean_delta_v) + " V (state " + std::to_string(hi.state) + ")";
  return o;
}

// ---------------------------------------------------------------------------
// spikes-to-fire

struct StfFlags {
  std::string preset = "delay_feedback_slow";
  std::string rate;
  std::string states = "1-128";
};

json resolve_stf(const StfFlags& f, const Common& c) {
  const YAML::Node presets = load_presets(c);
  const config::NeuronPreset np = config::neuron_preset(presets, f.preset);
  YAML::Node root;
  root["spikes_to_fire"]["preset"] = f.preset;
  root["spikes_to_fire"]["rate"] = f.rate.empty() ? np.rate : config::parse_rate(f.rate);
  root["spikes_to_fire"]["states"] = YAML::Node(YAML::NodeType::Sequence);
  for (int s : parse_states(f.states)) root["spikes_to_fire"]["states"].push_back(s);
  root["seed"] = default_seed(c);
  root["presets"] = presets;
  apply_sets(root, c.sets);
  return config::to_json(root);
}

Outcome execute_stf(const json& snap, const OutDir& out, int jobs) {
  const json& s = snap.at("spikes_to_fire");
  const config::NeuronPreset np =
      config::neuron_preset(config::from_json(snap.at("presets")), s.at("preset").get<std::string>());
  const double rate = s.at("rate").get<double>();
  const auto states = s.at("states").get<std::vector<int>>();
  for (int st : states) (void)g_nonvolatile(np.ecram, st);
  std::vector<SpikeCount> counts(states.size(), SpikeCount::never());
  parallel_chunks(states.size(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) counts[i] = spikes_to_fire(np.lif, np.ecram, states[i], rate);
  });
  Outcome o;
  auto f = out.open("spikes_to_fire.csv", o);
  provenance(snap, snapshot_seed(snap), 0).write(f);
  f << "state,g_nv,delta_v,spikes_to_fire\n";
  int never = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double g = g_nonvolatile(np.ecram, states[i]);
    csv::write_row(f, {std::to_string(states[i]), csv::number(g), csv::number(np.lif.delta_v_per_unit_g * g),
                       counts[i].to_string()});
    never += !counts[i].finite();
  }
  o.summary = "spikes-to-fire: " + std::to_string(states.size()) + " states, " + std::to_string(never) +
              " never fire";
  return o;
}

// ---------------------------------------------------------------------------

Outcome execute(const std::string& sub, const json& snap, const OutDir& out, int jobs) {
  if (sub == "simulate") return execute_simulate(snap, out, jobs);
  if (sub == "freq-response") return execute_freq(snap, out, jobs);
  if (sub == "montecarlo") return execute_mc(snap, out, jobs);
  if (sub == "spikes-to-fire") return execute_stf(snap, out, jobs);
  throw ConfigError("manifest names unknown subcommand '" + sub + "'");
}

int finish(const std::string& sub, const json& snap, const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const OutDir out(c.out);
  Outcome o = execute(sub, snap, out, c.jobs);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.outputs.push_back("manifest.json");
  const json manifest = {{"subcommand", sub},
                         {"version", ECRAM_STP_VERSION},
                         {"seed", snapshot_seed(snap)},
                         {"config", snap},
                         {"config_hash", csv::hex64(config::hash(snap))},
                         {"outputs", o.outputs},
                         {"warnings", o.warnings},
                         {"jobs", c.jobs},
                         {"kernel_backend", kernels::to_string(kernels::active_backend())},
                         {"rng", rng::kGeneratorName},
                         {"wall_clock_s", wall}};
  std::ofstream(out.path("manifest.json"), std::ios::binary) << manifest.dump(2) << '\n';
  std::cout << o.summary << " -> " << out.path("manifest.json").string() << '\n';
  return 0;
}

void report_error(const Common& c, const std::string& kind, const std::string& message, int code) {
  const json err = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << err.dump() << '\n';
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (!ec) std::ofstream(fs::path(c.out) / "error.json") << err.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ECRAM short-term-plasticity LIF simulator and frequency-response analysis"};
  app.set_version_flag("--version", ECRAM_STP_VERSION);
  app.require_subcommand(1, 1);
  Common common;

  SimulateFlags sf;
  auto* simulate = app.add_subcommand("simulate", "Time-stepped simulation; writes raster.csv, trace.csv, input_counts.csv");
  add_common(simulate, common);
  simulate->add_option("-c,--config", sf.config, "Run file (YAML); without it a one-neuron run is built from the flags below");
  simulate->add_option("--preset", sf.preset, "Neuron preset for the built-in run")->capture_default_str();
  simulate->add_option("--state", sf.state, "ECRAM nonvolatile state of the synapse")->capture_default_str();
  simulate->add_option("--rate", sf.rate, "Periodic input rate, e.g. 100 or 100Hz (default: preset rate)");
  simulate->add_option("--stp", sf.stp, "STP wiring: none, synaptic, intrinsic")->capture_default_str();
  simulate->add_option("--duration", sf.duration, "Simulated time, e.g. 2s (default 2s)");
  simulate->add_option("--dt", sf.dt, "Time step, e.g. 0.1ms (default: preset dt)");
  simulate->add_option("--record-every", sf.record_every, "Trace down-sampling in steps");
  simulate->add_flag("--no-trace", sf.no_trace, "Skip trace.csv");
  simulate->add_flag("--allow-coarse-dt", sf.allow_coarse_dt, "Permit dt above the fastest time constant");

  FreqFlags ff;
  auto* freq = app.add_subcommand("freq-response", "Closed-form frequency response; writes freq_response.csv (+ verify.csv)");
  add_common(freq, common);
  freq->add_option("--grid", ff.grid, "point, slice, stp_panels or lif_panels")->capture_default_str();
  freq->add_option("--w", ff.w, "Base synaptic weight");
  freq->add_option("--theta", ff.theta, "Threshold");
  freq->add_option("--tau-s", ff.tau_s, "Membrane time constant");
  freq->add_option("--tau-f", ff.tau_f, "Facilitation time constant");
  freq->add_option("--tau-d", ff.tau_d, "Depression time constant (point/slice grids)");
  freq->add_option("--delta-f", ff.delta_f, "Facilitation jump (overrides --df-ratio)");
  freq->add_option("--delta-d", ff.delta_d, "Depression jump");
  freq->add_option("--df-ratio", ff.df_ratio, "delta_f / delta_d");
  freq->add_option("--nu", ff.nu, "Comma-separated input rates for point/slice grids");
  freq->add_flag("--verify", ff.verify, "Also simulate each rate and write verify.csv");
  freq->add_option("--dt", ff.dt, "Comma-separated simulation steps for --verify")->capture_default_str();
  freq->add_option("--duration", ff.duration, "Simulated time per rate for --verify (default from presets)");

  McFlags mf;
  auto* mcc = app.add_subcommand("montecarlo", "Variability run; writes mc.csv and summary.json");
  add_common(mcc, common);
  mcc->add_option("-c,--config", mf.config, "File with a montecarlo section (default: the presets' section)");
  mcc->add_option("--neuron", mf.neuron, "Neuron preset");
  mcc->add_option("--samples", mf.samples, "Samples per state");
  mcc->add_option("--states", mf.states, "States, e.g. 1,32,64 or 1-128");

  StfFlags tf;
  auto* stf = app.add_subcommand("spikes-to-fire", "Inputs needed for the first output per state; writes spikes_to_fire.csv");
  add_common(stf, common);
  stf->add_option("--preset", tf.preset, "Neuron preset")->capture_default_str();
  stf->add_option("--rate", tf.rate, "Input rate (default: preset rate)");
  stf->add_option("--states", tf.states, "States, e.g. 60, 1-128 or 1,9,128")->capture_default_str();

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest.json into --out");
  replay->add_option("manifest", manifest_path, "Manifest to replay")->required()->check(CLI::ExistingFile);
  replay->add_option("-o,--out", common.out, "Output directory")->capture_default_str();
  replay->add_option("-j,--jobs", common.jobs, "Worker lanes")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error(common, "usage_error", e.what(), 2);
    return 2;
  }

  try {
    if (simulate->parsed()) return finish("simulate", resolve_simulate(sf, common), common);
    if (freq->parsed()) return finish("freq-response", resolve_freq(ff, common), common);
    if (mcc->parsed()) return finish("montecarlo", resolve_mc(mf, common), common);
    if (stf->parsed()) return finish("spikes-to-fire", resolve_stf(tf, common), common);
    if (replay->parsed()) {
      std::ifstream in(manifest_path);
      json m;
      try {
        m = json::parse(in);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("cannot parse manifest: ") + e.what());
      }
      return finish(m.at("subcommand").get<std::string>(), m.at("config"), common);
    }
  } catch (const NumericalGuardError& e) {
    report_error(common, "numerical_guard", e.what(), 3);
    return 3;
  } catch (const ConfigError& e) {
    report_error(common, "config_error", e.what(), 2);
    return 2;
  } catch (const DomainError& e) {
    report_error(common, "config_error", e.what(), 2);
    return 2;
  } catch (const json::exception& e) {
    report_error(common, "config_error", e.what(), 2);
    return 2;
  } catch (const YAML::Exception& e) {
    report_error(common, "config_error", e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    report_error(common, "internal_error", e.what(), 1);
    return 1;
  }
  return 0;
}
