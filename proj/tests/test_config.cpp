#include <cstdlib>

#include "doctest.h"
#include "ecram_stp/config.hpp"
#include "ecram_stp/errors.hpp"

using namespace ecram_stp;
using namespace ecram_stp::config;

TEST_CASE("durations and rates") {
  CHECK(parse_duration("2s") == 2.0);
  CHECK(parse_duration("5ms") == doctest::Approx(5e-3));
  CHECK(parse_duration("10 us") == doctest::Approx(1e-5));
  CHECK(parse_duration("100ns") == doctest::Approx(1e-7));
  CHECK(parse_duration("0.25") == 0.25);
  CHECK_THROWS_AS(parse_duration("5 parsecs"), ConfigError);
  CHECK_THROWS_AS(parse_duration(""), ConfigError);
  CHECK(parse_rate("100Hz") == 100.0);
  CHECK(parse_rate("100 kHz") == 1e5);
  CHECK(parse_rate("2MHz") == 2e6);
  CHECK_THROWS_AS(parse_rate("fast"), ConfigError);
}

TEST_CASE("dotted overrides") {
  YAML::Node root = YAML::Load("neuron: {a: {leak_rate: 2.5}}\nsynapses: [{state: 1}, {state: 2}]");
  set_path(root, "neuron.a.leak_rate", "3.0");
  CHECK(root["neuron"]["a"]["leak_rate"].as<double>() == 3.0);
  set_path(root, "synapses.1.state", "77");
  CHECK(root["synapses"][1]["state"].as<int>() == 77);
  set_path(root, "new.branch", "[1, 2]");
  CHECK(root["new"]["branch"].size() == 2);
  CHECK_THROWS_AS(set_path(root, "synapses.5.state", "1"), ConfigError);
}

TEST_CASE("snapshot round trip is canonical") {
  const YAML::Node a = YAML::Load("b: 2\na: {y: true, x: 1.5e-3, name: slow}\nlist: [1, two]");
  const YAML::Node b = YAML::Load("list: [1, two]\na: {name: slow, x: 0.0015, y: true}\nb: 2");
  const auto ja = to_json(a);
  CHECK(ja["a"]["y"].is_boolean());
  CHECK(ja["a"]["x"].is_number_float());
  CHECK(ja["b"].is_number_integer());
  CHECK(ja["list"][1] == "two");
  CHECK(ja.dump() == to_json(b).dump());
  CHECK(hash(ja) == hash(to_json(b)));
  CHECK(to_json(from_json(ja)).dump() == ja.dump());
}

TEST_CASE("shipped presets load and validate") {
  const YAML::Node p = load_file(default_presets_path());
  for (const char* e : {"slow_ms", "fast_us"}) CHECK_NOTHROW(ecram_params(p, e).validate());
  for (const char* n : {"delay_feedback_slow", "delay_feedback_fast", "capacitive_refractory"}) {
    const auto np = neuron_preset(p, n);
    CHECK_NOTHROW(np.lif.validate());
    CHECK(np.dt > 0);
  }
  // Fast preset runs three orders of magnitude faster.
  const auto slow = ecram_params(p, "slow_ms"), fast = ecram_params(p, "fast_us");
  CHECK(slow.tau_rise / fast.tau_rise == doctest::Approx(1000));
  CHECK(slow.tau_decay / fast.tau_decay == doctest::Approx(1000));
  CHECK_THROWS_AS(neuron_preset(p, "missing"), ConfigError);
  CHECK_THROWS_AS(load_file("/nonexistent/presets.yaml"), ConfigError);
  const auto spec = mc_spec(p["montecarlo"], p);
  CHECK(spec.n_samples == 100);
  CHECK(spec.states == std::vector<int>{1, 32, 64, 96, 128});
}

TEST_CASE("axis values") {
  CHECK(axis_values(YAML::Load("[1, 2, 3]")) == std::vector<double>{1, 2, 3});
  CHECK(axis_values(YAML::Load("0.5")) == std::vector<double>{0.5});
  const auto lin = axis_values(YAML::Load("{lin: [1, 200], n: 100}"));
  CHECK(lin.size() == 100);
  CHECK(lin.back() == 200);
  const auto lg = axis_values(YAML::Load("{log: [0.01, 1], n: 3}"));
  CHECK(lg[1] == doctest::Approx(0.1));
}

TEST_CASE("run file to engine config") {
  const YAML::Node presets = load_file(default_presets_path());
  const YAML::Node run = YAML::Load(R"(
dt: 1ms
duration: 2s
seed: 5
sources:
  - periodic: {rate: 100Hz}
  - poisson: {rate: 40}
neurons:
  - abstract: {tau_s: 0.015, theta: 0.8}
  - {preset: delay_feedback_slow, wiring: synaptic}
synapses:
  - {source: 0, neuron: 0, w: 0.6, stp: {tau_f: 0.05, tau_d: 0.125, delta_f: 0.036, delta_d: 0.03}}
  - {source: 1, neuron: 1, state: 60}
record: {every: 5}
)");
  const auto c = sim_config(run, presets);
  CHECK(c.dt == doctest::Approx(1e-3));
  CHECK(c.seed == 5);
  CHECK(c.sources.size() == 2);
  CHECK(c.neurons[1].wiring == sim::StpWiring::synaptic_facilitation);
  CHECK(std::holds_alternative<sim::EcramSynapse>(c.synapses[1].model));
  CHECK(std::get<sim::AbstractSynapse>(c.synapses[0].model).stp.tau_d == 0.125);
  CHECK(c.record.every == 5);
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(sim_config(YAML::Load("neurons: [{preset: nope}]"), presets), ConfigError);
}
