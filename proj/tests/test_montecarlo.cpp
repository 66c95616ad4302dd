#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ecram_stp/config.hpp"
#include "ecram_stp/montecarlo.hpp"

using namespace ecram_stp;

namespace {

mc::MonteCarloSpec shipped() {
  const YAML::Node p = config::load_file(config::default_presets_path());
  return config::mc_spec(p["montecarlo"], p);
}

}  // namespace

TEST_CASE("zero sigma gives identical samples equal to the nominal circuit") {
  mc::MonteCarloSpec s = shipped();
  s.sigma = {};
  s.n_samples = 5;
  const auto r = mc::monte_carlo(s);
  for (std::size_t k = 0; k < s.states.size(); ++k) {
    const double dv = s.neuron.delta_v_per_unit_g * g_nonvolatile(s.device, s.states[k]);
    const SpikeCount nominal = spikes_to_fire(s.neuron, s.device, s.states[k], s.rate);
    for (int j = 0; j < s.n_samples; ++j) {
      const auto& x = r.samples[k * s.n_samples + j];
      CHECK(x.delta_v == doctest::Approx(dv).epsilon(1e-15));
      CHECK(x.inputs_to_fire == (nominal.finite() ? nominal.value() : 0));
    }
    CHECK(r.summary[k].std_delta_v == 0.0);
  }
}

TEST_CASE("common random numbers give a state-independent coefficient of variation") {
  mc::MonteCarloSpec s = shipped();
  s.n_samples = 50;
  const auto r = mc::monte_carlo(s);
  const double cv0 = r.summary[0].std_delta_v / r.summary[0].mean_delta_v;
  CHECK(cv0 > 0);
  for (const auto& x : r.summary) CHECK(x.std_delta_v / x.mean_delta_v == doctest::Approx(cv0).epsilon(1e-9));
  for (std::size_t k = 1; k < r.summary.size(); ++k) {
    CHECK(r.summary[k].mean_delta_v > r.summary[k - 1].mean_delta_v);
  }
}

TEST_CASE("output is independent of jobs and fixed by the seed") {
  mc::MonteCarloSpec s = shipped();
  s.n_samples = 20;
  auto text = [&](int jobs) {
    std::ostringstream out;
    mc::write_csv(out, mc::monte_carlo(s, jobs), csv::Provenance{});
    return out.str();
  };
  const std::string a = text(1);
  CHECK(a == text(4));
  CHECK(a.find("sample,state,delta_v_per_input,time_to_fire,inputs_to_fire\n") != std::string::npos);
  s.seed = 1;
  CHECK(a != text(1));
}

TEST_CASE("validation") {
  mc::MonteCarloSpec s = shipped();
  s.n_samples = 0;
  CHECK_THROWS(s.validate());
  s = shipped();
  s.states = {0};
  CHECK_THROWS(s.validate());
  s = shipped();
  s.sigma.leak = -0.1;
  CHECK_THROWS(s.validate());
}
