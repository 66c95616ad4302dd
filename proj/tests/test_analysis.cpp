#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ecram_stp/analysis.hpp"
#include "ecram_stp/csv.hpp"
#include "ecram_stp/errors.hpp"
#include "ecram_stp/rng.hpp"

using namespace ecram_stp;
using namespace ecram_stp::analysis;

namespace {

// Brute-force s_{k+1} = s_k * alpha + w from rest.
SpikeCount brute(double theta, double w, double alpha) {
  double s = 0;
  for (std::int64_t m = 1; m <= 1'000'000; ++m) {
    const double next = s * alpha + w;
    if (next >= theta) return SpikeCount::of(m);
    if (!(next > s)) break;  // converged below threshold
    s = next;
  }
  return SpikeCount::never();
}

double iterate_level(double delta, double tau, double period, int n) {
  const double a = std::exp(-period / tau);
  double x = 0;
  for (int k = 0; k < n; ++k) x = x * a + delta;
  return x;
}

}  // namespace

TEST_CASE("steady-state level") {
  CHECK(steady_state_level(0.03, 0.01, 1.0) == doctest::Approx(0.03).epsilon(1e-4));
  CHECK(steady_state_level(0.0, 0.05, 0.02) == 0.0);
  const double oracle = iterate_level(0.036, 0.05, 0.02, 1000);
  CHECK(steady_state_level(0.036, 0.05, 0.02) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(steady_state_level(0.036, 0.05, 0.02) == doctest::Approx(0.10920).epsilon(1e-4));
  CHECK_THROWS_AS(steady_state_level(0.1, 0.0, 0.1), DomainError);
}

TEST_CASE("effective weight at frequency") {
  const StpParams sym{0.07, 0.07, 0.03, 0.03};
  for (double nu : {1.0, 20.0, 200.0}) CHECK(effective_weight_at_frequency(sym, 0.6, nu) == doctest::Approx(0.6));
  // Depression-dominant corner: tau_d = 1 s, tau_f = 0.01 s at 200 Hz.
  const StpParams dep{0.01, 1.0, 0.036, 0.03};
  const double f = steady_state_level(0.036, 0.01, 1.0 / 200);
  const double d = steady_state_level(0.03, 1.0, 1.0 / 200);
  REQUIRE(d - f > 0.6);
  CHECK(effective_weight_at_frequency(dep, 0.6, 200) == 0.0);
}

TEST_CASE("min spikes to threshold: worked points") {
  CHECK(min_spikes_to_threshold(0.8, 0.9, 0.5) == SpikeCount::of(1));
  CHECK(min_spikes_to_threshold(0.8, 0.8, 0.5) == SpikeCount::of(1));
  const double alpha = std::exp(-(1.0 / 100) / 0.015);
  CHECK(alpha == doctest::Approx(0.51342).epsilon(1e-4));
  CHECK(min_spikes_to_threshold(0.8, 0.6, alpha) == SpikeCount::of(2));
  CHECK(brute(0.8, 0.6, alpha) == SpikeCount::of(2));
  CHECK_FALSE(min_spikes_to_threshold(0.8, 0.2, alpha).finite());
  CHECK_FALSE(brute(0.8, 0.2, alpha).finite());
  CHECK_FALSE(min_spikes_to_threshold(0.8, 0.0, alpha).finite());
  CHECK_FALSE(min_spikes_to_threshold(0.8, -0.3, alpha).finite());
  CHECK_THROWS_AS(min_spikes_to_threshold(0.8, 0.2, 1.0), DomainError);
  CHECK_THROWS_AS(min_spikes_to_threshold(0.8, 0.2, 0.0), DomainError);
}

TEST_CASE("leak-free limit branch") {
  // T/tau_s below the guard ratio uses ceil(theta / w).
  const double alpha = std::exp(-1e-8);
  CHECK(min_spikes_to_threshold(0.8, 0.3, alpha) == SpikeCount::of(3));
  CHECK(min_spikes_to_threshold(0.8, 0.3, alpha) == brute(0.8, 0.3, alpha));
  // Just above the guard the closed form still agrees with brute force.
  const double a2 = std::exp(-1e-5);
  CHECK(min_spikes_to_threshold(0.8, 0.3, a2) == brute(0.8, 0.3, a2));
}

TEST_CASE("asymptote exactly at threshold is never reached") {
  // w/(1-alpha) == theta exactly with binary-exact values.
  CHECK_FALSE(min_spikes_to_threshold(0.5, 0.25, 0.5).finite());
  // Partial sums are 0.5 - 2^-(m+1), exact in binary until rounding reaches 0.5.
  double s = 0;
  for (int m = 1; m <= 50; ++m) {
    s = s * 0.5 + 0.25;
    CHECK(s < 0.5);
  }
}

TEST_CASE("closed form equals brute force on a dense random-ish grid") {
  int checked = 0;
  for (double theta : {0.3, 0.8, 1.7}) {
    for (double alpha = 0.02; alpha < 0.999; alpha += 0.0371) {
      for (double w = 0.01; w < 2.0; w += 0.0173) {
        CHECK(min_spikes_to_threshold(theta, w, alpha) == brute(theta, w, alpha));
        ++checked;
      }
    }
  }
  CHECK(checked > 5000);
}

TEST_CASE("frequency response") {
  const StpParams none{0.05, 0.1, 0, 0};
  std::vector<double> nu = linspace(1, 200, 20);
  for (const auto& p : frequency_response(none, 0.9, 0.8, 0.015, nu)) {
    CHECK(p.response == 1.0);
    CHECK(p.m_star == SpikeCount::of(1));
  }
  const StpParams stp{0.05, 0.125, 0.036, 0.03};
  for (const auto& p : frequency_response(stp, 0.6, 0.8, 0.015, nu)) {
    CHECK(p.alpha > 0);
    CHECK(p.alpha < 1);
    CHECK(p.f_ss >= stp.delta_f);
    CHECK(p.d_ss >= stp.delta_d);
    CHECK(p.response >= 0);
    CHECK(p.response <= 1);
    if (p.m_star.finite()) CHECK(p.response == 1.0 / static_cast<double>(p.m_star.value()));
  }
  CHECK_THROWS_AS(frequency_response(stp, 0.6, 0.8, 0.015, std::vector<double>{}), DomainError);
}

TEST_CASE("limit: vanishing jumps give the static-weight response") {
  std::vector<double> nu = linspace(2, 200, 60);
  const auto fixed = frequency_response(StpParams{0.05, 0.1, 0, 0}, 0.6, 0.8, 0.015, nu);
  const auto tiny = frequency_response(StpParams{0.05, 0.1, 1e-12, 1e-12}, 0.6, 0.8, 0.015, nu);
  for (std::size_t i = 0; i < nu.size(); ++i) CHECK(fixed[i].m_star == tiny[i].m_star);
}

TEST_CASE("without depression the response is nondecreasing past the first firing rate") {
  const StpParams fac{0.05, 0.1, 0.036, 0.0};
  const auto pts = frequency_response(fac, 0.3, 0.8, 0.015, linspace(1, 200, 50));
  bool started = false;
  double prev = 0;
  for (const auto& p : pts) {
    if (p.m_star.finite()) started = true;
    if (started) {
      CHECK(p.response >= prev);
      prev = p.response;
    }
  }
  CHECK(started);
}

TEST_CASE("sweep layout and 1x1 equivalence") {
  SweepGrid g;
  g.stp = {0.05, 0.125, 0.036, 0.03};
  g.axes = {{SweepParam::nu_in, {37.0}}};
  const auto r = sweep(g);
  REQUIRE(r.rows.size() == 1);
  const auto p = analyze(g.stp, g.w, g.theta, g.tau_s, 37.0);
  CHECK(r.rows[0].point.m_star == p.m_star);
  CHECK(r.rows[0].point.w_eff == p.w_eff);

  g.axes = {{SweepParam::tau_d, {0.05, 0.5}}, {SweepParam::df_ratio, {0.8, 2.0}}, {SweepParam::nu_in, {10, 20, 30}}};
  const auto big = sweep(g, 3);
  REQUIRE(big.rows.size() == 12);
  // Last axis fastest.
  CHECK(big.rows[1].coords == std::vector<double>{0.05, 0.8, 20});
  CHECK(big.rows[3].coords == std::vector<double>{0.05, 2.0, 10});
  const auto& row = big.rows[10];
  StpParams s = g.stp;
  s.tau_d = 0.5;
  s.delta_f = 2.0 * s.delta_d;
  CHECK(row.point.m_star == analyze(s, g.w, g.theta, g.tau_s, 20).m_star);

  std::ostringstream a, b;
  write_csv(a, big);
  write_csv(b, sweep(g, 1));
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  const auto t = csv::read(in);
  CHECK(t.header == std::vector<std::string>{"tau_d", "df_ratio", "nu_in", "f_ss", "d_ss", "w_eff", "m_star", "response"});
}

TEST_CASE("sweep grid validation") {
  SweepGrid g;
  g.axes = {{SweepParam::nu_in, {10, 5}}};
  CHECK_THROWS(g.validate());
  g.axes = {{SweepParam::nu_in, {}}};
  CHECK_THROWS(g.validate());
  CHECK(parse_sweep_param("tau_d") == SweepParam::tau_d);
  CHECK_THROWS(parse_sweep_param("tau_x"));
}

TEST_CASE("spacing helpers") {
  const auto l = linspace(1, 200, 5);
  CHECK(l.front() == 1);
  CHECK(l.back() == 200);
  const auto g = logspace(0.01, 1, 3);
  CHECK(g[1] == doctest::Approx(0.1));
  CHECK(g.back() == 1.0);
}

TEST_CASE("facilitation-only column matches an event-by-event simulation at random points") {
  // Oracle: drive the synapse and membrane one input at a time with exact
  // inter-spike decay until the synapse settles, then count inputs per output.
  const StpParams fac{0.05, 0.1, 0.036, 0.0};
  const std::vector<double> grid = linspace(1, 200, 50);
  const rng::CounterStream pick(5, 0);
  for (std::uint64_t i = 0; i < 5; ++i) {
    const double nu = grid[static_cast<std::size_t>(pick.uniform(i) * grid.size())];
    const double T = 1.0 / nu;
    double s = 0, f = 0;
    std::vector<int> counts;
    int since = 0;
    for (int k = 0; k < 20000; ++k) {
      s *= std::exp(-T / 0.015);
      f = f * std::exp(-T / fac.tau_f) + fac.delta_f;
      s += std::max(0.3 + f, 0.0);
      ++since;
      if (s >= 0.8) {
        s = 0;
        if (k > 10000) counts.push_back(since);
        since = 0;
      }
    }
    const SpikeCount m = analyze(fac, 0.3, 0.8, 0.015, nu).m_star;
    if (m.finite()) {
      REQUIRE_FALSE(counts.empty());
      for (int c : counts) CHECK(c == m.value());
    } else {
      CHECK(counts.empty());
    }
  }
}
