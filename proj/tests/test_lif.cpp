#include <cmath>

#include "doctest.h"
#include "ecram_stp/errors.hpp"
#include "ecram_stp/lif.hpp"

using namespace ecram_stp;

namespace {

EcramParams flat_ladder() {
  EcramParams e;
  e.g_state_min = 1e-6;
  e.g_state_max = 2e-6;
  return e;
}

CircuitLifParams leaky(double gap, double k, double leak) {
  CircuitLifParams p;
  p.polarity = Polarity::discharge_to_fire;
  p.v_supply = 1.2;
  p.v_threshold = 1.2 - gap;
  p.delta_v_per_unit_g = k;
  p.leak_rate = leak;
  return p;
}

// Independent event-driven oracle for the constant-rate leak: peaks after
// each input, counting until one crosses the gap.
SpikeCount oracle_constant_rate(double dv, double gap, double leak, double period) {
  double x = 0;
  for (int n = 1; n <= 100000; ++n) {
    if (n > 1) x = std::max(x - leak * period, 0.0);
    x += dv;
    if (x >= gap) return SpikeCount::of(n);
  }
  return SpikeCount::never();
}

}  // namespace

TEST_CASE("abstract integrate and leak") {
  AbstractLifParams p{0.015, 0.8};
  AbstractLifState s;
  CHECK(integrate_spike(s, p, 0.9));
  CHECK(s.s == 0.0);
  CHECK_FALSE(integrate_spike(s, p, 0.5));
  CHECK(s.s == 0.5);
  // Tie counts as fired.
  CHECK(integrate_spike(s, p, 0.3));
  AbstractLifState one{1.0, -1};
  leak(one, p, p.tau_s * std::log(2.0));
  CHECK(one.s == doctest::Approx(0.5).epsilon(1e-14));
  AbstractLifState zero;
  leak(zero, p, 0.3);
  CHECK(zero.s == 0.0);
  CHECK_THROWS_AS(leak(zero, p, -1.0), DomainError);
}

TEST_CASE("circuit polarity sets rest and direction") {
  CircuitLifParams d = leaky(0.5, 1e5, 0);
  CircuitLif n(d);
  CHECK(n.v_mem() == 1.2);
  n.integrate_spike(1e-6);
  CHECK(n.v_mem() == doctest::Approx(1.1));
  CircuitLifParams c = d;
  c.polarity = Polarity::charge_to_fire;
  c.v_threshold = 0.5;
  CircuitLif m(c);
  CHECK(m.v_mem() == 0.0);
  m.integrate_spike(1e-6);
  CHECK(m.v_mem() == doctest::Approx(0.1));
}

TEST_CASE("circuit leak saturates at rest") {
  CircuitLif n(leaky(0.5, 1e5, 2.0));
  n.leak(1.0);
  CHECK(n.excursion() == 0.0);
  n.integrate_spike(1e-6);
  n.leak(0.02);
  CHECK(n.excursion() == doctest::Approx(0.06));
  n.leak(1.0);
  CHECK(n.excursion() == 0.0);
}

TEST_CASE("exponential leak") {
  CircuitLifParams p = leaky(0.5, 1e5, 0);
  p.leak_law = LeakLaw::exponential;
  p.leak_tau = 0.04;
  CircuitLif n(p);
  n.integrate_spike(2e-6);
  n.leak(0.04);
  CHECK(n.excursion() == doctest::Approx(0.2 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("refractory window absorbs inputs and closes on time") {
  CircuitLifParams p = leaky(0.25, 1e5, 0);
  p.refractory = 2e-3;
  p.spike_width = 1e-3;
  CircuitLif n(p);
  n.integrate_spike(1e-6);
  n.integrate_spike(1e-6);
  CHECK(n.integrate_spike(1e-6) == InputOutcome::fired);
  CHECK(n.excursion() == 0.0);
  CHECK(n.integrate_spike(1e-6) == InputOutcome::absorbed);
  CHECK(n.excursion() == 0.0);
  for (int i = 0; i < 19; ++i) n.leak(1e-4);
  CHECK(n.refractory());
  n.leak(1e-4);
  CHECK_FALSE(n.refractory());
  CHECK(n.integrate_spike(1e-6) == InputOutcome::integrated);
}

TEST_CASE("reset carry keeps a fraction of the overshoot") {
  CircuitLifParams p = leaky(0.25, 1e5, 0);
  p.reset_carry = 0.5;
  CircuitLif n(p);
  n.integrate_spike(1e-6);
  n.integrate_spike(1e-6);
  CHECK(n.integrate_spike(1e-6) == InputOutcome::fired);
  CHECK(n.excursion() == doctest::Approx(0.5 * 0.05));
}

TEST_CASE("spikes_to_fire: leak-free counting") {
  const EcramParams e = flat_ladder();
  const double dv = 1e5 * g_nonvolatile(e, 1);
  // Gap between three and four steps.
  CircuitLifParams p = leaky(3.5 * dv, 1e5, 0.0);
  for (double rate : {1.0, 50.0, 1000.0}) CHECK(spikes_to_fire(p, e, 1, rate) == SpikeCount::of(4));
}

TEST_CASE("spikes_to_fire matches an event-driven oracle") {
  const EcramParams e = flat_ladder();
  for (double leak : {0.5, 2.5, 4.0}) {
    for (double gap : {0.3, 0.56, 0.9}) {
      const CircuitLifParams p = leaky(gap, 1.1e5, leak);
      for (int state : {1, 30, 64, 128}) {
        for (double rate : {50.0, 100.0, 200.0}) {
          const double dv = p.delta_v_per_unit_g * g_nonvolatile(e, state);
          CHECK(spikes_to_fire(p, e, state, rate) == oracle_constant_rate(dv, gap, leak, 1.0 / rate));
        }
      }
    }
  }
}

TEST_CASE("spikes_to_fire is nonincreasing in state and in rate") {
  const EcramParams e = flat_ladder();
  const CircuitLifParams p = leaky(0.56, 1.1e5, 2.5);
  auto as_int = [](SpikeCount c) { return c.finite() ? c.value() : INT64_MAX; };
  for (double rate : {50.0, 100.0, 200.0}) {
    for (int s = 2; s <= 128; ++s) {
      CHECK(as_int(spikes_to_fire(p, e, s, rate)) <= as_int(spikes_to_fire(p, e, s - 1, rate)));
    }
  }
  for (int s : {1, 64, 128}) {
    CHECK(as_int(spikes_to_fire(p, e, s, 200)) <= as_int(spikes_to_fire(p, e, s, 100)));
    CHECK(as_int(spikes_to_fire(p, e, s, 100)) <= as_int(spikes_to_fire(p, e, s, 50)));
  }
}

TEST_CASE("spikes_to_fire returns never when leak dominates") {
  const EcramParams e = flat_ladder();
  CircuitLifParams p = leaky(0.5, 1e5, 20.0);  // 0.1 V in, 0.2 V out per 10 ms
  CHECK_FALSE(spikes_to_fire(p, e, 1, 100).finite());
  p.leak_law = LeakLaw::exponential;
  p.leak_tau = 0.01;  // asymptote 0.1/(1-e^-1) ~ 0.158 V < 0.5 V
  CHECK_FALSE(spikes_to_fire(p, e, 1, 100).finite());
}

TEST_CASE("circuit parameter validation") {
  CircuitLifParams p = leaky(0.5, 1e5, 1);
  p.v_threshold = 1.3;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = leaky(0.5, 1e5, 1);
  p.refractory = 1e-4;
  p.spike_width = 1e-3;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = leaky(0.5, 1e5, 1);
  p.leak_law = LeakLaw::exponential;
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK(parse_polarity("charge_to_fire") == Polarity::charge_to_fire);
  CHECK_THROWS_AS(parse_leak_law("quadratic"), ConfigError);
}
