#include <cmath>

#include "doctest.h"
#include "ecram_stp/analysis.hpp"
#include "ecram_stp/errors.hpp"
#include "ecram_stp/stp.hpp"

using namespace ecram_stp;

TEST_CASE("decay") {
  const StpParams p{0.05, 0.2, 0.036, 0.03};
  CHECK(decay({0.6, 0, 0}, p, 0.3) == StpSynapseState{0.6, 0, 0});
  CHECK(decay({0.6, 1.0, 0}, p, p.tau_f).f == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(decay({0.6, 0.5, 0.2}, p, 0.0) == StpSynapseState{0.6, 0.5, 0.2});
  CHECK_THROWS_AS(decay({0.6, 0.5, 0.2}, p, -1e-3), DomainError);
}

TEST_CASE("decay composes as a semigroup") {
  const StpParams p{0.05, 0.2, 0.036, 0.03};
  const StpSynapseState s{0.6, 0.7, 0.4};
  for (double t1 : {1e-4, 3e-3, 0.02, 0.5}) {
    for (double t2 : {2e-4, 7e-3, 0.1}) {
      const auto a = decay(decay(s, p, t1), p, t2);
      const auto b = decay(s, p, t1 + t2);
      CHECK(a.f == doctest::Approx(b.f).epsilon(1e-14));
      CHECK(a.d == doctest::Approx(b.d).epsilon(1e-14));
    }
  }
}

TEST_CASE("jumps") {
  const StpParams p{0.05, 0.2, 0.036, 0.03};
  CHECK(on_presynaptic_spike({0.6, 0, 0}, p).f == 0.036);
  const StpParams zero{0.05, 0.2, 0, 0};
  CHECK(on_presynaptic_spike({0.6, 0.1, 0.2}, zero) == StpSynapseState{0.6, 0.1, 0.2});
  CHECK(on_presynaptic_spike(on_presynaptic_spike({0.6, 0, 0}, p), p).f == 2 * 0.036);
}

TEST_CASE("effective weight clamp") {
  CHECK(effective_weight({0.6, 0.2, 0.2}) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(effective_weight({0.6, 0.05, 0.9}) == 0.0);
  // w < 0 branch: min(-0.4 + 0.3 - 0.1, 0).
  CHECK(effective_weight({-0.4, 0.1, 0.3}) == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(effective_weight({-0.4, 0.9, 0.1}) == doctest::Approx(-1.2).epsilon(1e-15));
  CHECK(effective_weight({-0.4, 0.1, 0.9}) == 0.0);
  CHECK(effective_weight({0.0, 0.3, 0.1}) == 0.0);
}

TEST_CASE("negative weight: brute-force synapse never flips sign") {
  auto drive = [](const StpParams& p, double period) {
    StpSynapseState s{-0.4, 0, 0};
    double w = 0;
    for (int k = 0; k < 400; ++k) {
      s = on_presynaptic_spike(decay(s, p, period), p);
      w = effective_weight(s);
      CHECK(w <= 0.0);
      // Hand evaluation of the w < 0 branch on the brute-force state.
      CHECK(w == std::min(-0.4 + s.d - s.f, 0.0));
    }
    return w;
  };
  // Depression-dominant: the inhibitory efficacy is silenced, not flipped.
  CHECK(drive(StpParams{0.02, 0.3, 0.05, 0.04}, 0.01) == 0.0);
  // Facilitation-dominant: the magnitude grows beyond |w|.
  CHECK(drive(StpParams{0.3, 0.02, 0.05, 0.04}, 0.01) < -0.4);
}

TEST_CASE("periodic drive converges to the closed-form post-spike level") {
  const StpParams p{0.05, 0.3, 0.036, 0.03};
  for (double period : {0.002, 0.01, 0.05}) {
    StpSynapseState s{0.6, 0, 0};
    const int n = static_cast<int>(std::ceil(50 * std::max(p.tau_f, p.tau_d) / period));
    for (int k = 0; k < n; ++k) s = on_presynaptic_spike(decay(s, p, period), p);
    CHECK(s.f == doctest::Approx(analysis::steady_state_level(p.delta_f, p.tau_f, period)).epsilon(1e-6));
    CHECK(s.d == doctest::Approx(analysis::steady_state_level(p.delta_d, p.tau_d, period)).epsilon(1e-6));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((StpParams{0, 0.1, 0, 0}.validate()), DomainError);
  CHECK_THROWS_AS((StpParams{0.1, 0.1, -0.1, 0}.validate()), DomainError);
  CHECK_NOTHROW((StpParams{0.1, 0.1, 0, 0}.validate()));
}
