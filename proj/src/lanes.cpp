#include "ecram_stp/lanes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ecram_stp/errors.hpp"
#include "ecram_stp/kernels.hpp"
#include "ecram_stp/parallel.hpp"
#include "ecram_stp/spike_train.hpp"

namespace ecram_stp::lanes {

namespace {

// Same snapping rule as sim::run.
std::int64_t step_of(double t, double dt, std::int64_t n_steps) {
  return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(t / dt + 1e-9)), 0, n_steps);
}

std::vector<std::int64_t> periodic_steps(double rate, double dt, double duration, std::int64_t n_steps) {
  if (!(1.0 / rate >= dt)) throw ConfigError("lane input period must be >= dt");
  const SpikeTrain train = generate(0, PeriodicSpec{rate, -1.0}, duration);
  std::vector<std::int64_t> steps;
  steps.reserve(train.times.size());
  for (double t : train.times) steps.push_back(step_of(t, dt, n_steps));
  return steps;
}

}  // namespace

std::vector<LaneCounts> run_abstract(std::span<const AbstractLane> lanes, double dt, double duration,
                                     int jobs, double settle) {
  if (!(dt > 0) || !(duration >= dt)) throw ConfigError("run_abstract: need dt > 0 and duration >= dt");
  const auto n_steps = static_cast<std::int64_t>(std::llround(duration / dt));
  const auto first_counted = static_cast<std::int64_t>(std::ceil(settle / dt - 1e-9));
  std::vector<LaneCounts> counts(lanes.size());

  parallel_chunks(lanes.size(), jobs, [&](std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    std::vector<double> s(n, 0.0), f(n, 0.0), d(n, 0.0);
    std::vector<double> ds(n), df(n), dd(n), jf(n), jd(n), w(n), theta(n);
    std::vector<std::vector<std::int64_t>> schedule(n);
    std::vector<std::size_t> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const AbstractLane& l = lanes[begin + i];
      l.stp.validate();
      ds[i] = std::exp(-dt / l.tau_s);
      df[i] = std::exp(-dt / l.stp.tau_f);
      dd[i] = std::exp(-dt / l.stp.tau_d);
      jf[i] = l.stp.delta_f;
      jd[i] = l.stp.delta_d;
      w[i] = l.w;
      theta[i] = l.theta;
      schedule[i] = periodic_steps(l.rate, dt, duration, n_steps);
    }
    const kernels::AbstractLanes view{s, f, d, ds, df, dd, jf, jd, w, theta};
    std::vector<std::uint8_t> events(n), fired(n);
    for (std::int64_t k = 0; k <= n_steps; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const bool hit = next[i] < schedule[i].size() && schedule[i][next[i]] == k;
        events[i] = hit;
        if (hit) ++next[i];
      }
      kernels::abstract_step(view, events, fired);
      if (k < first_counted) continue;
      for (std::size_t i = 0; i < n; ++i) {
        counts[begin + i].inputs += events[i];
        counts[begin + i].outputs += fired[i];
      }
    }
  });
  return counts;
}

std::vector<CircuitFirst> first_fire(std::span<const CircuitLane> lanes, LeakLaw law, double dt,
                                     std::int64_t max_inputs, int jobs) {
  if (!(dt > 0)) throw ConfigError("first_fire: dt must be > 0");
  std::vector<CircuitFirst> out(lanes.size());

  parallel_chunks(lanes.size(), jobs, [&](std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    double horizon = 0;
    for (std::size_t i = begin; i < end; ++i) {
      horizon = std::max(horizon, static_cast<double>(max_inputs) / lanes[i].rate);
    }
    const auto n_steps = static_cast<std::int64_t>(std::llround(horizon / dt));
    std::vector<double> x(n, 0.0), r(n, 0.0), leak(n), dv(n), gap(n), carry(n), refr(n), pre(n);
    std::vector<double> period(n);
    std::vector<std::int64_t> count(n, 0);
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const CircuitLane& l = lanes[begin + i];
      if (!(1.0 / l.rate >= dt)) throw ConfigError("lane input period must be >= dt");
      leak[i] = law == LeakLaw::exponential ? std::exp(-dt / l.leak) : l.leak * dt;
      dv[i] = l.delta_v;
      gap[i] = l.gap;
      carry[i] = l.carry;
      refr[i] = l.refractory;
      period[i] = 1.0 / l.rate;
      out[begin + i].time_to_fire = std::numeric_limits<double>::infinity();
    }
    const kernels::CircuitLanes view{x, r, leak, dv, gap, carry, refr, law == LeakLaw::exponential, dt};
    std::vector<std::uint8_t> events(n), fired(n);
    std::size_t remaining = n;
    for (std::int64_t k = 0; k <= n_steps && remaining > 0; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        events[i] = 0;
        if (done[i] || count[i] >= max_inputs) continue;
        // Next input time uses the same index-based formula as the generator.
        const double t = period[i] + static_cast<double>(count[i]) * period[i];
        if (step_of(t, dt, n_steps) == k) {
          events[i] = 1;
          ++count[i];
        }
      }
      kernels::circuit_step(view, events, pre, fired);
      for (std::size_t i = 0; i < n; ++i) {
        if (!fired[i] || done[i]) continue;
        done[i] = true;
        --remaining;
        const CircuitLane& l = lanes[begin + i];
        const double t = period[i] + static_cast<double>(count[i] - 1) * period[i];
        // Charge arrives linearly over the input pulse; place the crossing inside it.
        const double frac = std::clamp((l.gap - pre[i]) / l.delta_v, 0.0, 1.0);
        out[begin + i] = {count[i], t + frac * l.pulse_width};
      }
    }
  });
  return out;
}

double quantization_slack(const StpParams& stp, double w, double theta, double tau_s, double nu_in,
                          double dt, std::int64_t inputs) {
  const analysis::AnalysisPoint exact = analysis::analyze(stp, w, theta, tau_s, nu_in);
  double slack = 0;
  if (exact.m_star.finite()) {
    const double m = static_cast<double>(exact.m_star.value());
    slack += 1.0 / m - 1.0 / (m + 1.0);
  }
  const double period = 1.0 / nu_in;
  double spread = 0;
  for (double cells : {std::floor(period / dt + 1e-9), std::ceil(period / dt - 1e-9)}) {
    if (cells < 1) continue;
    const double snapped = analysis::analyze(stp, w, theta, tau_s, 1.0 / (cells * dt)).response;
    spread = std::max(spread, std::abs(snapped - exact.response));
  }
  slack += spread;
  if (inputs > 0) slack += 1.0 / static_cast<double>(inputs);
  return slack;
}

double settling_time(const StpParams& stp, double tau_s, double duration) {
  return std::min(20.0 * std::max({tau_s, stp.tau_f, stp.tau_d}), duration / 2);
}

Comparison compare_analytic(const StpParams& stp, double w, double theta, double tau_s,
                            std::span<const double> nu_grid, double dt, double duration, int jobs) {
  const double settle = settling_time(stp, tau_s, duration);
  std::vector<AbstractLane> spec;
  spec.reserve(nu_grid.size());
  for (double nu : nu_grid) spec.push_back({stp, w, theta, tau_s, nu});
  const std::vector<LaneCounts> counts = run_abstract(spec, dt, duration, jobs, settle);

  Comparison cmp{dt, duration, settle, {}, 0.0, true};
  for (std::size_t i = 0; i < nu_grid.size(); ++i) {
    ComparisonRow row;
    row.nu_in = nu_grid[i];
    row.analytic = analysis::analyze(stp, w, theta, tau_s, row.nu_in).response;
    row.inputs = counts[i].inputs;
    row.outputs = counts[i].outputs;
    row.simulated = row.inputs > 0 ? static_cast<double>(row.outputs) / static_cast<double>(row.inputs) : 0.0;
    row.error = std::abs(row.simulated - row.analytic);
    row.slack = quantization_slack(stp, w, theta, tau_s, row.nu_in, dt, row.inputs);
    row.within = row.error <= row.slack;
    cmp.max_error = std::max(cmp.max_error, row.error);
    cmp.all_within = cmp.all_within && row.within;
    cmp.rows.push_back(row);
  }
  return cmp;
}

}  // namespace ecram_stp::lanes
