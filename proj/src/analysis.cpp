#include "ecram_stp/analysis.hpp"

#include <cmath>
#include <ostream>

#include "ecram_stp/csv.hpp"
#include "ecram_stp/errors.hpp"
#include "ecram_stp/parallel.hpp"

namespace ecram_stp::analysis {

double steady_state_level(double delta, double tau, double period) {
  if (!(period > 0) || !(tau > 0)) throw DomainError("steady_state_level: need period > 0 and tau > 0");
  // 1 - e^{-T/tau} without cancellation for T << tau.
  return delta / -std::expm1(-period / tau);
}

double effective_weight_at_frequency(const StpParams& params, double w, double nu_in) {
  if (!(nu_in > 0)) throw DomainError("effective_weight_at_frequency: nu_in must be > 0");
  const double period = 1.0 / nu_in;
  const double f = steady_state_level(params.delta_f, params.tau_f, period);
  const double d = steady_state_level(params.delta_d, params.tau_d, period);
  return clamp_effective_weight(w, f, d);
}

SpikeCount min_spikes_to_threshold(double theta, double w_eff, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("min_spikes_to_threshold: alpha must lie in (0, 1)");
  if (!(w_eff > 0)) return SpikeCount::never();
  if (w_eff >= theta) return SpikeCount::of(1);
  const double log_alpha = std::log(alpha);
  if (-log_alpha < kLeakFreeRatio) {
    return SpikeCount::of(static_cast<std::int64_t>(std::ceil(theta / w_eff)));
  }
  // Asymptote w/(1-alpha) at or below theta is never reached.
  const double ratio = theta * (1.0 - alpha) / w_eff;
  if (ratio >= 1.0) return SpikeCount::never();
  const double m = std::ceil(std::log1p(-ratio) / log_alpha);
  if (!(m < 9.0e18)) return SpikeCount::never();
  return SpikeCount::of(std::max<std::int64_t>(1, static_cast<std::int64_t>(m)));
}

AnalysisPoint analyze(const StpParams& params, double w, double theta, double tau_s, double nu_in) {
  if (!(nu_in > 0)) throw DomainError("analyze: nu_in must be > 0");
  if (!(tau_s > 0) || !(theta > 0)) throw DomainError("analyze: need tau_s > 0 and theta > 0");
  AnalysisPoint p;
  p.nu_in = nu_in;
  p.period = 1.0 / nu_in;
  p.alpha = std::exp(-p.period / tau_s);
  p.f_ss = steady_state_level(params.delta_f, params.tau_f, p.period);
  p.d_ss = steady_state_level(params.delta_d, params.tau_d, p.period);
  p.w_eff = clamp_effective_weight(w, p.f_ss, p.d_ss);
  if (p.alpha <= 0) {
    // Leak wipes the membrane between spikes: only a single-spike crossing fires.
    p.m_star = p.w_eff >= theta ? SpikeCount::of(1) : SpikeCount::never();
  } else if (p.alpha >= 1) {
    p.m_star = p.w_eff > 0 ? SpikeCount::of(static_cast<std::int64_t>(std::ceil(theta / p.w_eff)))
                           : SpikeCount::never();
  } else {
    p.m_star = min_spikes_to_threshold(theta, p.w_eff, p.alpha);
  }
  p.response = p.m_star.response();
  return p;
}

std::vector<AnalysisPoint> frequency_response(const StpParams& params, double w, double theta,
                                              double tau_s, std::span<const double> nu_grid) {
  if (nu_grid.empty()) throw DomainError("frequency_response: empty frequency grid");
  params.validate();
  std::vector<AnalysisPoint> out;
  out.reserve(nu_grid.size());
  for (double nu : nu_grid) out.push_back(analyze(params, w, theta, tau_s, nu));
  return out;
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "nu_in") return SweepParam::nu_in;
  if (name == "tau_s") return SweepParam::tau_s;
  if (name == "theta") return SweepParam::theta;
  if (name == "w") return SweepParam::w;
  if (name == "tau_f") return SweepParam::tau_f;
  if (name == "tau_d") return SweepParam::tau_d;
  if (name == "delta_f") return SweepParam::delta_f;
  if (name == "delta_d") return SweepParam::delta_d;
  if (name == "df_ratio") return SweepParam::df_ratio;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::nu_in: return "nu_in";
    case SweepParam::tau_s: return "tau_s";
    case SweepParam::theta: return "theta";
    case SweepParam::w: return "w";
    case SweepParam::tau_f: return "tau_f";
    case SweepParam::tau_d: return "tau_d";
    case SweepParam::delta_f: return "delta_f";
    case SweepParam::delta_d: return "delta_d";
    case SweepParam::df_ratio: return "df_ratio";
  }
  return "?";
}

void SweepGrid::validate() const {
  bool has_df_ratio = false;
  bool has_delta_f = false;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto& axis = axes[i];
    if (axis.values.empty()) throw ConfigError("sweep axis '" + to_string(axis.param) + "' is empty");
    for (std::size_t k = 1; k < axis.values.size(); ++k) {
      if (!(axis.values[k] > axis.values[k - 1])) {
        throw ConfigError("sweep axis '" + to_string(axis.param) + "' must be strictly increasing");
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (axes[j].param == axis.param) throw ConfigError("duplicate sweep axis '" + to_string(axis.param) + "'");
    }
    has_df_ratio |= axis.param == SweepParam::df_ratio;
    has_delta_f |= axis.param == SweepParam::delta_f;
  }
  if (has_df_ratio && has_delta_f) throw ConfigError("sweep: df_ratio and delta_f axes are exclusive");
  stp.validate();
}

std::size_t SweepGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

namespace {

struct PointParams {
  StpParams stp;
  double w, theta, tau_s, nu_in;
  double df_ratio = -1;  // < 0: not swept
};

void assign(PointParams& p, SweepParam param, double v) {
  switch (param) {
    case SweepParam::nu_in: p.nu_in = v; break;
    case SweepParam::tau_s: p.tau_s = v; break;
    case SweepParam::theta: p.theta = v; break;
    case SweepParam::w: p.w = v; break;
    case SweepParam::tau_f: p.stp.tau_f = v; break;
    case SweepParam::tau_d: p.stp.tau_d = v; break;
    case SweepParam::delta_f: p.stp.delta_f = v; break;
    case SweepParam::delta_d: p.stp.delta_d = v; break;
    case SweepParam::df_ratio: p.df_ratio = v; break;
  }
}

}  // namespace

SweepResult sweep(const SweepGrid& grid, int jobs) {
  grid.validate();
  SweepResult result;
  result.axes = grid.axes;
  const std::size_t n = grid.size();
  result.rows.resize(n);
  parallel_chunks(n, jobs, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> index(grid.axes.size());
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::size_t rem = flat;
      for (std::size_t a = grid.axes.size(); a-- > 0;) {
        index[a] = rem % grid.axes[a].values.size();
        rem /= grid.axes[a].values.size();
      }
      PointParams p{grid.stp, grid.w, grid.theta, grid.tau_s, grid.nu_in};
      SweepRow& row = result.rows[flat];
      row.coords.resize(grid.axes.size());
      for (std::size_t a = 0; a < grid.axes.size(); ++a) {
        row.coords[a] = grid.axes[a].values[index[a]];
        assign(p, grid.axes[a].param, row.coords[a]);
      }
      if (p.df_ratio >= 0) p.stp.delta_f = p.df_ratio * p.stp.delta_d;
      p.stp.validate();
      row.point = analyze(p.stp, p.w, p.theta, p.tau_s, p.nu_in);
    }
  });
  return result;
}

void write_csv(std::ostream& out, const SweepResult& result) {
  std::vector<std::string> header;
  for (const auto& a : result.axes) header.push_back(to_string(a.param));
  for (const char* c : {"f_ss", "d_ss", "w_eff", "m_star", "response"}) header.emplace_back(c);
  csv::write_row(out, header);
  std::vector<std::string> cells;
  for (const auto& row : result.rows) {
    cells.clear();
    for (double c : row.coords) cells.push_back(csv::number(c));
    cells.push_back(csv::number(row.point.f_ss));
    cells.push_back(csv::number(row.point.d_ss));
    cells.push_back(csv::number(row.point.w_eff));
    cells.push_back(row.point.m_star.to_string());
    cells.push_back(csv::number(row.point.response));
    csv::write_row(out, cells);
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > 0)) throw DomainError("logspace: endpoints must be > 0");
  auto v = linspace(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  if (n >= 1) v.front() = lo;
  if (n >= 2) v.back() = hi;
  return v;
}

}  // namespace ecram_stp::analysis
