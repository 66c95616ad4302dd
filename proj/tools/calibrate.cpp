// ecram-stp-calibrate: checks every preset anchor and, with --solve,
// re-derives the fitted constants from the anchors.
//
// The fit is sequential. The volatile drive (relative increment D at 1.2 V,
// tau_rise, tau_decay) and the ladder ratio are chosen first from the
// facilitation behaviors. Each resistance-drop anchor then fixes the absolute
// ladder scale, each per-input step fixes delta_v_per_unit_g, and the spike
// counts fix the threshold gap, which is found here by scanning.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ecram_stp/calibration.hpp"
#include "ecram_stp/config.hpp"
#include "ecram_stp/lif.hpp"

using namespace ecram_stp;

namespace {

struct Check {
  std::string name;
  std::string target;
  std::string measured;
  bool ok;
};

std::string fmt_count(SpikeCount c) { return c.to_string(); }

std::vector<Check> verify(const YAML::Node& presets) {
  std::vector<Check> out;
  const auto slow = config::ecram_params(presets, "slow_ms");
  const auto fast = config::ecram_params(presets, "fast_us");
  const double drop_slow = calibration::resistance_drop(slow, 60, 1.2e-3, 1.2);
  const double drop_fast = calibration::resistance_drop(fast, 82, 1e-6, 1.2);
  out.push_back({"slow_ms drop, state 60, 1.2 ms pulse", "6800 ohm +-10%", std::to_string(drop_slow),
                 std::abs(drop_slow - 6800) <= 680});
  out.push_back({"fast_us drop, state 82, 1 us pulse", "1500 ohm +-10%", std::to_string(drop_fast),
                 std::abs(drop_fast - 1500) <= 150});

  const auto df = config::neuron_preset(presets, "delay_feedback_slow");
  const auto cr = config::neuron_preset(presets, "capacitive_refractory");
  const auto dff = config::neuron_preset(presets, "delay_feedback_fast");
  const double dv60 = df.lif.delta_v_per_unit_g * g_nonvolatile(df.ecram, 60);
  const double dv112 = cr.lif.delta_v_per_unit_g * g_nonvolatile(cr.ecram, 112);
  out.push_back({"delay_feedback_slow dV, state 60", "0.129 V", std::to_string(dv60), std::abs(dv60 - 0.129) < 1e-9});
  out.push_back({"capacitive_refractory dV, state 112", "0.289 V", std::to_string(dv112),
                 std::abs(dv112 - 0.289) < 1e-9});

  const int want[] = {7, 6, 5};
  const double rates[] = {50, 100, 200};
  for (int i = 0; i < 3; ++i) {
    const SpikeCount c = spikes_to_fire(df.lif, df.ecram, 60, rates[i]);
    out.push_back({"delay_feedback_slow state 60 @ " + std::to_string(static_cast<int>(rates[i])) + " Hz",
                   std::to_string(want[i]), fmt_count(c), c == SpikeCount::of(want[i])});
  }
  const SpikeCount fast5 = spikes_to_fire(dff.lif, dff.ecram, 82, dff.rate);
  out.push_back({"delay_feedback_fast state 82 @ 100 kHz", "5", fmt_count(fast5), fast5 == SpikeCount::of(5)});

  bool never_low = true;
  for (int s = 1; s <= 8; ++s) never_low = never_low && !spikes_to_fire(cr.lif, cr.ecram, s, 100).finite();
  const SpikeCount c9 = spikes_to_fire(cr.lif, cr.ecram, 9, 100);
  const SpikeCount c128 = spikes_to_fire(cr.lif, cr.ecram, 128, 100);
  out.push_back({"capacitive_refractory states 1-8", "never", never_low ? "never" : "fires", never_low});
  out.push_back({"capacitive_refractory state 9", "22", fmt_count(c9), c9 == SpikeCount::of(22)});
  out.push_back({"capacitive_refractory state 128", "3", fmt_count(c128), c128 == SpikeCount::of(3)});

  using calibration::SingleRun;
  const auto syn = sim::StpWiring::synaptic_facilitation;
  {
    const auto r = calibration::run_single(presets, SingleRun{"delay_feedback_slow", 60, syn, 2.0, 0});
    const auto& c = r.input_counts[0];
    const auto from = calibration::sustained_from(c, 5);
    const bool ok = !c.empty() && c.front() == 6 && from.has_value();
    const double onset = ok ? r.raster[*from].time : NAN;
    out.push_back({"delay_feedback_slow synaptic onset of sustained 5", "0.170 s +-30%", std::to_string(onset),
                   ok && std::abs(onset - 0.170) <= 0.3 * 0.170});
  }
  {
    const auto r = calibration::run_single(presets, SingleRun{"capacitive_refractory", 112, syn, 2.0, 0});
    const auto& c = r.input_counts[0];
    out.push_back({"capacitive_refractory state 112 synaptic", "4+(34){2,}3{10,}",
                   calibration::encode(c).substr(0, 24) + "...", calibration::intermittent_transition(c, 4, 3)});
  }
  {
    const auto r = calibration::run_single(presets, SingleRun{"capacitive_refractory", 1, syn, 10.0, 0});
    const auto& c = r.input_counts[0];
    const bool steady = c.size() >= 10 && calibration::sustained_from(c, c.back()).value_or(c.size()) + 5 <= c.size();
    const int period = c.empty() ? 0 : c.back();
    out.push_back({"capacitive_refractory state 1 synaptic period", "24 +-2", std::to_string(period),
                   steady && std::abs(period - 24) <= 2});
  }
  return out;
}

// Smallest and largest gap (V) that give `want` inputs at each rate.
void scan_gap(const CircuitLifParams& base, const EcramParams& e, int state, const std::vector<double>& rates,
              const std::vector<int>& want) {
  double lo = NAN, hi = NAN;
  const double dv = base.delta_v_per_unit_g * g_nonvolatile(e, state);
  for (int i = 1; i <= 20000; ++i) {
    CircuitLifParams p = base;
    const double gap = dv * i * 1e-3 + 1e-9;
    p.v_threshold = p.polarity == Polarity::discharge_to_fire ? p.v_supply - gap : gap;
    if (!(p.v_threshold > 0 && p.v_threshold < p.v_supply)) break;
    bool ok = true;
    for (std::size_t k = 0; k < rates.size() && ok; ++k) ok = spikes_to_fire(p, e, state, rates[k]) == SpikeCount::of(want[k]);
    if (ok) {
      if (std::isnan(lo)) lo = gap;
      hi = gap;
    }
  }
  std::printf("  feasible gap for state %d: [%.6g, %.6g] V\n", state, lo, hi);
}

void solve(const YAML::Node& presets) {
  const double D = 0.072, vth = 0.2, ratio = 2.08;
  auto ladder = [&](int s) { return 1 + (s - 1) / 127.0 * (ratio - 1); };
  auto fit = [&](const char* name, int state, double width, double tau_rise, double drop) {
    const double x = D * (1 - std::exp(-width / tau_rise));
    const double g = x / (1 + x) / drop;
    const double gmin = g / ladder(state);
    std::printf("ecram.%s: g_state_min %.17g  g_state_max %.17g  drive_gain %.17g  (g at state %d = %.6g S)\n", name,
                gmin, gmin * ratio, D * gmin / (1.2 - vth), state, g);
    return gmin;
  };
  const double gs = fit("slow_ms", 60, 1.2e-3, 22.5e-3, 6800);
  const double gf = fit("fast_us", 82, 1e-6, 22.5e-6, 1500);
  std::printf("neuron.delay_feedback_slow.delta_v_per_unit_g %.17g\n", 0.129 / (gs * ladder(60)));
  std::printf("neuron.capacitive_refractory.delta_v_per_unit_g %.17g\n", 0.289 / (gs * ladder(112)));
  std::printf("neuron.delay_feedback_fast.delta_v_per_unit_g %.17g\n", 0.169 / (gf * ladder(82)));
  const double alpha = 0.784;
  std::printf("neuron.capacitive_refractory.leak_tau %.17g  v_threshold %.17g\n", -0.01 / std::log(alpha),
              0.1579 / (1 - alpha));

  const auto df = config::neuron_preset(presets, "delay_feedback_slow");
  std::printf("delay_feedback_slow gap scan (7/6/5 at 50/100/200 Hz):\n");
  scan_gap(df.lif, df.ecram, 60, {50, 100, 200}, {7, 6, 5});
  const auto dff = config::neuron_preset(presets, "delay_feedback_fast");
  std::printf("delay_feedback_fast gap scan (5 at 100 kHz):\n");
  scan_gap(dff.lif, dff.ecram, 82, {dff.rate}, {5});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify (default) or re-derive the calibrated presets"};
  std::string path = config::default_presets_path();
  bool do_solve = false;
  app.add_option("--presets", path, "Preset file")->capture_default_str();
  app.add_flag("--solve", do_solve, "Print the values derived from the anchors");
  CLI11_PARSE(app, argc, argv);
  try {
    const YAML::Node presets = config::load_file(path);
    if (do_solve) {
      solve(presets);
      return 0;
    }
    bool all = true;
    for (const Check& c : verify(presets)) {
      std::printf("%-4s %-50s target %-18s measured %s\n", c.ok ? "ok" : "FAIL", c.name.c_str(), c.target.c_str(),
                  c.measured.c_str());
      all = all && c.ok;
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
