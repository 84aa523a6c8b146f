#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfradar/analysis.hpp"
#include "sfradar/experiment.hpp"

namespace {

using namespace sfr;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig load_with_overrides(const CommonOpts& c) {
  ExperimentConfig cfg = load_config(c.config_path);
  if (c.seed) cfg.master_seed = *c.seed;
  return cfg;
}

/// Schedule realized from the config's own seed (trial 0 substream), so
/// ambiguity / resolution reports describe the same pulse train the first
/// simulation trial uses.
PulseSchedule schedule_of(const ExperimentConfig& cfg) {
  const std::uint64_t trial_seed = Rng::derive_seed(cfg.master_seed, 0);
  return make_trial_setup(cfg, trial_seed).schedule;
}

void print_opt(const char* label, const std::optional<double>& v,
               const char* unit) {
  std::cout << label << ": ";
  if (v) {
    std::cout << *v << " " << unit << "\n";
  } else {
    std::cout << "unbounded (grows with the pulse count)\n";
  }
}

int cmd_simulate(const CommonOpts& common, std::optional<std::size_t> trials,
                 std::optional<std::string> out, bool verbose) {
  ExperimentConfig cfg = load_with_overrides(common);
  if (trials) cfg.trials = *trials;
  if (out) cfg.output_dir = *out;
  const ExperimentResult result = run_experiment(cfg);
  emit_results(result, cfg.output_dir);

  std::cout << "trials: " << result.trials.size()
            << "  succeeded: " << result.successes << "\n";
  std::size_t detections = 0;
  for (const auto& t : result.trials) detections += t.detections.size();
  std::cout << "detections: " << detections
            << "  off-grid: " << result.occurrences.off_grid << "\n";
  if (result.complexity) {
    std::cout << "complexity ratio (decoupled/joint): "
              << result.complexity->ratio << "\n";
  }
  if (verbose) {
    for (const auto& t : result.trials) {
      std::cout << "trial " << t.trial_index << " seed=" << t.seed
                << (t.success ? "" : " FAILED: " + t.error);
      for (const auto& d : t.detections) {
        std::cout << "  (" << rad_to_deg(d.angle) << " deg, " << d.velocity
                  << " m/s, " << d.range << " m)";
      }
      std::cout << "\n";
    }
  }
  std::cout << "results written to " << cfg.output_dir << "\n";
  return 0;
}

int cmd_ambiguity(const CommonOpts& common) {
  const ExperimentConfig cfg = load_with_overrides(common);
  const PulseSchedule sched = schedule_of(cfg);
  const AmbiguityReport rep = ambiguity_report(sched);

  const char* mode = "constant";
  switch (rep.mode) {
    case ScheduleMode::kConstant: mode = "constant"; break;
    case ScheduleMode::kLinear: mode = "linear"; break;
    case ScheduleMode::kRandom: mode = "random"; break;
    case ScheduleMode::kHybrid: mode = "hybrid"; break;
  }
  std::cout << "schedule mode: " << mode << "  pulses: " << sched.pulse_count
            << "\n";
  print_opt("unambiguous range", rep.unambiguous_range_m, "m");
  print_opt("unambiguous velocity", rep.unambiguous_velocity_mps, "m/s");
  if (rep.effective_range_scan_m) {
    std::cout << "smallest range coincidence found by scan: "
              << *rep.effective_range_scan_m << " m\n";
  }
  if (rep.effective_velocity_scan_mps) {
    std::cout << "smallest velocity coincidence found by scan: "
              << *rep.effective_velocity_scan_mps << " m/s\n";
  }
  if (!rep.notes.empty()) std::cout << "note: " << rep.notes << "\n";
  return 0;
}

int cmd_resolution(const CommonOpts& common, std::size_t sweep_points) {
  const ExperimentConfig cfg = load_with_overrides(common);
  const PulseSchedule sched = schedule_of(cfg);
  if (sched.pulse_count < 2) {
    std::cerr << "resolution analysis needs at least two pulses\n";
    return 1;
  }
  const double alpha_cfg = 4.0 * kPi * cfg.velocity_mps_axis.step *
                           sched.repetition_interval_s * cfg.carrier_hz /
                           kSpeedOfLight;
  std::cout << "alpha from the configured velocity step: " << alpha_cfg << " rad\n";
  {
    const ResolutionReport r = check_sufficient_conditions(sched.steps, alpha_cfg);
    std::cout << "h(steps) = " << r.h_steps << "  h(0) = " << r.h_zero
              << "  improved = " << (r.h_steps < r.h_zero ? "yes" : "no") << "\n";
    std::cout << "sufficient conditions: ratio=" << (r.ratio_condition ? "ok" : "violated")
              << " sine=" << (r.sine_condition ? "ok" : "violated")
              << " verdict=" << (r.verdict ? "pass" : "fail") << "\n";
    if (!r.diagnostics.empty()) std::cout << "  " << r.diagnostics << "\n";
  }
  const double alpha_max = kPi / static_cast<double>(sched.pulse_count - 1);
  std::cout << "\nalpha_rad\th_steps\th_zero\tratio_ok\tsine_ok\tverdict\n";
  for (std::size_t i = 1; i <= sweep_points; ++i) {
    const double alpha = alpha_max * static_cast<double>(i) /
                         static_cast<double>(sweep_points + 1);
    const ResolutionReport r = check_sufficient_conditions(sched.steps, alpha);
    std::cout << alpha << '\t' << r.h_steps << '\t' << r.h_zero << '\t'
              << (r.ratio_condition ? 1 : 0) << '\t' << (r.sine_condition ? 1 : 0)
              << '\t' << (r.verdict ? 1 : 0) << '\n';
  }
  return 0;
}

int cmd_validate(const CommonOpts& common) {
  const ExperimentConfig cfg = load_with_overrides(common);
  cfg.validate();
  const std::uint64_t trial_seed = Rng::derive_seed(cfg.master_seed, 0);
  TrialSetup setup = make_trial_setup(cfg, trial_seed);
  bool ok = true;

  // Waveform column orthonormality.
  {
    const CMat g = linalg::gram(setup.waveform.entries);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) {
        const cd expected = (i == j) ? cd{1.0, 0.0} : cd{0.0, 0.0};
        worst = std::max(worst, std::abs(g(i, j) - expected));
      }
    }
    const bool pass = worst <= 1e-10;
    ok = ok && pass;
    std::cout << (pass ? "[ok]  " : "[FAIL] ")
              << "waveform orthonormality, max |X^H X - I| = " << worst << "\n";
  }

  // Far-field geometry (validate throws on violation).
  try {
    setup.scenario.validate(cfg.far_field_factor);
    std::cout << "[ok]  far-field geometry\n";
  } catch (const std::exception& e) {
    ok = false;
    std::cout << "[FAIL] far-field geometry: " << e.what() << "\n";
  }

  // Slow-target advisory.
  {
    const bool pass =
        slow_target_regime_ok(setup.scenario, setup.schedule, setup.waveform);
    if (pass) {
      std::cout << "[ok]  slow-target regime\n";
    } else {
      std::cout << "[warn] slow-target advisory violated "
                   "(intra-pulse Doppler drift exceeds the design bound)\n";
    }
  }

  // Noiseless model consistency: synthesized data must equal the basis
  // response at the true parameters to numerical precision.
  {
    Scenario clean = setup.scenario;
    clean.noise_power = 0.0;
    clean.jammers.clear();

    auto dedupe = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              v.end());
      return v;
    };
    std::vector<double> angles, velocities, ranges;
    for (const auto& t : clean.targets) {
      angles.push_back(t.azimuth);
      velocities.push_back(t.radial_speed);
      ranges.push_back(t.initial_range);
    }
    const ParamGrid grid = ParamGrid::full3d(dedupe(angles), dedupe(velocities),
                                             dedupe(ranges));
    std::vector<std::size_t> pulses(cfg.pulse_count);
    for (std::size_t m = 0; m < pulses.size(); ++m) pulses[m] = m;
    const SensingMatrix theta =
        build_sensing_matrix(grid, clean, setup.schedule, setup.waveform,
                             setup.phis, pulses);
    CVec s_true(grid.size(), cd{0.0, 0.0});
    for (const auto& t : clean.targets) {
      s_true[grid.flat_index(GridPoint{t.azimuth, t.radial_speed,
                                       t.initial_range})] += t.reflection;
    }
    const CVec model = theta.apply(s_true);
    const CVec data = synthesize_fused(clean, setup.schedule, setup.waveform,
                                       setup.phis, pulses, setup.noise_seed);
    double diff = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      diff = std::max(diff, std::abs(data[i] - model[i]));
    }
    const double scale = std::max(1e-300, linalg::norm_inf(data));
    const bool pass = diff / scale <= 1e-9;
    ok = ok && pass;
    std::cout << (pass ? "[ok]  " : "[FAIL] ")
              << "noiseless model consistency, max relative deviation = "
              << diff / scale << "\n";
  }

  std::cout << (ok ? "validation passed\n" : "validation FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Step-frequency compressive MIMO radar simulator"};
  app.require_subcommand(1);

  CommonOpts common;
  std::optional<std::size_t> trials;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  std::size_t sweep_points = 32;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", common.config_path, "experiment config file")
        ->required();
    sub->add_option("-s,--seed", seed, "override the master seed");
  };

  CLI::App* sim = app.add_subcommand(
      "simulate", "run Monte Carlo trials and write result files");
  add_common(sim);
  sim->add_option("-t,--trials", trials, "override the trial count");
  sim->add_option("-o,--out", out, "override the output directory");
  sim->add_flag("-v,--verbose", verbose, "print per-trial detections");

  CLI::App* amb = app.add_subcommand(
      "ambiguity", "report unambiguous range / velocity for the schedule");
  add_common(amb);

  CLI::App* res = app.add_subcommand(
      "resolution", "velocity-resolution metric and sufficient conditions");
  add_common(res);
  res->add_option("-n,--sweep", sweep_points, "alpha sweep point count")
      ->check(CLI::PositiveNumber);

  CLI::App* val = app.add_subcommand(
      "validate", "sanity-check a config: waveform, geometry, signal model");
  add_common(val);

  try {
    app.parse(argc, argv);
    common.seed = seed;
    if (sim->parsed()) return cmd_simulate(common, trials, out, verbose);
    if (amb->parsed()) return cmd_ambiguity(common);
    if (res->parsed()) return cmd_resolution(common, sweep_points);
    if (val->parsed()) return cmd_validate(common);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
