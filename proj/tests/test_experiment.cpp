#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <limits>
#include <fstream>
#include <sstream>

#include "sfradar/experiment.hpp"

#ifndef SFR_CONFIG_DIR
#define SFR_CONFIG_DIR "configs"
#endif

using namespace sfr;
namespace fs = std::filesystem;

namespace {

// Small, fast configuration: one on-grid target, joint estimator, tiny grid.
ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.tx_nodes = 8;
  cfg.rx_nodes = 2;
  cfg.m_per_node = 4;
  cfg.samples_per_pulse = 32;
  cfg.snr_db = 20.0;
  cfg.schedule_mode = ScheduleMode::kHybrid;
  cfg.pulse_count = 6;
  cfg.constant_pulses = 3;
  cfg.step_min = 0.05;
  cfg.step_max = 0.3;
  cfg.targets = {TargetSpec{0.0, 40.0, 1200.0, 1.0, 0.0}};
  cfg.angle_deg_axis = AxisSpec{-10.0, 10.0, 3};
  cfg.velocity_mps_axis = AxisSpec{20.0, 20.0, 3};
  cfg.range_m_axis = AxisSpec{1000.0, 200.0, 3};
  cfg.lambda_rel = 0.02;
  cfg.trials = 4;
  cfg.master_seed = 555;
  cfg.output_dir = "out/tiny";
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("trial setup has the configured dimensions and noise power") {
  const ExperimentConfig cfg = tiny_config();
  const TrialSetup setup = make_trial_setup(cfg, 42);
  CHECK(setup.scenario.tx_nodes.size() == 8);
  CHECK(setup.scenario.rx_nodes.size() == 2);
  CHECK(setup.scenario.targets.size() == 1);
  CHECK(setup.waveform.samples_per_pulse() == 32);
  CHECK(setup.waveform.tx_count() == 8);
  CHECK(setup.schedule.pulse_count == 6);
  CHECK(setup.schedule.constant_pulses == 3);
  REQUIRE(setup.phis.size() == 2);
  CHECK(setup.phis[0].compressed_size() == 4);
  // SNR 20 dB against unit-norm waveform columns: sigma^2 = (1/L) / 100.
  CHECK(setup.scenario.noise_power ==
        doctest::Approx((1.0 / 32.0) / 100.0).epsilon(1e-12));
  // Target angle is stored in radians.
  CHECK(setup.scenario.targets[0].azimuth == doctest::Approx(0.0));
}

TEST_CASE("trials are deterministic and seed-sensitive") {
  const ExperimentConfig cfg = tiny_config();
  const TrialRecord a = run_trial(cfg, 1);
  const TrialRecord b = run_trial(cfg, 1);
  CHECK(a.seed == b.seed);
  CHECK(a.success == b.success);
  REQUIRE(a.detections.size() == b.detections.size());
  for (std::size_t i = 0; i < a.detections.size(); ++i) {
    CHECK(a.detections[i].angle == b.detections[i].angle);
    CHECK(a.detections[i].velocity == b.detections[i].velocity);
    CHECK(a.detections[i].range == b.detections[i].range);
  }
  const TrialRecord c = run_trial(cfg, 2);
  CHECK(c.seed != a.seed);
}

TEST_CASE("truth snapping distinguishes on-grid and off-grid targets") {
  ExperimentConfig cfg = tiny_config();
  const auto truth = snap_truth(cfg);
  REQUIRE(truth.size() == 1);
  CHECK(truth[0].on_grid);
  CHECK(truth[0].cell == std::array<std::size_t, 3>{1, 1, 1});
  CHECK(truth[0].snap_error[0] == doctest::Approx(0.0));
  CHECK(truth[0].snap_error[2] == doctest::Approx(0.0));

  cfg.targets[0].range_m = 1230.0;  // 30 m from the nearest 200 m cell
  const auto snapped = snap_truth(cfg);
  CHECK(snapped[0].on_grid);
  CHECK(snapped[0].cell[2] == 1);
  CHECK(snapped[0].snap_error[2] == doctest::Approx(30.0));

  cfg.targets[0].range_m = 5000.0;  // far outside the axis
  const auto off = snap_truth(cfg);
  CHECK_FALSE(off[0].on_grid);
}

TEST_CASE("grid_cell_of maps detections back to config cells") {
  const ExperimentConfig cfg = tiny_config();
  const GridPoint p{deg_to_rad(10.0), 60.0, 1400.0};
  const auto cell = grid_cell_of(cfg, p);
  REQUIRE(cell.has_value());
  CHECK(*cell == std::array<std::size_t, 3>{2, 2, 2});
  CHECK_FALSE(grid_cell_of(cfg, GridPoint{deg_to_rad(45.0), 60.0, 1400.0}));
}

TEST_CASE("experiment accumulates consistent occurrence counts") {
  const ExperimentConfig cfg = tiny_config();
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.trials.size() == 4);
  CHECK(res.successes >= 1);
  CHECK(res.successes <= 4);
  REQUIRE(res.occurrences.counts.size() == 27);

  // Occurrence counts equal the sum of per-trial on-grid detections.
  std::size_t from_trials = 0;
  for (const auto& t : res.trials) {
    for (const auto& d : t.detections) {
      if (grid_cell_of(cfg, d)) ++from_trials;
    }
  }
  std::size_t from_map = 0;
  for (const std::size_t c : res.occurrences.counts) from_map += c;
  CHECK(from_map == from_trials);

  // The truth cell is marked, and no cell exceeds the trial count.
  CHECK(res.occurrences.truth_marks[res.occurrences.index(1, 1, 1)]);
  for (const std::size_t c : res.occurrences.counts) CHECK(c <= 4);

  // Joint estimator: no complexity report.
  CHECK_FALSE(res.complexity.has_value());

  // High SNR, on-grid target: the truth cell dominates.
  CHECK(res.occurrences.counts[res.occurrences.index(1, 1, 1)] == 4);
}

TEST_CASE("workers do not change the result") {
  ExperimentConfig cfg = tiny_config();
  const ExperimentResult serial = run_experiment(cfg);
  cfg.workers = 3;
  const ExperimentResult parallel = run_experiment(cfg);
  REQUIRE(serial.trials.size() == parallel.trials.size());
  CHECK(serial.successes == parallel.successes);
  CHECK(serial.occurrences.counts == parallel.occurrences.counts);
  for (std::size_t i = 0; i < serial.trials.size(); ++i) {
    CHECK(serial.trials[i].seed == parallel.trials[i].seed);
    CHECK(serial.trials[i].detections.size() ==
          parallel.trials[i].detections.size());
  }
}

TEST_CASE("emit_results writes the four artifacts") {
  ExperimentConfig cfg = tiny_config();
  cfg.trials = 2;
  const ExperimentResult res = run_experiment(cfg);

  const fs::path dir =
      fs::temp_directory_path() / "sfradar_test_out" / "emit_basic";
  fs::remove_all(dir);
  emit_results(res, dir.string());

  for (const char* name :
       {"manifest.cfg", "heatmap.tsv", "trials.jsonl", "summary.json"}) {
    CHECK(fs::exists(dir / name));
  }

  // Manifest round-trips to the exact configuration that was run.
  const ExperimentConfig back = load_config((dir / "manifest.cfg").string());
  CHECK(back == res.config);

  // Heatmap: header plus one row per grid cell.
  const std::string heat = slurp(dir / "heatmap.tsv");
  std::size_t lines = 0;
  for (const char ch : heat) lines += (ch == '\n');
  CHECK(lines == 1 + 27);
  CHECK(heat.rfind("angle_deg\tvelocity_mps\trange_m\tcount\ttruth", 0) == 0);

  // One JSON line per trial.
  const std::string jsonl = slurp(dir / "trials.jsonl");
  std::size_t jlines = 0;
  for (const char ch : jsonl) jlines += (ch == '\n');
  CHECK(jlines == 2);

  fs::remove_all(dir);
}

TEST_CASE("SFRADAR_OUTPUT_DIR overrides the destination") {
  ExperimentConfig cfg = tiny_config();
  cfg.trials = 1;
  const ExperimentResult res = run_experiment(cfg);

  const fs::path ignored =
      fs::temp_directory_path() / "sfradar_test_out" / "ignored";
  const fs::path target =
      fs::temp_directory_path() / "sfradar_test_out" / "override";
  fs::remove_all(ignored);
  fs::remove_all(target);
  setenv("SFRADAR_OUTPUT_DIR", target.c_str(), 1);
  emit_results(res, ignored.string());
  unsetenv("SFRADAR_OUTPUT_DIR");

  CHECK(fs::exists(target / "summary.json"));
  CHECK_FALSE(fs::exists(ignored / "summary.json"));
  fs::remove_all(target);
}

TEST_CASE("an empty-detection trial still yields well-formed records") {
  ExperimentConfig cfg = tiny_config();
  cfg.targets.clear();  // nothing to detect; joint estimator returns empty
  cfg.snr_db = std::numeric_limits<double>::infinity();  // zero noise power
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.successes == res.trials.size());
  for (const auto& t : res.trials) {
    CHECK(t.success);
    CHECK(t.detections.empty());
  }
  std::size_t total = 0;
  for (const std::size_t c : res.occurrences.counts) total += c;
  CHECK(total == 0);

  const fs::path dir =
      fs::temp_directory_path() / "sfradar_test_out" / "empty";
  fs::remove_all(dir);
  emit_results(res, dir.string());
  CHECK(fs::exists(dir / "summary.json"));
  fs::remove_all(dir);
}
