#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfradar/config.hpp"
#include "sfradar/estimator.hpp"
#include "sfradar/synth.hpp"

namespace sfr {

/// Everything a single trial draws from its seed: geometry, waveform,
/// schedule, compression matrices and the noise substream seed.
struct TrialSetup {
  Scenario scenario;
  PulseSchedule schedule;
  WaveformMatrix waveform;
  std::vector<MeasurementMatrix> phis;
  std::uint64_t noise_seed = 0;
};

/// Deterministic per-trial realization: substreams are derived from
/// trial_seed so trials are independent of execution order.
TrialSetup make_trial_setup(const ExperimentConfig& cfg,
                            std::uint64_t trial_seed);

/// A target snapped onto the configured grid. `snap_error` holds the
/// per-dimension distance between the requested and the snapped value
/// (degrees, m/s, meters).
struct TruthCell {
  std::size_t target_index = 0;
  std::array<std::size_t, 3> cell{};  // angle, velocity, range indices
  std::array<double, 3> snap_error{};
  bool on_grid = true;  // false when some dimension is outside the axis
};

std::vector<TruthCell> snap_truth(const ExperimentConfig& cfg);

/// Maps a detection (radians / m/s / meters) onto the configured grid.
/// Empty when it lands more than half a step away from every cell.
std::optional<std::array<std::size_t, 3>> grid_cell_of(
    const ExperimentConfig& cfg, const GridPoint& p);

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  bool success = false;
  std::string error;
  std::vector<GridPoint> detections;  // angle in radians
  std::vector<double> stage_angles;   // decoupled step-1 output (radians)
  std::vector<GridPoint> stage_pairs; // decoupled step-2 output
  std::vector<StageDiagnostics> stages;
  std::size_t stage_a = 0, stage_b = 0, stage_c = 0;
  double elapsed_s = 0.0;
};

/// Detection counts accumulated over all trials, one bin per grid cell of
/// the full configured 3-D grid plus a spillover counter for detections
/// that land off-grid (possible only through velocity folding mismatch).
struct OccurrenceMap {
  std::vector<double> angle_deg_axis;
  std::vector<double> velocity_mps_axis;
  std::vector<double> range_m_axis;
  std::vector<std::size_t> counts;  // ((ia * Nv) + iv) * Nr + ir
  std::vector<bool> truth_marks;    // snapped truth cells
  std::size_t off_grid = 0;

  std::size_t index(std::size_t ia, std::size_t iv, std::size_t ir) const {
    return (ia * velocity_mps_axis.size() + iv) * range_m_axis.size() + ir;
  }
};

struct ExperimentResult {
  ExperimentConfig config;  // as run, seed resolved
  std::vector<TrialRecord> trials;
  std::vector<TruthCell> truth;
  OccurrenceMap occurrences;
  std::size_t successes = 0;
  // Decoupled complexity using the largest observed per-stage sizes;
  // nullopt for the joint estimator.
  std::optional<ComplexityReport> complexity;
};

/// Runs all configured trials. A trial that throws is recorded as a
/// failure; the run itself throws std::runtime_error only when every
/// trial fails.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Runs one trial (exceptions recorded in the returned record).
TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial_index);

/// Writes manifest.cfg, heatmap.tsv, trials.jsonl and summary.json into
/// out_dir (created if missing). The SFRADAR_OUTPUT_DIR environment
/// variable overrides out_dir when set.
void emit_results(const ExperimentResult& result, const std::string& out_dir);

}  // namespace sfr
