#pragma once

#include <cstddef>
#include <vector>

#include "sfradar/sensing.hpp"
#include "sfradar/solver.hpp"

namespace sfr {

enum class SolverKind { kDantzig, kIsta };

struct StageSolverConfig {
  SolverKind solver = SolverKind::kDantzig;
  double lambda_rel = 0.05;  // lambda = lambda_rel * ||Theta^H r||_inf
  SupportPolicy policy;
  SolverOptions options;
  // Least-squares refit on a generous candidate support before the final
  // threshold; removes the l1 amplitude shrinkage so the detection
  // threshold acts on unbiased amplitudes.
  bool refit = true;
  double refit_candidate_tau = 0.2;  // capped at policy.tau
};

/// Configuration of the decoupled three-step pipeline.
struct DecoupledConfig {
  std::size_t constant_pulses = 0;           // Nc
  std::size_t stepped_pulses = 0;            // Ns
  std::vector<std::size_t> step1_pulses;     // subset of the constant block
  StageSolverConfig step1;  // angle stage
  StageSolverConfig step2;  // velocity stage
  StageSolverConfig step3;  // range stage
};

struct StageDiagnostics {
  std::string stage;
  double lambda = 0.0;
  SolverDiagnostics solver;
  std::size_t detections = 0;
};

/// Per-stage estimates: angle set, (angle, velocity) pairs, and final
/// (angle, velocity, range) triples.
struct EstimateSet {
  std::vector<double> angles;
  std::vector<GridPoint> pairs;    // range field unused
  std::vector<GridPoint> triples;
  std::vector<StageDiagnostics> diagnostics;
  // Stage sizes for the complexity accounting: A = step-1 solve count,
  // B = detected angle count, C = detected pair count.
  std::size_t stage_a = 0, stage_b = 0, stage_c = 0;
};

/// Inputs shared by the estimators: the synthesized pulses plus everything
/// needed to rebuild basis matrices.
struct EstimationContext {
  const Scenario* scenario = nullptr;
  const PulseSchedule* schedule = nullptr;
  const WaveformMatrix* waveform = nullptr;
  const std::vector<MeasurementMatrix>* phis = nullptr;
  std::uint64_t noise_seed = 0;
  std::size_t max_matrix_elements = std::size_t{1} << 27;
};

/// Folds a velocity axis by the schedule's unambiguous velocity: values
/// congruent modulo V_u keep only the smallest representative (they index
/// basis columns that are parallel and hence unresolvable). Identity when
/// V_u is unbounded.
std::vector<double> fold_velocity_axis(const std::vector<double>& axis,
                                       const PulseSchedule& schedule);

/// Joint recovery over a full 3-D grid: one sparse solve, support decoded
/// to triples. Velocity cells aliased under the schedule are folded first.
EstimateSet estimate_joint(const EstimationContext& ctx, const CVec& fused,
                           const ParamGrid& grid, const StageSolverConfig& cfg);

/// Step 1: per-pulse angle estimation over the angle axis only (velocity
/// and range anchored at zero; within one constant-carrier pulse both
/// contribute a common unit scalar absorbed by the coefficient). Returns
/// the union of the per-pulse angle sets.
std::vector<double> step1_angles(const EstimationContext& ctx,
                                 const std::vector<double>& angle_axis,
                                 const DecoupledConfig& cfg,
                                 EstimateSet* diag_sink);

/// Step 2: (angle, velocity) pairs from the constant-carrier block, grid =
/// detected angles x velocity axis, range anchored at zero.
std::vector<GridPoint> step2_velocity(const EstimationContext& ctx,
                                      const std::vector<double>& angles,
                                      const std::vector<double>& velocity_axis,
                                      const DecoupledConfig& cfg,
                                      EstimateSet* diag_sink);

/// Step 3: triples from the stepped block, grid = step-2 pairs x range
/// axis. Refuses an all-constant stepped block (ranges unidentifiable).
std::vector<GridPoint> step3_range(const EstimationContext& ctx,
                                   const std::vector<GridPoint>& pairs,
                                   const std::vector<double>& range_axis,
                                   const DecoupledConfig& cfg,
                                   EstimateSet* diag_sink);

/// Full decoupled pipeline. Throws std::runtime_error with a diagnostic
/// when a stage returns no detections.
EstimateSet estimate_decoupled(const EstimationContext& ctx,
                               const std::vector<double>& angle_axis,
                               const std::vector<double>& velocity_axis,
                               const std::vector<double>& range_axis,
                               const DecoupledConfig& cfg);

struct ComplexityReport {
  double joint_cost = 0.0;      // (Na Nb Nc)^3
  double decoupled_cost = 0.0;  // A Na^3 + (B Nb)^3 + (C Nc)^3
  double ratio = 0.0;           // decoupled / joint
};

ComplexityReport decoupled_complexity(std::size_t na, std::size_t nb,
                                      std::size_t nc, std::size_t a,
                                      std::size_t b, std::size_t c);

}  // namespace sfr
