#include "sfradar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sfradar/analysis.hpp"

namespace sfr {

namespace {

struct StageSolve {
  RecoveryResult result;
  std::vector<Detection> detections;
  double lambda = 0.0;
};

StageSolve solve_stage(const SensingMatrix& theta, const CVec& fused,
                       const StageSolverConfig& cfg) {
  StageSolve out;
  const double binf = linalg::norm_inf(theta.apply_adjoint(fused));
  out.lambda = cfg.lambda_rel * binf;
  SolverOptions opts = cfg.options;
  opts.support_policy = cfg.policy;
  out.result = (cfg.solver == SolverKind::kDantzig)
                   ? dantzig_selector(theta.mat, fused, out.lambda, opts)
                   : l1_first_order(theta.mat, fused, out.lambda, opts);
  out.detections = extract_support(out.result.s_hat, theta.grid, cfg.policy);
  if (cfg.refit && !out.detections.empty()) {
    SupportPolicy candidate = cfg.policy;
    candidate.tau = std::min(cfg.policy.tau, cfg.refit_candidate_tau);
    auto candidates = extract_support(out.result.s_hat, theta.grid, candidate);
    // A refit needs an overdetermined subsystem; candidates come out
    // sorted by magnitude, so truncation keeps the strongest.
    if (candidates.size() > theta.mat.rows()) {
      candidates.resize(theta.mat.rows());
    }
    std::vector<std::size_t> cols;
    for (const auto& det : candidates) cols.push_back(det.grid_index);
    // Backward elimination: neighboring grid columns are near-collinear,
    // so a one-shot refit splits a target's amplitude across them. Dropping
    // the weakest column and refitting reconsolidates the mass.
    CVec z;
    for (;;) {
      z = linalg::least_squares_subset(theta.mat, cols, fused);
      std::size_t argmin = 0;
      double zmin = std::abs(z[0]), zmax = std::abs(z[0]);
      for (std::size_t i = 1; i < z.size(); ++i) {
        const double m = std::abs(z[i]);
        if (m < zmin) {
          zmin = m;
          argmin = i;
        }
        zmax = std::max(zmax, m);
      }
      if (cols.size() == 1 || zmin >= cfg.policy.tau * zmax) break;
      cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(argmin));
    }
    CVec refit(theta.grid.size(), cd{0.0, 0.0});
    for (std::size_t i = 0; i < cols.size(); ++i) refit[cols[i]] = z[i];
    out.detections = extract_support(refit, theta.grid, cfg.policy);
  }
  return out;
}

void record(EstimateSet* sink, const char* stage, const StageSolve& s) {
  if (sink == nullptr) return;
  StageDiagnostics d;
  d.stage = stage;
  d.lambda = s.lambda;
  d.solver = s.result.diagnostics;
  d.detections = s.detections.size();
  sink->diagnostics.push_back(std::move(d));
}

std::vector<std::size_t> iota_pulses(std::size_t first, std::size_t count) {
  std::vector<std::size_t> p(count);
  for (std::size_t i = 0; i < count; ++i) p[i] = first + i;
  return p;
}

std::vector<double> fold_axis_by(const std::vector<double>& axis, double v_u) {
  std::vector<double> kept;
  for (const double v : axis) {
    bool duplicate = false;
    for (const double rep : kept) {
      const double k = std::round((v - rep) / v_u);
      if (k != 0.0 && std::abs((v - rep) - k * v_u) <= 1e-6) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(v);
  }
  return kept;
}

}  // namespace

std::vector<double> fold_velocity_axis(const std::vector<double>& axis,
                                       const PulseSchedule& schedule) {
  const auto v_u = unambiguous_velocity(schedule);
  if (!v_u) return axis;
  return fold_axis_by(axis, *v_u);
}

EstimateSet estimate_joint(const EstimationContext& ctx, const CVec& fused,
                           const ParamGrid& grid, const StageSolverConfig& cfg) {
  ParamGrid solve_grid = grid;
  if (grid.velocity_active()) {
    const auto folded = fold_velocity_axis(grid.velocity_axis(), *ctx.schedule);
    if (folded.size() != grid.velocity_axis().size()) {
      solve_grid = ParamGrid::full3d(grid.angle_axis(), folded, grid.range_axis());
    }
  }
  const auto pulses = iota_pulses(0, ctx.schedule->pulse_count);
  const SensingMatrix theta =
      build_sensing_matrix(solve_grid, *ctx.scenario, *ctx.schedule,
                           *ctx.waveform, *ctx.phis, pulses,
                           ctx.max_matrix_elements);
  const StageSolve s = solve_stage(theta, fused, cfg);

  EstimateSet est;
  record(&est, "joint", s);
  for (const auto& det : s.detections) est.triples.push_back(det.point);
  return est;
}

std::vector<double> step1_angles(const EstimationContext& ctx,
                                 const std::vector<double>& angle_axis,
                                 const DecoupledConfig& cfg,
                                 EstimateSet* diag_sink) {
  for (const std::size_t p : cfg.step1_pulses) {
    if (p >= cfg.constant_pulses) {
      throw std::invalid_argument(
          "step-1 pulses must come from the constant-carrier block");
    }
  }
  const ParamGrid grid = ParamGrid::angle_only(angle_axis);
  std::vector<double> angles;
  for (const std::size_t pulse : cfg.step1_pulses) {
    const CVec fused =
        synthesize_fused(*ctx.scenario, *ctx.schedule, *ctx.waveform, *ctx.phis,
                         {pulse}, ctx.noise_seed);
    const SensingMatrix theta =
        build_sensing_matrix(grid, *ctx.scenario, *ctx.schedule, *ctx.waveform,
                             *ctx.phis, {pulse}, ctx.max_matrix_elements);
    const StageSolve s = solve_stage(theta, fused, cfg.step1);
    record(diag_sink, "step1", s);
    for (const auto& det : s.detections) {
      if (std::find(angles.begin(), angles.end(), det.point.angle) ==
          angles.end()) {
        angles.push_back(det.point.angle);
      }
    }
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

std::vector<GridPoint> step2_velocity(const EstimationContext& ctx,
                                      const std::vector<double>& angles,
                                      const std::vector<double>& velocity_axis,
                                      const DecoupledConfig& cfg,
                                      EstimateSet* diag_sink) {
  if (angles.empty())
    throw std::invalid_argument("step 2 requires a non-empty angle set");
  // The constant-carrier block always aliases at V_u = c / (2 f T).
  const double v_u = kSpeedOfLight / (2.0 * ctx.schedule->base_carrier_hz *
                                      ctx.schedule->repetition_interval_s);
  const std::vector<double> axis = fold_axis_by(velocity_axis, v_u);

  std::vector<GridPoint> anchors;
  for (const double a : angles) anchors.push_back(GridPoint{a, 0.0, 0.0});
  const ParamGrid grid = ParamGrid::velocity_only(axis, anchors);
  const auto pulses = iota_pulses(0, cfg.constant_pulses);
  const CVec fused = synthesize_fused(*ctx.scenario, *ctx.schedule, *ctx.waveform,
                                      *ctx.phis, pulses, ctx.noise_seed);
  const SensingMatrix theta =
      build_sensing_matrix(grid, *ctx.scenario, *ctx.schedule, *ctx.waveform,
                           *ctx.phis, pulses, ctx.max_matrix_elements);
  const StageSolve s = solve_stage(theta, fused, cfg.step2);
  record(diag_sink, "step2", s);
  if (s.detections.empty()) {
    throw std::runtime_error("decoupled step 2: no (angle, velocity) detected");
  }
  std::vector<GridPoint> pairs;
  for (const auto& det : s.detections) {
    pairs.push_back(GridPoint{det.point.angle, det.point.velocity, 0.0});
  }
  return pairs;
}

std::vector<GridPoint> step3_range(const EstimationContext& ctx,
                                   const std::vector<GridPoint>& pairs,
                                   const std::vector<double>& range_axis,
                                   const DecoupledConfig& cfg,
                                   EstimateSet* diag_sink) {
  if (pairs.empty())
    throw std::invalid_argument("step 3 requires a non-empty pair set");
  const auto pulses = iota_pulses(cfg.constant_pulses, cfg.stepped_pulses);
  bool distinct = false;
  for (const std::size_t m : pulses) {
    if (ctx.schedule->carrier_of(m) != ctx.schedule->carrier_of(pulses.front())) {
      distinct = true;
      break;
    }
  }
  if (!distinct) {
    throw std::invalid_argument(
        "step 3: stepped block has a single carrier, range columns are "
        "parallel and range is unidentifiable");
  }
  const ParamGrid grid = ParamGrid::range_only(range_axis, pairs);
  const CVec fused = synthesize_fused(*ctx.scenario, *ctx.schedule, *ctx.waveform,
                                      *ctx.phis, pulses, ctx.noise_seed);
  const SensingMatrix theta =
      build_sensing_matrix(grid, *ctx.scenario, *ctx.schedule, *ctx.waveform,
                           *ctx.phis, pulses, ctx.max_matrix_elements);
  const StageSolve s = solve_stage(theta, fused, cfg.step3);
  record(diag_sink, "step3", s);
  if (s.detections.empty()) {
    throw std::runtime_error("decoupled step 3: no triple detected");
  }
  std::vector<GridPoint> triples;
  for (const auto& det : s.detections) triples.push_back(det.point);
  return triples;
}

EstimateSet estimate_decoupled(const EstimationContext& ctx,
                               const std::vector<double>& angle_axis,
                               const std::vector<double>& velocity_axis,
                               const std::vector<double>& range_axis,
                               const DecoupledConfig& cfg) {
  if (cfg.constant_pulses == 0 || cfg.stepped_pulses == 0) {
    throw std::invalid_argument("decoupled pipeline needs Nc >= 1 and Ns >= 1");
  }
  if (cfg.constant_pulses + cfg.stepped_pulses != ctx.schedule->pulse_count) {
    throw std::invalid_argument("Nc + Ns must equal the schedule pulse count");
  }
  DecoupledConfig local = cfg;
  if (local.step1_pulses.empty()) {
    // Default: first and last pulse of the constant block.
    local.step1_pulses.push_back(0);
    if (cfg.constant_pulses > 1) local.step1_pulses.push_back(cfg.constant_pulses - 1);
  }

  EstimateSet est;
  est.angles = step1_angles(ctx, angle_axis, local, &est);
  if (est.angles.empty()) {
    throw std::runtime_error(
        "decoupled step 1: no angle detected in any selected pulse");
  }
  est.stage_a = local.step1_pulses.size();
  est.stage_b = est.angles.size();
  est.pairs = step2_velocity(ctx, est.angles, velocity_axis, local, &est);
  est.stage_c = est.pairs.size();
  est.triples = step3_range(ctx, est.pairs, range_axis, local, &est);
  return est;
}

ComplexityReport decoupled_complexity(std::size_t na, std::size_t nb,
                                      std::size_t nc, std::size_t a,
                                      std::size_t b, std::size_t c) {
  if (na == 0 || nb == 0 || nc == 0 || a == 0 || b == 0 || c == 0)
    throw std::invalid_argument("decoupled_complexity: inputs must be positive");
  const auto cube = [](double x) { return x * x * x; };
  ComplexityReport rep;
  rep.joint_cost = cube(static_cast<double>(na) * static_cast<double>(nb) *
                        static_cast<double>(nc));
  rep.decoupled_cost = static_cast<double>(a) * cube(static_cast<double>(na)) +
                       cube(static_cast<double>(b) * static_cast<double>(nb)) +
                       cube(static_cast<double>(c) * static_cast<double>(nc));
  rep.ratio = rep.decoupled_cost / rep.joint_cost;
  return rep;
}

}  // namespace sfr
