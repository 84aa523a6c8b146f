#include "sfradar/experiment.hpp"

#include <atomic>
#include <chrono>
#include <iostream>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace sfr {

namespace {

using json = nlohmann::json;

struct AxisSnap {
  std::size_t index = 0;
  double error = 0.0;
  bool on_axis = false;
};

AxisSnap snap_axis(const AxisSpec& axis, double value) {
  AxisSnap s;
  if (axis.count == 1 || axis.step == 0.0) {
    s.index = 0;
    s.error = value - axis.start;
    s.on_axis = std::abs(s.error) <= 1e-6 * std::max(1.0, std::abs(axis.start));
    return s;
  }
  const double x = (value - axis.start) / axis.step;
  long i = std::lround(x);
  const bool in_range = i >= 0 && static_cast<std::size_t>(i) < axis.count;
  if (i < 0) i = 0;
  if (static_cast<std::size_t>(i) >= axis.count)
    i = static_cast<long>(axis.count) - 1;
  s.index = static_cast<std::size_t>(i);
  s.error = value - (axis.start + axis.step * static_cast<double>(i));
  s.on_axis =
      in_range && std::abs(s.error) <= 0.5 * std::abs(axis.step) * (1.0 + 1e-9);
  return s;
}

std::vector<double> to_rad(const std::vector<double>& deg) {
  std::vector<double> out(deg.size());
  for (std::size_t i = 0; i < deg.size(); ++i) out[i] = deg_to_rad(deg[i]);
  return out;
}

StageSolverConfig joint_stage_config(const ExperimentConfig& cfg) {
  StageSolverConfig s;
  s.solver = cfg.solver;
  s.lambda_rel = cfg.lambda_rel;
  s.policy.kind = SupportPolicy::Kind::kRelativeThreshold;
  s.policy.tau = cfg.detect_tau;
  s.options.max_iterations = cfg.max_iterations;
  return s;
}

json stage_json(const StageDiagnostics& d) {
  return json{{"stage", d.stage},
              {"lambda", d.lambda},
              {"iterations", d.solver.iterations},
              {"converged", d.solver.converged},
              {"feasibility", d.solver.achieved_feasibility},
              {"objective", d.solver.objective},
              {"message", d.solver.message},
              {"detections", d.detections}};
}

}  // namespace

TrialSetup make_trial_setup(const ExperimentConfig& cfg,
                            std::uint64_t trial_seed) {
  TrialSetup setup;

  Rng tx_rng(Rng::derive_seed(trial_seed, 11));
  Rng rx_rng(Rng::derive_seed(trial_seed, 12));
  Rng wf_rng(Rng::derive_seed(trial_seed, 13));
  Rng sched_rng(Rng::derive_seed(trial_seed, 14));

  Scenario& sc = setup.scenario;
  sc.tx_nodes = place_nodes_uniform_disk(cfg.tx_nodes, cfg.disk_radius_m, tx_rng);
  sc.rx_nodes = place_nodes_uniform_disk(cfg.rx_nodes, cfg.disk_radius_m, rx_rng);
  for (const auto& t : cfg.targets) {
    sc.targets.push_back(Target{deg_to_rad(t.angle_deg), t.velocity_mps,
                                t.range_m, cd{t.refl_re, t.refl_im}});
  }
  for (const auto& j : cfg.jammers) {
    sc.jammers.push_back(Jammer{j.range_m, deg_to_rad(j.angle_deg), j.amplitude});
  }
  // Unit-norm waveform columns put 1/L power in each fast-time sample;
  // SNR is defined against that per-sample power.
  const double signal_power = 1.0 / static_cast<double>(cfg.samples_per_pulse);
  sc.noise_power = signal_power / std::pow(10.0, cfg.snr_db / 10.0);
  sc.carrier_hz = cfg.carrier_hz;
  sc.seed = trial_seed;
  sc.validate(cfg.far_field_factor);

  setup.waveform = gen_orthogonal_qpsk(cfg.samples_per_pulse, cfg.tx_nodes,
                                       cfg.symbol_interval_s, wf_rng);

  ScheduleParams params;
  params.linear_delta = cfg.linear_step;
  params.step_min = cfg.step_min;
  params.step_max = cfg.step_max;
  params.constant_pulses = cfg.constant_pulses;
  setup.schedule = make_schedule(cfg.schedule_mode, cfg.pulse_count,
                                 cfg.pulse_interval_s, cfg.carrier_hz, params,
                                 sched_rng);

  for (std::size_t l = 0; l < cfg.rx_nodes; ++l) {
    Rng phi_rng(Rng::derive_seed(trial_seed, 15, l));
    setup.phis.push_back(
        gaussian_measurement_matrix(cfg.m_per_node, cfg.tx_nodes, l, phi_rng));
  }
  setup.noise_seed = Rng::derive_seed(trial_seed, 16);
  return setup;
}

std::vector<TruthCell> snap_truth(const ExperimentConfig& cfg) {
  std::vector<TruthCell> out;
  for (std::size_t k = 0; k < cfg.targets.size(); ++k) {
    const TargetSpec& t = cfg.targets[k];
    const AxisSnap a = snap_axis(cfg.angle_deg_axis, t.angle_deg);
    const AxisSnap v = snap_axis(cfg.velocity_mps_axis, t.velocity_mps);
    const AxisSnap r = snap_axis(cfg.range_m_axis, t.range_m);
    TruthCell cell;
    cell.target_index = k;
    cell.cell = {a.index, v.index, r.index};
    cell.snap_error = {a.error, v.error, r.error};
    cell.on_grid = a.on_axis && v.on_axis && r.on_axis;
    out.push_back(cell);
  }
  return out;
}

std::optional<std::array<std::size_t, 3>> grid_cell_of(
    const ExperimentConfig& cfg, const GridPoint& p) {
  const AxisSnap a = snap_axis(cfg.angle_deg_axis, rad_to_deg(p.angle));
  const AxisSnap v = snap_axis(cfg.velocity_mps_axis, p.velocity);
  const AxisSnap r = snap_axis(cfg.range_m_axis, p.range);
  if (!a.on_axis || !v.on_axis || !r.on_axis) return std::nullopt;
  return std::array<std::size_t, 3>{a.index, v.index, r.index};
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial_index) {
  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.seed = Rng::derive_seed(cfg.master_seed, trial_index);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const TrialSetup setup = make_trial_setup(cfg, rec.seed);
    EstimationContext ctx;
    ctx.scenario = &setup.scenario;
    ctx.schedule = &setup.schedule;
    ctx.waveform = &setup.waveform;
    ctx.phis = &setup.phis;
    ctx.noise_seed = setup.noise_seed;

    const std::vector<double> angle_axis = to_rad(cfg.angle_deg_axis.values());
    const std::vector<double> velocity_axis = cfg.velocity_mps_axis.values();
    const std::vector<double> range_axis = cfg.range_m_axis.values();

    EstimateSet est;
    if (cfg.estimator_mode == EstimatorMode::kJoint) {
      std::vector<std::size_t> pulses(cfg.pulse_count);
      for (std::size_t m = 0; m < pulses.size(); ++m) pulses[m] = m;
      const CVec fused =
          synthesize_fused(setup.scenario, setup.schedule, setup.waveform,
                           setup.phis, pulses, setup.noise_seed);
      const ParamGrid grid =
          ParamGrid::full3d(angle_axis, velocity_axis, range_axis);
      est = estimate_joint(ctx, fused, grid, joint_stage_config(cfg));
    } else {
      est = estimate_decoupled(ctx, angle_axis, velocity_axis, range_axis,
                               cfg.decoupled_config());
    }
    rec.detections = est.triples;
    rec.stage_angles = est.angles;
    rec.stage_pairs = est.pairs;
    rec.stages = est.diagnostics;
    rec.stage_a = est.stage_a;
    rec.stage_b = est.stage_b;
    rec.stage_c = est.stage_c;
    rec.success = true;
  } catch (const std::exception& e) {
    rec.success = false;
    rec.error = e.what();
  }
  rec.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  result.truth = snap_truth(cfg);
  for (const auto& t : result.truth) {
    if (!t.on_grid) {
      std::cerr << "warning: target " << t.target_index
                << " is off-grid; snapped with distance (" << t.snap_error[0]
                << " deg, " << t.snap_error[1] << " m/s, " << t.snap_error[2]
                << " m)\n";
    }
  }
  result.trials.resize(cfg.trials);

  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      result.trials[i] = run_trial(cfg, i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cfg.trials) return;
        result.trials[i] = run_trial(cfg, i);
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  OccurrenceMap& occ = result.occurrences;
  occ.angle_deg_axis = cfg.angle_deg_axis.values();
  occ.velocity_mps_axis = cfg.velocity_mps_axis.values();
  occ.range_m_axis = cfg.range_m_axis.values();
  occ.counts.assign(
      occ.angle_deg_axis.size() * occ.velocity_mps_axis.size() *
          occ.range_m_axis.size(),
      0);
  occ.truth_marks.assign(occ.counts.size(), false);
  for (const auto& t : result.truth) {
    occ.truth_marks[occ.index(t.cell[0], t.cell[1], t.cell[2])] = true;
  }
  for (const auto& rec : result.trials) {
    if (rec.success) ++result.successes;
    for (const auto& det : rec.detections) {
      if (const auto cell = grid_cell_of(cfg, det)) {
        ++occ.counts[occ.index((*cell)[0], (*cell)[1], (*cell)[2])];
      } else {
        ++occ.off_grid;
      }
    }
  }
  if (result.successes == 0 && cfg.trials > 0) {
    throw std::runtime_error("all trials failed; first error: " +
                             result.trials.front().error);
  }

  if (cfg.estimator_mode == EstimatorMode::kDecoupled) {
    std::size_t a = 0, b = 0, c = 0;
    for (const auto& rec : result.trials) {
      if (!rec.success) continue;
      a = std::max(a, rec.stage_a);
      b = std::max(b, rec.stage_b);
      c = std::max(c, rec.stage_c);
    }
    if (a > 0 && b > 0 && c > 0) {
      result.complexity = decoupled_complexity(
          cfg.angle_deg_axis.count, cfg.velocity_mps_axis.count,
          cfg.range_m_axis.count, a, b, c);
    }
  }
  return result;
}

void emit_results(const ExperimentResult& result, const std::string& out_dir) {
  std::string dir = out_dir;
  if (const char* env = std::getenv("SFRADAR_OUTPUT_DIR")) {
    if (*env != '\0') dir = env;
  }
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);

  save_config(result.config, (base / "manifest.cfg").string());

  {
    std::ofstream tsv(base / "heatmap.tsv");
    if (!tsv) throw std::runtime_error("cannot write heatmap.tsv");
    tsv.precision(12);
    tsv << "angle_deg\tvelocity_mps\trange_m\tcount\ttruth\n";
    const OccurrenceMap& occ = result.occurrences;
    for (std::size_t ia = 0; ia < occ.angle_deg_axis.size(); ++ia) {
      for (std::size_t iv = 0; iv < occ.velocity_mps_axis.size(); ++iv) {
        for (std::size_t ir = 0; ir < occ.range_m_axis.size(); ++ir) {
          const std::size_t idx = occ.index(ia, iv, ir);
          tsv << occ.angle_deg_axis[ia] << '\t' << occ.velocity_mps_axis[iv]
              << '\t' << occ.range_m_axis[ir] << '\t' << occ.counts[idx]
              << '\t' << (occ.truth_marks[idx] ? 1 : 0) << '\n';
        }
      }
    }
  }

  {
    std::ofstream jl(base / "trials.jsonl");
    if (!jl) throw std::runtime_error("cannot write trials.jsonl");
    for (const auto& rec : result.trials) {
      json j{{"trial", rec.trial_index},
             {"seed", rec.seed},
             {"success", rec.success},
             {"elapsed_s", rec.elapsed_s}};
      if (!rec.success) j["error"] = rec.error;
      json dets = json::array();
      for (const auto& d : rec.detections) {
        dets.push_back(json{{"angle_deg", rad_to_deg(d.angle)},
                            {"velocity_mps", d.velocity},
                            {"range_m", d.range}});
      }
      j["detections"] = dets;
      json stages = json::array();
      for (const auto& s : rec.stages) stages.push_back(stage_json(s));
      j["stages"] = stages;
      if (!rec.stage_angles.empty()) {
        json angles = json::array();
        for (const double a : rec.stage_angles) angles.push_back(rad_to_deg(a));
        j["stage_angles_deg"] = angles;
        json pairs = json::array();
        for (const auto& p : rec.stage_pairs) {
          pairs.push_back(json{{"angle_deg", rad_to_deg(p.angle)},
                               {"velocity_mps", p.velocity}});
        }
        j["stage_pairs"] = pairs;
      }
      if (rec.stage_a + rec.stage_b + rec.stage_c > 0) {
        j["stage_sizes"] = json{{"a", rec.stage_a},
                                {"b", rec.stage_b},
                                {"c", rec.stage_c}};
      }
      jl << j.dump() << '\n';
    }
  }

  {
    json truth = json::array();
    for (const auto& t : result.truth) {
      truth.push_back(json{{"target", t.target_index},
                           {"cell", t.cell},
                           {"snap_error", t.snap_error},
                           {"on_grid", t.on_grid}});
    }
    json summary{{"trials", result.trials.size()},
                 {"successes", result.successes},
                 {"off_grid_detections", result.occurrences.off_grid},
                 {"truth", truth}};
    if (result.complexity) {
      summary["complexity"] = json{{"joint_cost", result.complexity->joint_cost},
                                   {"decoupled_cost", result.complexity->decoupled_cost},
                                   {"ratio", result.complexity->ratio}};
    }
    std::ofstream sj(base / "summary.json");
    if (!sj) throw std::runtime_error("cannot write summary.json");
    sj << summary.dump(2) << '\n';
  }
}

}  // namespace sfr
