#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfradar/estimator.hpp"
#include "sfradar/waveform.hpp"

namespace sfr {

struct TargetSpec {
  double angle_deg = 0.0;
  double velocity_mps = 0.0;
  double range_m = 0.0;
  double refl_re = 1.0;
  double refl_im = 0.0;

  bool operator==(const TargetSpec&) const = default;
};

struct JammerSpec {
  double angle_deg = 0.0;
  double range_m = 0.0;
  double amplitude = 0.0;

  bool operator==(const JammerSpec&) const = default;
};

struct AxisSpec {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 1;

  std::vector<double> values() const;

  bool operator==(const AxisSpec&) const = default;
};

enum class EstimatorMode { kJoint, kDecoupled };

/// Full experiment description; round-trips losslessly through the
/// key-value config format (see load/save below).
struct ExperimentConfig {
  // [scenario]
  std::size_t tx_nodes = 1;
  std::size_t rx_nodes = 1;
  double disk_radius_m = 10.0;
  double carrier_hz = 5.0e9;
  double snr_db = 0.0;
  double far_field_factor = 100.0;
  std::vector<TargetSpec> targets;
  std::vector<JammerSpec> jammers;

  // [schedule]
  ScheduleMode schedule_mode = ScheduleMode::kConstant;
  std::size_t pulse_count = 1;
  double pulse_interval_s = 2.5e-4;
  std::size_t constant_pulses = 0;  // hybrid
  double linear_step = 0.0;         // linear
  double step_min = 0.0;            // random / hybrid
  double step_max = 0.0;

  // [waveform]
  std::size_t samples_per_pulse = 64;
  double symbol_interval_s = 2.0e-7;

  // [measurement]
  std::size_t m_per_node = 1;

  // [grid]
  AxisSpec angle_deg_axis;
  AxisSpec velocity_mps_axis;
  AxisSpec range_m_axis;

  // [estimator]
  EstimatorMode estimator_mode = EstimatorMode::kJoint;
  SolverKind solver = SolverKind::kDantzig;
  double lambda_rel = 0.05;
  double detect_tau = 0.5;
  double step1_lambda_rel = -1.0;  // < 0 means "use lambda_rel"
  double step1_tau = -1.0;
  double step2_lambda_rel = -1.0;
  double step2_tau = -1.0;
  double step3_lambda_rel = -1.0;
  double step3_tau = -1.0;
  std::vector<std::size_t> step1_pulses;
  std::size_t max_iterations = 40000;

  // [run]
  std::size_t trials = 1;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  std::size_t workers = 1;

  bool operator==(const ExperimentConfig&) const = default;

  void validate() const;
  DecoupledConfig decoupled_config() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);
void save_config(const ExperimentConfig& cfg, const std::string& path);

}  // namespace sfr
