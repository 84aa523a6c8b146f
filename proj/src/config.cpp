#include "sfradar/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sfr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct KvFile {
  // section -> list of (key, value), preserving repeated keys.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> data;

  std::string get(const std::string& sec, const std::string& key,
                  const std::string& fallback) const {
    const auto it = data.find(sec);
    if (it == data.end()) return fallback;
    for (const auto& [k, v] : it->second) {
      if (k == key) return v;
    }
    return fallback;
  }

  std::vector<std::string> all(const std::string& sec,
                               const std::string& key) const {
    std::vector<std::string> out;
    const auto it = data.find(sec);
    if (it == data.end()) return out;
    for (const auto& [k, v] : it->second) {
      if (k == key) out.push_back(v);
    }
    return out;
  }
};

KvFile parse_kv(const std::string& text) {
  KvFile kv;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      kv.data[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    kv.data[section].emplace_back(trim(line.substr(0, eq)),
                                  trim(line.substr(eq + 1)));
  }
  return kv;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("bad numeric value: " + s);
  }
  if (pos != s.size()) throw std::runtime_error("bad numeric value: " + s);
  return v;
}

std::size_t to_size(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("bad integer value: " + s);
  }
  if (pos != s.size()) throw std::runtime_error("bad integer value: " + s);
  if (v < 0) throw std::runtime_error("expected non-negative integer: " + s);
  return static_cast<std::size_t>(v);
}

std::vector<double> split_doubles(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

std::string mode_name(ScheduleMode m) {
  switch (m) {
    case ScheduleMode::kConstant: return "constant";
    case ScheduleMode::kLinear: return "linear";
    case ScheduleMode::kRandom: return "random";
    case ScheduleMode::kHybrid: return "hybrid";
  }
  return "constant";
}

ScheduleMode mode_from(const std::string& s) {
  if (s == "constant") return ScheduleMode::kConstant;
  if (s == "linear") return ScheduleMode::kLinear;
  if (s == "random") return ScheduleMode::kRandom;
  if (s == "hybrid") return ScheduleMode::kHybrid;
  throw std::runtime_error("unknown schedule mode: " + s);
}

}  // namespace

std::vector<double> AxisSpec::values() const {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = start + step * static_cast<double>(i);
  return v;
}

void ExperimentConfig::validate() const {
  if (tx_nodes == 0 || rx_nodes == 0)
    throw std::runtime_error("config: node counts must be >= 1");
  if (m_per_node == 0 || m_per_node > tx_nodes)
    throw std::runtime_error("config: need 1 <= m_per_node <= tx_nodes");
  if (samples_per_pulse < tx_nodes)
    throw std::runtime_error("config: samples_per_pulse must be >= tx_nodes");
  if (trials == 0) throw std::runtime_error("config: trials must be >= 1");
  if (angle_deg_axis.count == 0 || velocity_mps_axis.count == 0 ||
      range_m_axis.count == 0) {
    throw std::runtime_error("config: grid axes must be non-empty");
  }
  if (estimator_mode == EstimatorMode::kDecoupled) {
    if (schedule_mode != ScheduleMode::kHybrid)
      throw std::runtime_error("config: decoupled estimator needs a hybrid schedule");
  }
  if (schedule_mode == ScheduleMode::kHybrid &&
      (constant_pulses == 0 || constant_pulses >= pulse_count)) {
    throw std::runtime_error("config: hybrid needs 1 <= constant_pulses < pulse_count");
  }
}

DecoupledConfig ExperimentConfig::decoupled_config() const {
  DecoupledConfig d;
  d.constant_pulses = constant_pulses;
  d.stepped_pulses = pulse_count - constant_pulses;
  d.step1_pulses = step1_pulses;
  auto stage = [this](double lrel, double tau) {
    StageSolverConfig s;
    s.solver = solver;
    s.lambda_rel = lrel >= 0.0 ? lrel : lambda_rel;
    s.policy.kind = SupportPolicy::Kind::kRelativeThreshold;
    s.policy.tau = tau >= 0.0 ? tau : detect_tau;
    s.options.max_iterations = max_iterations;
    return s;
  };
  d.step1 = stage(step1_lambda_rel, step1_tau);
  d.step2 = stage(step2_lambda_rel, step2_tau);
  d.step3 = stage(step3_lambda_rel, step3_tau);
  return d;
}

ExperimentConfig parse_config(const std::string& text) {
  const KvFile kv = parse_kv(text);
  ExperimentConfig c;
  c.tx_nodes = to_size(kv.get("scenario", "tx_nodes", "1"));
  c.rx_nodes = to_size(kv.get("scenario", "rx_nodes", "1"));
  c.disk_radius_m = to_double(kv.get("scenario", "disk_radius_m", "10"));
  c.carrier_hz = to_double(kv.get("scenario", "carrier_hz", "5e9"));
  c.snr_db = to_double(kv.get("scenario", "snr_db", "0"));
  c.far_field_factor = to_double(kv.get("scenario", "far_field_factor", "100"));

  for (const auto& t : kv.all("targets", "target")) {
    const auto v = split_doubles(t);
    if (v.size() != 3 && v.size() != 5)
      throw std::runtime_error("target needs: angle_deg velocity_mps range_m "
                               "[refl_re refl_im]");
    TargetSpec ts{v[0], v[1], v[2], 1.0, 0.0};
    if (v.size() == 5) {
      ts.refl_re = v[3];
      ts.refl_im = v[4];
    }
    c.targets.push_back(ts);
  }
  for (const auto& j : kv.all("jammers", "jammer")) {
    const auto v = split_doubles(j);
    if (v.size() != 3)
      throw std::runtime_error("jammer needs: angle_deg range_m amplitude");
    c.jammers.push_back(JammerSpec{v[0], v[1], v[2]});
  }

  c.schedule_mode = mode_from(kv.get("schedule", "mode", "constant"));
  c.pulse_count = to_size(kv.get("schedule", "pulse_count", "1"));
  c.pulse_interval_s = to_double(kv.get("schedule", "pulse_interval_s", "2.5e-4"));
  c.constant_pulses = to_size(kv.get("schedule", "constant_pulses", "0"));
  c.linear_step = to_double(kv.get("schedule", "linear_step", "0"));
  c.step_min = to_double(kv.get("schedule", "step_min", "0"));
  c.step_max = to_double(kv.get("schedule", "step_max", "0"));

  c.samples_per_pulse = to_size(kv.get("waveform", "samples_per_pulse", "64"));
  c.symbol_interval_s = to_double(kv.get("waveform", "symbol_interval_s", "2e-7"));
  c.m_per_node = to_size(kv.get("measurement", "m_per_node", "1"));

  auto axis = [&kv](const std::string& prefix, const char* unit) {
    AxisSpec a;
    a.start = to_double(kv.get("grid", prefix + "_start_" + unit, "0"));
    a.step = to_double(kv.get("grid", prefix + "_step_" + unit, "1"));
    a.count = to_size(kv.get("grid", prefix + "_count", "1"));
    return a;
  };
  c.angle_deg_axis = axis("angle", "deg");
  c.velocity_mps_axis = axis("velocity", "mps");
  c.range_m_axis = axis("range", "m");

  const std::string emode = kv.get("estimator", "mode", "joint");
  if (emode == "joint") {
    c.estimator_mode = EstimatorMode::kJoint;
  } else if (emode == "decoupled") {
    c.estimator_mode = EstimatorMode::kDecoupled;
  } else {
    throw std::runtime_error("unknown estimator mode: " + emode);
  }
  const std::string solver = kv.get("estimator", "solver", "dantzig");
  if (solver == "dantzig") {
    c.solver = SolverKind::kDantzig;
  } else if (solver == "ista") {
    c.solver = SolverKind::kIsta;
  } else {
    throw std::runtime_error("unknown solver: " + solver);
  }
  c.lambda_rel = to_double(kv.get("estimator", "lambda_rel", "0.05"));
  c.detect_tau = to_double(kv.get("estimator", "detect_tau", "0.5"));
  c.step1_lambda_rel = to_double(kv.get("estimator", "step1_lambda_rel", "-1"));
  c.step1_tau = to_double(kv.get("estimator", "step1_tau", "-1"));
  c.step2_lambda_rel = to_double(kv.get("estimator", "step2_lambda_rel", "-1"));
  c.step2_tau = to_double(kv.get("estimator", "step2_tau", "-1"));
  c.step3_lambda_rel = to_double(kv.get("estimator", "step3_lambda_rel", "-1"));
  c.step3_tau = to_double(kv.get("estimator", "step3_tau", "-1"));
  for (const double p : split_doubles(kv.get("estimator", "step1_pulses", ""))) {
    c.step1_pulses.push_back(static_cast<std::size_t>(p));
  }
  c.max_iterations = to_size(kv.get("estimator", "max_iterations", "40000"));

  c.trials = to_size(kv.get("run", "trials", "1"));
  c.master_seed = static_cast<std::uint64_t>(
      std::stoull(kv.get("run", "master_seed", "1")));
  c.output_dir = kv.get("run", "output_dir", "out");
  c.workers = to_size(kv.get("run", "workers", "1"));
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o.precision(17);
  o << "[scenario]\n";
  o << "tx_nodes = " << c.tx_nodes << "\n";
  o << "rx_nodes = " << c.rx_nodes << "\n";
  o << "disk_radius_m = " << c.disk_radius_m << "\n";
  o << "carrier_hz = " << c.carrier_hz << "\n";
  o << "snr_db = " << c.snr_db << "\n";
  o << "far_field_factor = " << c.far_field_factor << "\n";
  o << "\n[targets]\n";
  for (const auto& t : c.targets) {
    o << "target = " << t.angle_deg << " " << t.velocity_mps << " " << t.range_m
      << " " << t.refl_re << " " << t.refl_im << "\n";
  }
  o << "\n[jammers]\n";
  for (const auto& j : c.jammers) {
    o << "jammer = " << j.angle_deg << " " << j.range_m << " " << j.amplitude
      << "\n";
  }
  o << "\n[schedule]\n";
  o << "mode = " << mode_name(c.schedule_mode) << "\n";
  o << "pulse_count = " << c.pulse_count << "\n";
  o << "pulse_interval_s = " << c.pulse_interval_s << "\n";
  o << "constant_pulses = " << c.constant_pulses << "\n";
  o << "linear_step = " << c.linear_step << "\n";
  o << "step_min = " << c.step_min << "\n";
  o << "step_max = " << c.step_max << "\n";
  o << "\n[waveform]\n";
  o << "samples_per_pulse = " << c.samples_per_pulse << "\n";
  o << "symbol_interval_s = " << c.symbol_interval_s << "\n";
  o << "\n[measurement]\n";
  o << "m_per_node = " << c.m_per_node << "\n";
  o << "\n[grid]\n";
  o << "angle_start_deg = " << c.angle_deg_axis.start << "\n";
  o << "angle_step_deg = " << c.angle_deg_axis.step << "\n";
  o << "angle_count = " << c.angle_deg_axis.count << "\n";
  o << "velocity_start_mps = " << c.velocity_mps_axis.start << "\n";
  o << "velocity_step_mps = " << c.velocity_mps_axis.step << "\n";
  o << "velocity_count = " << c.velocity_mps_axis.count << "\n";
  o << "range_start_m = " << c.range_m_axis.start << "\n";
  o << "range_step_m = " << c.range_m_axis.step << "\n";
  o << "range_count = " << c.range_m_axis.count << "\n";
  o << "\n[estimator]\n";
  o << "mode = " << (c.estimator_mode == EstimatorMode::kJoint ? "joint" : "decoupled") << "\n";
  o << "solver = " << (c.solver == SolverKind::kDantzig ? "dantzig" : "ista") << "\n";
  o << "lambda_rel = " << c.lambda_rel << "\n";
  o << "detect_tau = " << c.detect_tau << "\n";
  o << "step1_lambda_rel = " << c.step1_lambda_rel << "\n";
  o << "step1_tau = " << c.step1_tau << "\n";
  o << "step2_lambda_rel = " << c.step2_lambda_rel << "\n";
  o << "step2_tau = " << c.step2_tau << "\n";
  o << "step3_lambda_rel = " << c.step3_lambda_rel << "\n";
  o << "step3_tau = " << c.step3_tau << "\n";
  o << "step1_pulses =";
  for (const auto p : c.step1_pulses) o << " " << p;
  o << "\n";
  o << "max_iterations = " << c.max_iterations << "\n";
  o << "\n[run]\n";
  o << "trials = " << c.trials << "\n";
  o << "master_seed = " << c.master_seed << "\n";
  o << "output_dir = " << c.output_dir << "\n";
  o << "workers = " << c.workers << "\n";
  return o.str();
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << serialize_config(cfg);
}

}  // namespace sfr
