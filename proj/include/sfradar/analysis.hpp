#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfradar/sensing.hpp"
#include "sfradar/waveform.hpp"

namespace sfr {

/// Unambiguous range / velocity for a schedule. A missing value means the
/// ambiguity interval is unbounded (grows without limit as the pulse count
/// increases); `effective_*` then carries the smallest numeric coincidence
/// found by a bounded phase scan, when one exists below the search bound.
struct AmbiguityReport {
  std::optional<double> unambiguous_range_m;      // R_u
  std::optional<double> unambiguous_velocity_mps; // V_u
  std::optional<double> effective_range_scan_m;
  std::optional<double> effective_velocity_scan_mps;
  ScheduleMode mode = ScheduleMode::kConstant;
  std::string notes;
};

struct ResolutionReport {
  double alpha = 0.0;   // 4 pi db T f / c
  double h_steps = 0.0; // h(steps)
  double h_zero = 0.0;  // h(0)
  bool ratio_condition = false;
  bool sine_condition = false;
  bool verdict = false;
  std::string diagnostics;
  std::vector<double> correlation_samples;  // p_kk' / p_kk ratios, when sampled
};

AmbiguityReport ambiguity_report(const PulseSchedule& schedule);

/// R_u: constant -> cT/2; linear -> c/(2 f df); random -> unbounded marker
/// with a numeric effective estimate from a phase-coincidence scan.
std::optional<double> unambiguous_range(const PulseSchedule& schedule,
                                        double* effective_scan = nullptr);

/// V_u: constant -> c/(2 f T); linear -> least common multiple of the
/// per-pulse values c/(2 f_m T) via rational reconstruction of the step;
/// random -> unbounded marker plus scan estimate. A single pulse has no
/// inter-pulse phase to alias, hence no finite V_u.
std::optional<double> unambiguous_velocity(const PulseSchedule& schedule,
                                           double* effective_scan = nullptr);

/// h(steps; alpha) = |sum_m e^{j alpha (1 + step_m) (m - 1)}|, m = 1..Np.
double h_metric(const std::vector<double>& steps, double alpha);

/// Sufficient conditions for h(steps) < h(0):
///   step_m / step_{Np+1-m} >= (Np - m)/(m - 1) for m > floor(Np/2), and
///   sin(alpha n) > 0 for n = 1..Np-1.
/// Evaluated exactly as stated; a zero denominator in a ratio marks the
/// ratio condition violated with a diagnostic.
ResolutionReport check_sufficient_conditions(const std::vector<double>& steps,
                                             double alpha);

/// |<g_k, g_k'>| from the actual stacked single-receiver columns.
double column_correlation(const SensingMatrix& theta_l, std::size_t k,
                          std::size_t k_prime);

/// Inter-pulse phase factors e^{j 2 pi * 2 v f_m (m-1) T / c} for
/// m = 1..Np. Velocities v and v + V_u produce identical sequences under a
/// constant schedule (the aliasing identity).
CVec inter_pulse_phase_sequence(double velocity, const PulseSchedule& schedule);

}  // namespace sfr
