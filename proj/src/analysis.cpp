#include "sfradar/analysis.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sfradar/kernels/kernels.hpp"
#include "sfradar/synth.hpp"

namespace sfr {

namespace {

constexpr double kPhaseTol = 1e-6;
constexpr long kScanBound = 200000;

// Continued-fraction rational reconstruction of x with denominator bound.
// Returns false when no p/q matches within tol.
bool rationalize(double x, long max_den, double tol, long* p_out, long* q_out) {
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(v);
    const long ai = static_cast<long>(a);
    const long p2 = ai * p1 + p0;
    const long q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) {
      *p_out = p1;
      *q_out = q1;
      return true;
    }
    const double frac = v - a;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  return false;
}

bool phases_coincide(const PulseSchedule& sched, double delta, bool range_mode) {
  // range_mode: factors e^{-j 4 pi delta f_m / c}; else velocity factors
  // e^{j 4 pi delta f_m (m-1) T / c}. Coincidence = all factors equal.
  cd ref{0.0, 0.0};
  for (std::size_t m = 0; m < sched.pulse_count; ++m) {
    const double fm = sched.carrier_of(m);
    const double cycles =
        range_mode ? -2.0 * delta * fm / kSpeedOfLight
                   : 2.0 * delta * fm * static_cast<double>(m) *
                         sched.repetition_interval_s / kSpeedOfLight;
    const cd ph = unit_phasor(cycles);
    if (m == 0) {
      ref = ph;
    } else if (std::abs(ph - ref) > kPhaseTol) {
      return false;
    }
  }
  return true;
}

std::optional<double> coincidence_scan(const PulseSchedule& sched,
                                       bool range_mode) {
  // Candidate grid comes from the first pulse whose factor actually moves
  // with delta; coincidence for that pulse pins delta to its multiples.
  double unit = 0.0;
  if (range_mode) {
    const double f0 = sched.carrier_of(0);
    for (std::size_t m = 1; m < sched.pulse_count; ++m) {
      const double diff = std::abs(sched.carrier_of(m) - f0);
      if (diff > 0.0) {
        unit = kSpeedOfLight / (2.0 * diff);
        break;
      }
    }
  } else if (sched.pulse_count >= 2) {
    unit = kSpeedOfLight /
           (2.0 * sched.carrier_of(1) * sched.repetition_interval_s);
  }
  if (unit == 0.0) return std::nullopt;
  for (long k = 1; k <= kScanBound; ++k) {
    const double delta = unit * static_cast<double>(k);
    if (phases_coincide(sched, delta, range_mode)) return delta;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> unambiguous_range(const PulseSchedule& schedule,
                                        double* effective_scan) {
  if (effective_scan != nullptr) *effective_scan = 0.0;
  switch (schedule.mode) {
    case ScheduleMode::kConstant:
      return kSpeedOfLight * schedule.repetition_interval_s / 2.0;
    case ScheduleMode::kLinear: {
      const double df = schedule.steps[1] - schedule.steps[0];
      return kSpeedOfLight / (2.0 * schedule.base_carrier_hz * df);
    }
    case ScheduleMode::kRandom:
    case ScheduleMode::kHybrid: {
      if (effective_scan != nullptr) {
        if (const auto d = coincidence_scan(schedule, /*range_mode=*/true)) {
          *effective_scan = *d;
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<double> unambiguous_velocity(const PulseSchedule& schedule,
                                           double* effective_scan) {
  if (effective_scan != nullptr) *effective_scan = 0.0;
  if (schedule.pulse_count == 1) return std::nullopt;  // nothing to alias
  const double f = schedule.base_carrier_hz;
  const double t = schedule.repetition_interval_s;
  switch (schedule.mode) {
    case ScheduleMode::kConstant:
      return kSpeedOfLight / (2.0 * f * t);
    case ScheduleMode::kLinear: {
      // V_u = lcm{c / (2 f_m T)} with f_m = f (1 + (m-1) df). Writing
      // df = p/q, the per-pulse values are base / d_m with
      // base = c q / (2 f T) and d_m = q + (m-1) p, so the lcm is
      // base / gcd{d_m}.
      const double df = schedule.steps[1] - schedule.steps[0];
      long p = 0, q = 0;
      if (!rationalize(df, 1000000, 1e-9, &p, &q)) {
        return std::nullopt;  // no finite V_u below the rationalization bound
      }
      long g = 0;
      for (std::size_t m = 0; m < schedule.pulse_count; ++m) {
        const long dm = q + static_cast<long>(m) * p;
        g = std::gcd(g, dm);
      }
      return kSpeedOfLight * static_cast<double>(q) /
             (2.0 * f * t * static_cast<double>(g));
    }
    case ScheduleMode::kRandom:
    case ScheduleMode::kHybrid: {
      if (effective_scan != nullptr) {
        if (const auto d = coincidence_scan(schedule, /*range_mode=*/false)) {
          *effective_scan = *d;
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

AmbiguityReport ambiguity_report(const PulseSchedule& schedule) {
  AmbiguityReport rep;
  rep.mode = schedule.mode;
  double scan = 0.0;
  rep.unambiguous_range_m = unambiguous_range(schedule, &scan);
  if (scan > 0.0) rep.effective_range_scan_m = scan;
  scan = 0.0;
  rep.unambiguous_velocity_mps = unambiguous_velocity(schedule, &scan);
  if (scan > 0.0) rep.effective_velocity_scan_mps = scan;
  if (!rep.unambiguous_range_m || !rep.unambiguous_velocity_mps) {
    rep.notes =
        "unbounded values grow with the pulse count; effective_* fields hold "
        "the smallest numeric coincidence below the scan bound, if any";
  }
  return rep;
}

double h_metric(const std::vector<double>& steps, double alpha) {
  if (steps.empty()) throw std::invalid_argument("h_metric: need Np >= 1");
  cd sum{0.0, 0.0};
  for (std::size_t m = 0; m < steps.size(); ++m) {
    const double arg = alpha * (1.0 + steps[m]) * static_cast<double>(m);
    sum += cd{std::cos(arg), std::sin(arg)};
  }
  return std::abs(sum);
}

ResolutionReport check_sufficient_conditions(const std::vector<double>& steps,
                                             double alpha) {
  const std::size_t np = steps.size();
  if (np < 2)
    throw std::invalid_argument("check_sufficient_conditions: need Np >= 2");
  ResolutionReport rep;
  rep.alpha = alpha;
  rep.h_steps = h_metric(steps, alpha);
  rep.h_zero = h_metric(std::vector<double>(np, 0.0), alpha);

  rep.ratio_condition = true;
  for (std::size_t m = np / 2 + 1; m <= np; ++m) {  // 1-based pulse index
    const double num = steps[m - 1];
    const double den = steps[np - m];  // step_{Np+1-m}
    const double rhs = static_cast<double>(np - m) / static_cast<double>(m - 1);
    if (den == 0.0) {
      rep.ratio_condition = false;
      rep.diagnostics += "zero step in ratio denominator at m=" +
                         std::to_string(np + 1 - m) + "; ";
      break;
    }
    if (num / den < rhs) {
      rep.ratio_condition = false;
      rep.diagnostics += "ratio condition fails at m=" + std::to_string(m) + "; ";
      break;
    }
  }

  rep.sine_condition = true;
  for (std::size_t n = 1; n + 1 <= np; ++n) {
    if (!(std::sin(alpha * static_cast<double>(n)) > 0.0)) {
      rep.sine_condition = false;
      rep.diagnostics += "sin(alpha*" + std::to_string(n) + ") <= 0; ";
      break;
    }
  }
  rep.verdict = rep.ratio_condition && rep.sine_condition;
  return rep;
}

double column_correlation(const SensingMatrix& theta_l, std::size_t k,
                          std::size_t k_prime) {
  const CMat& m = theta_l.mat;
  if (k >= m.cols() || k_prime >= m.cols())
    throw std::out_of_range("column_correlation: column index out of range");
  CVec a(m.rows()), b(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    a[r] = m(r, k);
    b[r] = m(r, k_prime);
  }
  return std::abs(kernels::cdotc(a.data(), b.data(), m.rows()));
}

CVec inter_pulse_phase_sequence(double velocity, const PulseSchedule& schedule) {
  CVec seq(schedule.pulse_count);
  for (std::size_t m = 0; m < schedule.pulse_count; ++m) {
    seq[m] = unit_phasor(2.0 * velocity * schedule.carrier_of(m) *
                         static_cast<double>(m) * schedule.repetition_interval_s /
                         kSpeedOfLight);
  }
  return seq;
}

}  // namespace sfr
