#pragma once

#include <cstddef>
#include <vector>

#include "sfradar/linalg.hpp"
#include "sfradar/rng.hpp"

namespace sfr {

/// L x Mt transmit waveform matrix X with orthonormal columns
/// (X^H X = I within 1e-10 in max absolute entry deviation).
struct WaveformMatrix {
  CMat entries;               // L rows (fast time) x Mt columns (transmitters)
  double symbol_interval_s;   // Ts

  std::size_t samples_per_pulse() const { return entries.rows(); }
  std::size_t tx_count() const { return entries.cols(); }
};

enum class ScheduleMode {
  kConstant,  // all steps zero
  kLinear,    // step_m = (m-1) * delta
  kRandom,    // step_m uniform on [step_min, step_max] subset of (0, 1)
  kHybrid,    // constant_pulses zeros followed by random steps
};

/// Pulse train description: repetition interval, base carrier and the
/// per-pulse fractional frequency steps {df_m}, carrier_m = f*(1 + df_m).
struct PulseSchedule {
  ScheduleMode mode = ScheduleMode::kConstant;
  std::size_t pulse_count = 0;     // Np
  double repetition_interval_s = 0.0;  // T
  double base_carrier_hz = 0.0;    // f
  std::vector<double> steps;       // length Np, each in [0, 1)
  std::size_t constant_pulses = 0; // leading zero-step pulses (hybrid)

  double carrier_of(std::size_t m) const {  // m is 0-based
    return base_carrier_hz * (1.0 + steps.at(m));
  }
  bool all_steps_equal() const;
};

struct ScheduleParams {
  double linear_delta = 0.0;  // linear mode
  double step_min = 0.0;      // random/hybrid mode
  double step_max = 0.0;
  std::size_t constant_pulses = 0;  // hybrid mode: leading constant block
};

/// Draws an L x Mt matrix of QPSK symbols (phases pi/4 + k*pi/2, scaled by
/// 1/sqrt(L)) and re-orthonormalizes the columns so X^H X = I to working
/// precision. Rejects L < Mt.
WaveformMatrix gen_orthogonal_qpsk(std::size_t samples_per_pulse,
                                   std::size_t tx_count, double symbol_interval_s,
                                   Rng& rng);

/// Builds the step schedule for the given mode. Random draws are
/// deterministic given the rng state. Rejects invalid step ranges.
PulseSchedule make_schedule(ScheduleMode mode, std::size_t pulse_count,
                            double repetition_interval_s, double base_carrier_hz,
                            const ScheduleParams& params, Rng& rng);

}  // namespace sfr
