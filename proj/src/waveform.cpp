#include "sfradar/waveform.hpp"

#include <cmath>
#include <stdexcept>

#include "sfradar/kernels/kernels.hpp"
#include "sfradar/scene.hpp"

namespace sfr {

bool PulseSchedule::all_steps_equal() const {
  for (const double s : steps) {
    if (s != steps.front()) return false;
  }
  return true;
}

WaveformMatrix gen_orthogonal_qpsk(std::size_t samples_per_pulse,
                                   std::size_t tx_count, double symbol_interval_s,
                                   Rng& rng) {
  const std::size_t L = samples_per_pulse;
  const std::size_t Mt = tx_count;
  if (L < Mt) {
    throw std::invalid_argument(
        "samples per pulse must be >= tx count for orthonormal columns");
  }
  if (!(symbol_interval_s > 0.0))
    throw std::invalid_argument("symbol interval must be positive");

  CMat x(L, Mt);
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t i = 0; i < Mt; ++i) {
      const double phase = kPi / 4.0 + kPi / 2.0 * static_cast<double>(rng.uniform_index(4));
      x(l, i) = cd{scale * std::cos(phase), scale * std::sin(phase)};
    }
  }

  // Modified Gram-Schmidt on the columns, run twice for orthogonality at
  // machine precision. Work column-wise on a transposed copy.
  CMat xt(Mt, L);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t i = 0; i < Mt; ++i) xt(i, l) = x(l, i);

  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < Mt; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const cd proj = kernels::cdotc(xt.row(j), xt.row(i), L);
        kernels::caxpy(-proj, xt.row(j), xt.row(i), L);
      }
      const double nrm = std::sqrt(kernels::norm2sq(xt.row(i), L));
      if (nrm < 1e-12) {
        throw std::runtime_error("orthonormalization failed: rank-deficient draw");
      }
      for (std::size_t l = 0; l < L; ++l) xt(i, l) /= nrm;
    }
  }
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t i = 0; i < Mt; ++i) x(l, i) = xt(i, l);

  return WaveformMatrix{std::move(x), symbol_interval_s};
}

PulseSchedule make_schedule(ScheduleMode mode, std::size_t pulse_count,
                            double repetition_interval_s, double base_carrier_hz,
                            const ScheduleParams& params, Rng& rng) {
  if (pulse_count == 0) throw std::invalid_argument("pulse count must be >= 1");
  if (!(repetition_interval_s > 0.0))
    throw std::invalid_argument("repetition interval must be positive");
  if (!(base_carrier_hz > 0.0))
    throw std::invalid_argument("carrier must be positive");

  PulseSchedule sched;
  sched.mode = mode;
  sched.pulse_count = pulse_count;
  sched.repetition_interval_s = repetition_interval_s;
  sched.base_carrier_hz = base_carrier_hz;
  sched.steps.assign(pulse_count, 0.0);

  auto check_range = [&params]() {
    if (!(params.step_min > 0.0) || !(params.step_max < 1.0) ||
        !(params.step_min < params.step_max)) {
      throw std::invalid_argument(
          "random step range must satisfy 0 < step_min < step_max < 1");
    }
  };

  switch (mode) {
    case ScheduleMode::kConstant:
      sched.constant_pulses = pulse_count;
      break;
    case ScheduleMode::kLinear: {
      if (!(params.linear_delta > 0.0))
        throw std::invalid_argument("linear step delta must be positive");
      for (std::size_t m = 0; m < pulse_count; ++m) {
        sched.steps[m] = static_cast<double>(m) * params.linear_delta;
      }
      if (sched.steps.back() >= 1.0)
        throw std::invalid_argument("linear steps must stay below 1");
      sched.constant_pulses = 1;
      break;
    }
    case ScheduleMode::kRandom: {
      check_range();
      for (auto& s : sched.steps) s = rng.uniform(params.step_min, params.step_max);
      sched.constant_pulses = 0;
      break;
    }
    case ScheduleMode::kHybrid: {
      check_range();
      if (params.constant_pulses == 0 || params.constant_pulses >= pulse_count) {
        throw std::invalid_argument(
            "hybrid schedule needs 1 <= constant_pulses < pulse_count");
      }
      for (std::size_t m = params.constant_pulses; m < pulse_count; ++m) {
        sched.steps[m] = rng.uniform(params.step_min, params.step_max);
      }
      sched.constant_pulses = params.constant_pulses;
      break;
    }
  }
  return sched;
}

}  // namespace sfr
