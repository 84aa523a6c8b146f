#pragma once

#include <cstdint>
#include <vector>

#include "sfradar/linalg.hpp"
#include "sfradar/scene.hpp"
#include "sfradar/waveform.hpp"

namespace sfr {

/// Compression matrix Phi_l for one receive node: M x Mt i.i.d. zero-mean
/// Gaussian entries with variance 1/M.
struct MeasurementMatrix {
  CMat entries;  // M x Mt
  std::size_t rx_index = 0;

  std::size_t compressed_size() const { return entries.rows(); }
};

/// Compressed baseband samples for one (receive node, pulse) pair.
struct PulseMeasurement {
  std::size_t rx_index = 0;
  std::size_t pulse_index = 0;
  CVec samples;  // length M
};

MeasurementMatrix gaussian_measurement_matrix(std::size_t m,
                                              std::size_t tx_count,
                                              std::size_t rx_index, Rng& rng);

/// Diagonal of D(fd): e^{j 2 pi fd l Ts}, l = 0..L-1.
CVec doppler_diag(double doppler_hz, std::size_t samples_per_pulse,
                  double symbol_interval_s);

/// Transmit steering vector at carrier f_m: entry i = e^{j 2 pi f_m eta_i / c}.
CVec steering_vector(double carrier_hz, const std::vector<PolarNode>& tx_nodes,
                     double theta);

/// True when the slow-target condition f_mk * Ts * L < 0.1 holds for all
/// targets and pulses.
bool slow_target_regime_ok(const Scenario& scenario, const PulseSchedule& schedule,
                           const WaveformMatrix& waveform);

/// Synthesizes the compressed samples of receive node l during pulse m
/// (both 0-based). Noise and jammer waveforms are drawn from substreams of
/// `noise_seed` keyed on (kind, index, pulse), so any (l, m) order of calls
/// reproduces the same data and the jammer waveform is common to all
/// receivers. Emits a warning to stderr (once per process) when the
/// slow-target advisory fails.
PulseMeasurement synthesize_pulse(const Scenario& scenario,
                                  const PulseSchedule& schedule,
                                  const WaveformMatrix& waveform,
                                  const MeasurementMatrix& phi, std::size_t l,
                                  std::size_t m, std::uint64_t noise_seed);

/// Fuses all (l, m) pulse measurements for the given pulse subset in
/// receiver-major order: (l=0, m=pulses[0]), ..., (l=0, m=pulses.back()),
/// (l=1, ...), ...
CVec synthesize_fused(const Scenario& scenario, const PulseSchedule& schedule,
                      const WaveformMatrix& waveform,
                      const std::vector<MeasurementMatrix>& phis,
                      const std::vector<std::size_t>& pulses,
                      std::uint64_t noise_seed);

/// e^{j 2 pi cycles} with argument reduction.
cd unit_phasor(double cycles);

}  // namespace sfr
