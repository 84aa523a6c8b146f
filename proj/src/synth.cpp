#include "sfradar/synth.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "sfradar/kernels/kernels.hpp"

namespace sfr {

namespace {

// Substream tags for noise_seed derivation.
constexpr std::uint64_t kThermalStream = 0x7E1;
constexpr std::uint64_t kJammerStream = 0x7A2;

std::atomic<bool> g_slow_target_warned{false};

// Phi_l * (X^H * u) for a fast-time vector u of length L.
CVec compress(const MeasurementMatrix& phi, const WaveformMatrix& wf,
              const CVec& u) {
  const std::size_t L = wf.samples_per_pulse();
  const std::size_t Mt = wf.tx_count();
  CVec w(Mt, cd{0.0, 0.0});
  for (std::size_t l = 0; l < L; ++l) {
    // w_i += conj(X_li) u_l
    kernels::caxpy_conj(u[l], wf.entries.row(l), w.data(), Mt);
  }
  return linalg::matvec(phi.entries, w);
}

}  // namespace

cd unit_phasor(double cycles) {
  const double frac = std::remainder(cycles, 1.0);
  return {std::cos(kTwoPi * frac), std::sin(kTwoPi * frac)};
}

MeasurementMatrix gaussian_measurement_matrix(std::size_t m,
                                              std::size_t tx_count,
                                              std::size_t rx_index, Rng& rng) {
  if (m == 0 || tx_count == 0)
    throw std::invalid_argument("measurement matrix dimensions must be >= 1");
  if (m > tx_count)
    throw std::invalid_argument("compression size M must satisfy M <= Mt");
  MeasurementMatrix phi;
  phi.rx_index = rx_index;
  phi.entries = CMat(m, tx_count);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < tx_count; ++c) {
      phi.entries(r, c) = cd{sigma * rng.normal(), 0.0};
    }
  }
  return phi;
}

CVec doppler_diag(double doppler_hz, std::size_t samples_per_pulse,
                  double symbol_interval_s) {
  if (samples_per_pulse == 0)
    throw std::invalid_argument("samples_per_pulse must be >= 1");
  CVec d(samples_per_pulse);
  for (std::size_t l = 0; l < samples_per_pulse; ++l) {
    d[l] = unit_phasor(doppler_hz * static_cast<double>(l) * symbol_interval_s);
  }
  return d;
}

CVec steering_vector(double carrier_hz, const std::vector<PolarNode>& tx_nodes,
                     double theta) {
  CVec v(tx_nodes.size());
  for (std::size_t i = 0; i < tx_nodes.size(); ++i) {
    v[i] = unit_phasor(carrier_hz * eta(tx_nodes[i], theta) / kSpeedOfLight);
  }
  return v;
}

bool slow_target_regime_ok(const Scenario& scenario, const PulseSchedule& schedule,
                           const WaveformMatrix& waveform) {
  const double pulse_duration =
      waveform.symbol_interval_s * static_cast<double>(waveform.samples_per_pulse());
  for (const auto& t : scenario.targets) {
    for (std::size_t m = 0; m < schedule.pulse_count; ++m) {
      const double fmk =
          2.0 * std::abs(t.radial_speed) * schedule.carrier_of(m) / kSpeedOfLight;
      if (fmk * pulse_duration >= 0.1) return false;
    }
  }
  return true;
}

PulseMeasurement synthesize_pulse(const Scenario& scenario,
                                  const PulseSchedule& schedule,
                                  const WaveformMatrix& waveform,
                                  const MeasurementMatrix& phi, std::size_t l,
                                  std::size_t m, std::uint64_t noise_seed) {
  if (l >= scenario.rx_nodes.size()) throw std::out_of_range("rx index out of range");
  if (m >= schedule.pulse_count) throw std::out_of_range("pulse index out of range");
  if (waveform.tx_count() != scenario.tx_nodes.size() ||
      phi.entries.cols() != scenario.tx_nodes.size()) {
    throw std::invalid_argument("waveform/measurement dimensions do not match scenario");
  }

  if (!slow_target_regime_ok(scenario, schedule, waveform) &&
      !g_slow_target_warned.exchange(true)) {
    std::cerr << "warning: slow-target advisory f_mk*Ts*L < 0.1 violated; "
                 "intra-pulse Doppler is not negligible\n";
  }

  const std::size_t L = waveform.samples_per_pulse();
  const std::size_t Mt = waveform.tx_count();
  const std::size_t M = phi.compressed_size();
  const double fm = schedule.carrier_of(m);
  const double T = schedule.repetition_interval_s;
  const PolarNode& rx = scenario.rx_nodes[l];

  PulseMeasurement out;
  out.rx_index = l;
  out.pulse_index = m;
  out.samples.assign(M, cd{0.0, 0.0});

  // Target returns. The range phase -2 d0 f_m / c is always kept explicit;
  // under a constant carrier it is an (l, m)-independent unit scalar, which
  // is exactly the absorbed-coefficient convention.
  for (const auto& tgt : scenario.targets) {
    const double fmk = 2.0 * tgt.radial_speed * fm / kSpeedOfLight;
    CVec u(L, cd{0.0, 0.0});
    const CVec v = steering_vector(fm, scenario.tx_nodes, tgt.azimuth);
    for (std::size_t row = 0; row < L; ++row) {
      u[row] = kernels::cdotu(waveform.entries.row(row), v.data(), Mt);
    }
    const CVec d = doppler_diag(fmk, L, waveform.symbol_interval_s);
    for (std::size_t row = 0; row < L; ++row) u[row] *= d[row];
    const CVec compressed = compress(phi, waveform, u);

    const double cycles =
        (-2.0 * tgt.initial_range + eta(rx, tgt.azimuth)) * fm / kSpeedOfLight +
        fmk * static_cast<double>(m) * T;
    const cd coeff = tgt.reflection * unit_phasor(cycles);
    kernels::caxpy(coeff, compressed.data(), out.samples.data(), M);
  }

  // Jammers: waveform x_jm is common to all receivers, drawn from a
  // substream keyed on (jammer, pulse). Per-sample power matches the
  // transmit-waveform normalization (1/L) so `amplitude` is relative.
  for (std::size_t j = 0; j < scenario.jammers.size(); ++j) {
    const Jammer& jam = scenario.jammers[j];
    Rng jrng(Rng::derive_seed(noise_seed, kJammerStream, j, m));
    CVec x(L);
    const double var = 1.0 / static_cast<double>(L);
    for (auto& e : x) e = jrng.cnormal(var);
    const CVec compressed = compress(phi, waveform, x);
    const double cycles =
        -(jam.range - eta(rx, jam.azimuth)) * fm / kSpeedOfLight;
    const cd coeff = jam.amplitude * unit_phasor(cycles);
    kernels::caxpy(coeff, compressed.data(), out.samples.data(), M);
  }

  // Thermal noise, power sigma^2 per fast-time sample.
  if (scenario.noise_power > 0.0) {
    Rng nrng(Rng::derive_seed(noise_seed, kThermalStream, l, m));
    CVec e(L);
    for (auto& s : e) s = nrng.cnormal(scenario.noise_power);
    const CVec compressed = compress(phi, waveform, e);
    kernels::caxpy(cd{1.0, 0.0}, compressed.data(), out.samples.data(), M);
  }

  return out;
}

CVec synthesize_fused(const Scenario& scenario, const PulseSchedule& schedule,
                      const WaveformMatrix& waveform,
                      const std::vector<MeasurementMatrix>& phis,
                      const std::vector<std::size_t>& pulses,
                      std::uint64_t noise_seed) {
  if (phis.size() != scenario.rx_nodes.size())
    throw std::invalid_argument("need one measurement matrix per receive node");
  if (pulses.empty()) throw std::invalid_argument("pulse subset must be non-empty");
  CVec fused;
  for (std::size_t l = 0; l < phis.size(); ++l) {
    for (const std::size_t m : pulses) {
      const PulseMeasurement pm =
          synthesize_pulse(scenario, schedule, waveform, phis[l], l, m, noise_seed);
      fused.insert(fused.end(), pm.samples.begin(), pm.samples.end());
    }
  }
  return fused;
}

}  // namespace sfr
