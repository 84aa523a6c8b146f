#include "sfradar/sensing.hpp"

#include <cmath>
#include <stdexcept>

#include "sfradar/kernels/kernels.hpp"

namespace sfr {

namespace {

bool strictly_increasing(const std::vector<double>& axis) {
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) return false;
  }
  return true;
}

std::optional<std::size_t> axis_lookup(const std::vector<double>& axis,
                                       double value) {
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double tol = 1e-9 * std::max(1.0, std::abs(axis[i]));
    if (std::abs(axis[i] - value) <= tol) return i;
  }
  return std::nullopt;
}

}  // namespace

ParamGrid ParamGrid::full3d(std::vector<double> angle_axis,
                            std::vector<double> velocity_axis,
                            std::vector<double> range_axis) {
  ParamGrid g;
  g.angle_axis_ = std::move(angle_axis);
  g.velocity_axis_ = std::move(velocity_axis);
  g.range_axis_ = std::move(range_axis);
  g.angle_active_ = g.velocity_active_ = g.range_active_ = true;
  g.anchors_ = {GridPoint{}};
  g.validate();
  return g;
}

ParamGrid ParamGrid::angle_only(std::vector<double> angle_axis,
                                double anchor_velocity, double anchor_range) {
  ParamGrid g;
  g.angle_axis_ = std::move(angle_axis);
  g.angle_active_ = true;
  g.anchors_ = {GridPoint{0.0, anchor_velocity, anchor_range}};
  g.validate();
  return g;
}

ParamGrid ParamGrid::velocity_only(std::vector<double> velocity_axis,
                                   std::vector<GridPoint> anchors) {
  ParamGrid g;
  g.velocity_axis_ = std::move(velocity_axis);
  g.velocity_active_ = true;
  g.anchors_ = std::move(anchors);
  g.validate();
  return g;
}

ParamGrid ParamGrid::range_only(std::vector<double> range_axis,
                                std::vector<GridPoint> anchors) {
  ParamGrid g;
  g.range_axis_ = std::move(range_axis);
  g.range_active_ = true;
  g.anchors_ = std::move(anchors);
  g.validate();
  return g;
}

void ParamGrid::validate() const {
  if (anchors_.empty()) throw std::invalid_argument("grid needs >= 1 anchor");
  if (angle_axis_.empty() || velocity_axis_.empty() || range_axis_.empty())
    throw std::invalid_argument("grid axes must be non-empty");
  if (!strictly_increasing(angle_axis_) || !strictly_increasing(velocity_axis_) ||
      !strictly_increasing(range_axis_)) {
    throw std::invalid_argument("grid axes must be strictly increasing");
  }
}

std::size_t ParamGrid::size() const {
  std::size_t n = anchors_.size();
  if (angle_active_) n *= angle_axis_.size();
  if (velocity_active_) n *= velocity_axis_.size();
  if (range_active_) n *= range_axis_.size();
  return n;
}

GridPoint ParamGrid::point(std::size_t flat_index) const {
  if (flat_index >= size()) throw std::out_of_range("grid index out of range");
  std::size_t rem = flat_index;
  std::size_t ri = 0, vi = 0, ai = 0;
  if (range_active_) {
    ri = rem % range_axis_.size();
    rem /= range_axis_.size();
  }
  if (velocity_active_) {
    vi = rem % velocity_axis_.size();
    rem /= velocity_axis_.size();
  }
  if (angle_active_) {
    ai = rem % angle_axis_.size();
    rem /= angle_axis_.size();
  }
  const GridPoint& anchor = anchors_[rem];
  GridPoint p = anchor;
  if (angle_active_) p.angle = angle_axis_[ai];
  if (velocity_active_) p.velocity = velocity_axis_[vi];
  if (range_active_) p.range = range_axis_[ri];
  return p;
}

std::optional<std::size_t> ParamGrid::try_flat_index(const GridPoint& p) const {
  // Locate active-axis indices first.
  std::size_t ai = 0, vi = 0, ri = 0;
  if (angle_active_) {
    const auto i = axis_lookup(angle_axis_, p.angle);
    if (!i) return std::nullopt;
    ai = *i;
  }
  if (velocity_active_) {
    const auto i = axis_lookup(velocity_axis_, p.velocity);
    if (!i) return std::nullopt;
    vi = *i;
  }
  if (range_active_) {
    const auto i = axis_lookup(range_axis_, p.range);
    if (!i) return std::nullopt;
    ri = *i;
  }
  // Anchor must match on every inactive dimension.
  for (std::size_t an = 0; an < anchors_.size(); ++an) {
    const GridPoint& a = anchors_[an];
    auto match = [](double x, double y) {
      return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y));
    };
    if (!angle_active_ && !match(p.angle, a.angle)) continue;
    if (!velocity_active_ && !match(p.velocity, a.velocity)) continue;
    if (!range_active_ && !match(p.range, a.range)) continue;
    std::size_t idx = an;
    if (angle_active_) idx = idx * angle_axis_.size() + ai;
    if (velocity_active_) idx = idx * velocity_axis_.size() + vi;
    if (range_active_) idx = idx * range_axis_.size() + ri;
    return idx;
  }
  return std::nullopt;
}

std::size_t ParamGrid::flat_index(const GridPoint& p) const {
  const auto i = try_flat_index(p);
  if (!i) throw std::out_of_range("point is not on the grid");
  return *i;
}

double basis_phase_cycles(const GridPoint& p, const PolarNode& rx_node,
                          double carrier_hz, std::size_t pulse_index,
                          double repetition_interval_s) {
  return (-2.0 * p.range + eta(rx_node, p.angle)) * carrier_hz / kSpeedOfLight +
         2.0 * p.velocity * carrier_hz * static_cast<double>(pulse_index) *
             repetition_interval_s / kSpeedOfLight;
}

namespace {

// X^H D(2 b f_m / c) X v_m(a); independent of the receiver index.
CVec modulated_waveform_response(const GridPoint& p, double carrier_hz,
                                 const Scenario& scenario,
                                 const WaveformMatrix& waveform) {
  const std::size_t L = waveform.samples_per_pulse();
  const std::size_t Mt = waveform.tx_count();
  const CVec v = steering_vector(carrier_hz, scenario.tx_nodes, p.angle);
  CVec u(L);
  for (std::size_t row = 0; row < L; ++row) {
    u[row] = kernels::cdotu(waveform.entries.row(row), v.data(), Mt);
  }
  const double fd = 2.0 * p.velocity * carrier_hz / kSpeedOfLight;
  const CVec d = doppler_diag(fd, L, waveform.symbol_interval_s);
  for (std::size_t row = 0; row < L; ++row) u[row] *= d[row];
  CVec w(Mt, cd{0.0, 0.0});
  for (std::size_t row = 0; row < L; ++row) {
    kernels::caxpy_conj(u[row], waveform.entries.row(row), w.data(), Mt);
  }
  return w;
}

}  // namespace

CVec basis_column(const GridPoint& p, std::size_t l, std::size_t m,
                  const Scenario& scenario, const PulseSchedule& schedule,
                  const WaveformMatrix& waveform, const MeasurementMatrix& phi) {
  if (l >= scenario.rx_nodes.size() || m >= schedule.pulse_count)
    throw std::out_of_range("basis_column: index out of range");
  if (phi.entries.cols() != waveform.tx_count())
    throw std::invalid_argument("basis_column: dimension mismatch");
  const double fm = schedule.carrier_of(m);
  const CVec w = modulated_waveform_response(p, fm, scenario, waveform);
  CVec col = linalg::matvec(phi.entries, w);
  const cd phase = unit_phasor(basis_phase_cycles(
      p, scenario.rx_nodes[l], fm, m, schedule.repetition_interval_s));
  for (auto& e : col) e *= phase;
  return col;
}

SensingMatrix build_sensing_matrix(const ParamGrid& grid, const Scenario& scenario,
                                   const PulseSchedule& schedule,
                                   const WaveformMatrix& waveform,
                                   const std::vector<MeasurementMatrix>& phis,
                                   const std::vector<std::size_t>& pulses,
                                   std::size_t max_elements) {
  if (pulses.empty()) throw std::invalid_argument("pulse subset must be non-empty");
  for (const std::size_t m : pulses) {
    if (m >= schedule.pulse_count)
      throw std::out_of_range("pulse subset index out of schedule range");
  }
  if (phis.size() != scenario.rx_nodes.size())
    throw std::invalid_argument("need one measurement matrix per receive node");
  const std::size_t n = grid.size();
  if (n == 0) throw std::invalid_argument("empty grid");
  const std::size_t block = phis.front().compressed_size();
  const std::size_t rows = phis.size() * pulses.size() * block;
  if (rows * n > max_elements) {
    throw std::length_error(
        "sensing matrix of " + std::to_string(rows) + " x " + std::to_string(n) +
        " exceeds the memory budget of " + std::to_string(max_elements) +
        " elements; use the decoupled estimator or a coarser grid");
  }

  SensingMatrix theta;
  theta.grid = grid;
  theta.pulses = pulses;
  theta.rx_count = phis.size();
  theta.block_size = block;
  theta.mat = CMat(rows, n);

  const double T = schedule.repetition_interval_s;
  for (std::size_t col = 0; col < n; ++col) {
    const GridPoint p = grid.point(col);
    for (std::size_t pi = 0; pi < pulses.size(); ++pi) {
      const std::size_t m = pulses[pi];
      const double fm = schedule.carrier_of(m);
      const CVec w = modulated_waveform_response(p, fm, scenario, waveform);
      for (std::size_t l = 0; l < phis.size(); ++l) {
        const CVec blockv = linalg::matvec(phis[l].entries, w);
        const cd phase =
            unit_phasor(basis_phase_cycles(p, scenario.rx_nodes[l], fm, m, T));
        const std::size_t row0 = (l * pulses.size() + pi) * block;
        for (std::size_t i = 0; i < block; ++i) {
          theta.mat(row0 + i, col) = phase * blockv[i];
        }
      }
    }
  }
  return theta;
}

}  // namespace sfr
