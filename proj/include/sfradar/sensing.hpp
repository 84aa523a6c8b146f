#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sfradar/linalg.hpp"
#include "sfradar/scene.hpp"
#include "sfradar/synth.hpp"
#include "sfradar/waveform.hpp"

namespace sfr {

/// One point of the discretized angle-velocity-range space.
struct GridPoint {
  double angle = 0.0;     // radians
  double velocity = 0.0;  // m/s
  double range = 0.0;     // meters
};

/// Discretized parameter grid. Active dimensions are swept over their
/// axis; inactive dimensions take their value from the anchor tuples the
/// grid is crossed with. Flat index order: anchor-major, then angle,
/// velocity, range (active axes only, in that nesting order).
class ParamGrid {
 public:
  static ParamGrid full3d(std::vector<double> angle_axis,
                          std::vector<double> velocity_axis,
                          std::vector<double> range_axis);
  static ParamGrid angle_only(std::vector<double> angle_axis,
                              double anchor_velocity = 0.0,
                              double anchor_range = 0.0);
  static ParamGrid velocity_only(std::vector<double> velocity_axis,
                                 std::vector<GridPoint> anchors);
  static ParamGrid range_only(std::vector<double> range_axis,
                              std::vector<GridPoint> anchors);

  std::size_t size() const;
  GridPoint point(std::size_t flat_index) const;

  /// Inverse of point(); throws std::out_of_range for off-grid tuples.
  std::size_t flat_index(const GridPoint& p) const;
  std::optional<std::size_t> try_flat_index(const GridPoint& p) const;

  bool angle_active() const { return angle_active_; }
  bool velocity_active() const { return velocity_active_; }
  bool range_active() const { return range_active_; }
  const std::vector<double>& angle_axis() const { return angle_axis_; }
  const std::vector<double>& velocity_axis() const { return velocity_axis_; }
  const std::vector<double>& range_axis() const { return range_axis_; }
  const std::vector<GridPoint>& anchors() const { return anchors_; }

 private:
  ParamGrid() = default;
  void validate() const;

  std::vector<double> angle_axis_{0.0};
  std::vector<double> velocity_axis_{0.0};
  std::vector<double> range_axis_{0.0};
  bool angle_active_ = false;
  bool velocity_active_ = false;
  bool range_active_ = false;
  std::vector<GridPoint> anchors_{GridPoint{}};
};

/// Stacked basis Theta over a parameter grid: rows are blocks of M
/// compressed samples ordered receiver-major, then pulse, matching the
/// fused measurement layout.
struct SensingMatrix {
  CMat mat;  // (Nr * |pulses| * M) x N
  ParamGrid grid = ParamGrid::full3d({0.0}, {0.0}, {0.0});
  std::vector<std::size_t> pulses;
  std::size_t rx_count = 0;
  std::size_t block_size = 0;  // M

  CVec apply(const CVec& s) const { return linalg::matvec(mat, s); }
  CVec apply_adjoint(const CVec& r) const { return linalg::adjoint_matvec(mat, r); }
};

/// Phase exponent q (in cycles) of one basis entry:
/// (-2c + eta_l^r(a)) f_m / c0 + 2 b f_m m T / c0, with m 0-based.
double basis_phase_cycles(const GridPoint& p, const PolarNode& rx_node,
                          double carrier_hz, std::size_t pulse_index,
                          double repetition_interval_s);

/// Single (l, m) block of the basis column for one grid point:
/// e^{j 2 pi q} Phi_l X^H D(2 b f_m / c) X v_m(a).
CVec basis_column(const GridPoint& p, std::size_t l, std::size_t m,
                  const Scenario& scenario, const PulseSchedule& schedule,
                  const WaveformMatrix& waveform, const MeasurementMatrix& phi);

/// Materializes Theta for the grid over the given pulse subset. Throws
/// std::length_error when rows*cols exceeds max_elements (memory guard).
SensingMatrix build_sensing_matrix(const ParamGrid& grid, const Scenario& scenario,
                                   const PulseSchedule& schedule,
                                   const WaveformMatrix& waveform,
                                   const std::vector<MeasurementMatrix>& phis,
                                   const std::vector<std::size_t>& pulses,
                                   std::size_t max_elements = std::size_t{1} << 27);

}  // namespace sfr
