#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sfradar/rng.hpp"

namespace sfr {

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s, exact by convention
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Node position in polar coordinates (radius in meters, azimuth in
/// radians, normalized to [0, 2pi)).
struct PolarNode {
  double radius = 0.0;
  double azimuth = 0.0;
};

/// Point target with constant radial speed.
struct Target {
  double azimuth = 0.0;        // radians
  double radial_speed = 0.0;   // m/s
  double initial_range = 0.0;  // meters, > 0
  std::complex<double> reflection{1.0, 0.0};
};

/// Stationary jammer emitting an unknown Gaussian waveform.
struct Jammer {
  double range = 0.0;      // meters
  double azimuth = 0.0;    // radians
  double amplitude = 0.0;  // >= 0, relative to transmit-waveform amplitude
};

/// Network geometry, targets, jammers and noise level; the ground truth
/// for a simulation run. Immutable after construction by convention.
struct Scenario {
  std::vector<PolarNode> tx_nodes;
  std::vector<PolarNode> rx_nodes;
  std::vector<Target> targets;
  std::vector<Jammer> jammers;
  double noise_power = 0.0;  // sigma^2, per fast-time sample
  double carrier_hz = 0.0;   // base carrier f
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument if node counts are zero, a target is
  /// closer than far_field_factor times the largest node radius, or any
  /// field is out of domain.
  void validate(double far_field_factor = 100.0) const;

  double max_node_radius() const;
};

/// Phase-projection term r cos(theta - alpha) of the far-field model.
double eta(const PolarNode& node, double theta);

/// Places `count` nodes uniformly by area over a disk of the given radius.
/// Deterministic given the rng state. Rejects count = 0 and radius <= 0.
std::vector<PolarNode> place_nodes_uniform_disk(std::size_t count,
                                                double disk_radius, Rng& rng);

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace sfr
