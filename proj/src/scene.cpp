#include "sfradar/scene.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sfr {

double eta(const PolarNode& node, double theta) {
  return node.radius * std::cos(theta - node.azimuth);
}

std::vector<PolarNode> place_nodes_uniform_disk(std::size_t count,
                                                double disk_radius, Rng& rng) {
  if (count == 0) throw std::invalid_argument("node count must be >= 1");
  if (!(disk_radius > 0.0))
    throw std::invalid_argument("disk radius must be positive");
  std::vector<PolarNode> nodes;
  nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Area-uniform: r = R*sqrt(u).
    const double r = disk_radius * std::sqrt(rng.uniform());
    const double az = kTwoPi * rng.uniform();
    nodes.push_back(PolarNode{r, az});
  }
  return nodes;
}

double Scenario::max_node_radius() const {
  double m = 0.0;
  for (const auto& n : tx_nodes) m = std::max(m, n.radius);
  for (const auto& n : rx_nodes) m = std::max(m, n.radius);
  return m;
}

void Scenario::validate(double far_field_factor) const {
  if (tx_nodes.empty()) throw std::invalid_argument("need at least one tx node");
  if (rx_nodes.empty()) throw std::invalid_argument("need at least one rx node");
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("carrier must be positive");
  if (noise_power < 0.0) throw std::invalid_argument("noise power must be >= 0");
  const double rmax = max_node_radius();
  for (const auto& t : targets) {
    if (!(t.initial_range > 0.0))
      throw std::invalid_argument("target range must be positive");
    if (t.initial_range < far_field_factor * rmax) {
      throw std::invalid_argument(
          "far-field check failed: target at " + std::to_string(t.initial_range) +
          " m, need >= " + std::to_string(far_field_factor * rmax) + " m");
    }
  }
  for (const auto& j : jammers) {
    if (j.amplitude < 0.0)
      throw std::invalid_argument("jammer amplitude must be >= 0");
  }
}

}  // namespace sfr
