#pragma once
// Shared fixtures: compact configs and hand-forged instances whose exact
// distances make closed-form rate values checkable.

#include <hybridnet/channel.hpp>
#include <hybridnet/config.hpp>
#include <hybridnet/netgen.hpp>

#include <cstdint>
#include <vector>

namespace testsupport {

inline hybridnet::NetworkConfig make_config(std::uint64_t n, double alpha, double beta,
                                            double gamma,
                                            hybridnet::Geometry geometry,
                                            std::uint64_t seed) {
  hybridnet::NetworkConfig cfg;
  cfg.n = n;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.gamma = gamma;
  cfg.geometry = geometry;
  cfg.seed = seed;
  return cfg;
}

// Single node at the origin, single BS whose one antenna sits at (r, 0).
// Every derived scalar (m = l = 1, cell 0) is filled in by hand so channel
// and rate functions see exact unit geometry.
inline hybridnet::NetworkInstance make_pair_instance(double r, double alpha, double power,
                                                     double noise,
                                                     std::uint64_t seed = 99) {
  hybridnet::NetworkInstance net;
  net.config = make_config(1, alpha, 0.0, 0.0, hybridnet::Geometry::dense, seed);
  net.config.power = power;
  net.config.noise = noise;
  net.area_side = 1.0;
  net.m = 1;
  net.l = 1;
  net.grid_dim = 1;
  net.cell_side = 1.0;
  net.bs_radius = net.config.epsilon0;
  net.boundary_antennas = 1;
  net.nodes = {{0.0, 0.0}};
  net.cell_index = {0};
  net.bs_centers = {{0.5, 0.5}};
  net.antennas = {{r, 0.0}};
  net.pairing = {0};
  return net;
}

// m cells in a row-major g x g grid over side `extent`, l antennas per BS at
// caller-chosen positions, nodes at caller-chosen positions. cell_index is
// recomputed from the geometry.
inline hybridnet::NetworkInstance make_grid_instance(std::uint64_t g, double extent,
                                                     std::vector<hybridnet::Vec2> nodes,
                                                     std::vector<hybridnet::Vec2> antennas,
                                                     double alpha, double power, double noise,
                                                     std::uint64_t seed = 7) {
  hybridnet::NetworkInstance net;
  const std::uint64_t m = g * g;
  const std::uint64_t l = antennas.size() / m;
  net.config = make_config(nodes.size(), alpha, 0.0, 0.0, hybridnet::Geometry::extended, seed);
  net.config.power = power;
  net.config.noise = noise;
  net.area_side = extent;
  net.m = m;
  net.l = l;
  net.grid_dim = g;
  net.cell_side = extent / static_cast<double>(g);
  net.bs_radius = net.config.epsilon0 * net.cell_side;
  net.boundary_antennas = l;
  net.nodes = std::move(nodes);
  net.antennas = std::move(antennas);
  for (std::uint64_t c = 0; c < m; ++c) {
    const double cx = (static_cast<double>(c % g) + 0.5) * net.cell_side;
    const double cy = (static_cast<double>(c / g) + 0.5) * net.cell_side;
    net.bs_centers.push_back({cx, cy});
  }
  net.cell_index.reserve(net.nodes.size());
  for (const auto& p : net.nodes) net.cell_index.push_back(hybridnet::cell_of(net, p));
  net.pairing.resize(net.nodes.size());
  for (std::uint32_t i = 0; i < net.nodes.size(); ++i)
    net.pairing[i] = (i + 1) % static_cast<std::uint32_t>(net.nodes.size());
  if (net.nodes.size() == 1) net.pairing = {0};
  return net;
}

}  // namespace testsupport
