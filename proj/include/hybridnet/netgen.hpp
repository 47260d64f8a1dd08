#pragma once
// Network realization: node placement, base-station grid, antenna layout,
// source-destination pairing, and geometry measurement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hybridnet/common.hpp"
#include "hybridnet/config.hpp"

namespace hybridnet {

struct NetworkInstance {
  NetworkConfig config;
  double area_side = 1.0;
  std::uint64_t m = 1;                  // coerced BS count (perfect square)
  std::uint64_t l = 1;                  // antennas per BS
  std::uint64_t grid_dim = 1;           // sqrt(m)
  double cell_side = 1.0;
  double bs_radius = 0.0;
  std::uint64_t boundary_antennas = 0;  // per BS: min(l, boundary_capacity)
  std::vector<Vec2> nodes;              // size n
  std::vector<std::uint32_t> cell_index;  // BS cell per node
  std::vector<Vec2> bs_centers;         // size m, row-major cell order
  std::vector<Vec2> antennas;           // size m*l; antenna (s,t) at s*l+t
  std::vector<std::uint32_t> pairing;   // destination node of source i
};

// Cell of a point, clamped to the grid; cells are indexed cy*grid_dim + cx.
inline std::uint32_t cell_of(const NetworkInstance& net, const Vec2& p) {
  const auto clamp_dim = [&](double v) {
    auto c = static_cast<std::int64_t>(std::floor(v / net.cell_side));
    if (c < 0) c = 0;
    if (c >= static_cast<std::int64_t>(net.grid_dim)) c = static_cast<std::int64_t>(net.grid_dim) - 1;
    return static_cast<std::uint32_t>(c);
  };
  return clamp_dim(p.y) * static_cast<std::uint32_t>(net.grid_dim) + clamp_dim(p.x);
}

inline Vec2 antenna_position(const NetworkInstance& net, std::uint64_t bs, std::uint64_t t) {
  return net.antennas[bs * net.l + t];
}

// Nodes of each cell, grouped once for per-cell iteration.
inline std::vector<std::vector<std::uint32_t>> nodes_by_cell(const NetworkInstance& net) {
  std::vector<std::vector<std::uint32_t>> cells(net.m);
  for (std::uint32_t i = 0; i < net.nodes.size(); ++i) cells[net.cell_index[i]].push_back(i);
  return cells;
}

namespace detail {

// Uniform fixed-point-free permutation by rejection over uniform permutations.
inline std::vector<std::uint32_t> random_derangement(std::uint64_t n, Rng& rng) {
  std::vector<std::uint32_t> perm(n);
  if (n == 1) return perm;  // identity is the only option; allowed for n = 1
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    for (std::uint64_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
    for (std::uint64_t i = n - 1; i > 0; --i) {
      const std::size_t j = rng.index(i + 1);
      std::swap(perm[i], perm[j]);
    }
    bool fixed_point = false;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (perm[i] == i) {
        fixed_point = true;
        break;
      }
    }
    if (!fixed_point) return perm;
  }
  throw std::runtime_error("pairing: no derangement found");
}

}  // namespace detail

inline NetworkInstance generate_network(const NetworkConfig& config) {
  validate(config);
  NetworkInstance net;
  net.config = config;
  net.m = bs_count(config);
  net.l = antennas_per_bs(config);
  net.grid_dim = bs_grid_dim(config);
  net.area_side = area_side(config);
  net.cell_side = cell_side(config);
  net.bs_radius = hybridnet::bs_radius(config);
  net.boundary_antennas = std::min<std::uint64_t>(net.l, boundary_capacity(config));

  net.bs_centers.resize(net.m);
  for (std::uint64_t cy = 0; cy < net.grid_dim; ++cy)
    for (std::uint64_t cx = 0; cx < net.grid_dim; ++cx)
      net.bs_centers[cy * net.grid_dim + cx] = {(static_cast<double>(cx) + 0.5) * net.cell_side,
                                                (static_cast<double>(cy) + 0.5) * net.cell_side};

  // Antennas: the first boundary_antennas sit equally spaced on the boundary
  // circle; the remainder fall uniformly inside the disk.
  net.antennas.resize(net.m * net.l);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::uint64_t s = 0; s < net.m; ++s) {
    Rng rng(derive_seed(stream_seed(config.seed, Stream::antennas), s));
    const Vec2 c = net.bs_centers[s];
    for (std::uint64_t t = 0; t < net.l; ++t) {
      Vec2 p;
      if (t < net.boundary_antennas) {
        const double ang = two_pi * static_cast<double>(t) / static_cast<double>(net.boundary_antennas);
        p = {c.x + net.bs_radius * std::cos(ang), c.y + net.bs_radius * std::sin(ang)};
      } else {
        const double r = net.bs_radius * std::sqrt(rng.uniform());
        const double ang = two_pi * rng.uniform();
        p = {c.x + r * std::cos(ang), c.y + r * std::sin(ang)};
      }
      net.antennas[s * net.l + t] = p;
    }
  }

  // Nodes: uniform on the square, rejected while strictly inside any BS disk.
  // Disks are strictly inside cells, so only the owning cell's disk can cover
  // a sampled point.
  net.nodes.resize(config.n);
  net.cell_index.resize(config.n);
  {
    Rng rng(stream_seed(config.seed, Stream::nodes));
    const double r2 = net.bs_radius * net.bs_radius;
    const std::uint64_t max_attempts = 1000000ULL * config.n;
    std::uint64_t attempts = 0;
    for (std::uint64_t i = 0; i < config.n; ++i) {
      for (;;) {
        if (++attempts > max_attempts)
          throw std::runtime_error("generate_network: node rejection sampling exceeded attempt budget");
        const Vec2 p{rng.uniform(0.0, net.area_side), rng.uniform(0.0, net.area_side)};
        const std::uint32_t cell = cell_of(net, p);
        if (dist2(p, net.bs_centers[cell]) > r2) {
          net.nodes[i] = p;
          net.cell_index[i] = cell;
          break;
        }
      }
    }
  }

  {
    Rng rng(stream_seed(config.seed, Stream::pairing));
    net.pairing = detail::random_derangement(config.n, rng);
  }
  return net;
}

struct GeometryReport {
  std::vector<std::uint64_t> per_cell_counts;
  double min_node_distance = std::numeric_limits<double>::infinity();
  double min_node_antenna_distance = std::numeric_limits<double>::infinity();
};

namespace detail {

// Exact closest pair via bucket grid. A pass with bucket side s finds every
// pair at distance <= s among adjacent buckets; if the candidate minimum is
// <= s it is the true minimum, otherwise rerun with the candidate as side.
inline double closest_pair(const std::vector<Vec2>& pts, double extent) {
  const std::size_t n = pts.size();
  if (n < 2) return std::numeric_limits<double>::infinity();
  double side = extent / std::max(1.0, std::ceil(std::sqrt(static_cast<double>(n))));
  for (;;) {
    const auto dim = static_cast<std::size_t>(std::max(1.0, std::floor(extent / side)));
    const double bucket = extent / static_cast<double>(dim);
    std::vector<std::vector<std::uint32_t>> grid(dim * dim);
    const auto bucket_of = [&](const Vec2& p) {
      auto ix = static_cast<std::size_t>(std::min(p.x / bucket, static_cast<double>(dim - 1)));
      auto iy = static_cast<std::size_t>(std::min(p.y / bucket, static_cast<double>(dim - 1)));
      return iy * dim + ix;
    };
    for (std::uint32_t i = 0; i < n; ++i) grid[bucket_of(pts[i])].push_back(i);
    double best2 = std::numeric_limits<double>::infinity();
    for (std::size_t by = 0; by < dim; ++by) {
      for (std::size_t bx = 0; bx < dim; ++bx) {
        const auto& cell = grid[by * dim + bx];
        if (cell.empty()) continue;
        for (std::size_t ny = by; ny < std::min(by + 2, dim); ++ny) {
          for (std::size_t nx = (ny == by ? bx : (bx == 0 ? 0 : bx - 1));
               nx < std::min(bx + 2, dim); ++nx) {
            const auto& other = grid[ny * dim + nx];
            const bool same = (ny == by && nx == bx);
            for (std::size_t a = 0; a < cell.size(); ++a) {
              const std::size_t b0 = same ? a + 1 : 0;
              for (std::size_t b = b0; b < other.size(); ++b)
                best2 = std::min(best2, dist2(pts[cell[a]], pts[other[b]]));
            }
          }
        }
      }
    }
    const double best = std::sqrt(best2);
    if (best <= bucket || dim == 1) return best;
    side = std::isfinite(best) ? best : bucket * 2.0;
  }
}

}  // namespace detail

// Per-cell occupancy and exact minimum distances. The nearest antenna to any
// node belongs to a BS within one cell of the node's cell: the own-cell BS is
// within sqrt(2)/2 + epsilon0 <= 0.957 cell sides, while antennas two cells
// away are at least 1.5 - epsilon0 >= 1.25 cell sides away.
inline GeometryReport measure_geometry(const NetworkInstance& net) {
  GeometryReport rep;
  rep.per_cell_counts.assign(net.m, 0);
  for (const auto c : net.cell_index) ++rep.per_cell_counts[c];
  rep.min_node_distance = detail::closest_pair(net.nodes, net.area_side);

  const auto g = static_cast<std::int64_t>(net.grid_dim);
  double best2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const Vec2 p = net.nodes[i];
    const std::int64_t cx = net.cell_index[i] % net.grid_dim;
    const std::int64_t cy = net.cell_index[i] / net.grid_dim;
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        const std::int64_t nx = cx + dx, ny = cy + dy;
        if (nx < 0 || ny < 0 || nx >= g || ny >= g) continue;
        const std::uint64_t s = static_cast<std::uint64_t>(ny) * net.grid_dim +
                                static_cast<std::uint64_t>(nx);
        for (std::uint64_t t = 0; t < net.l; ++t)
          best2 = std::min(best2, dist2(p, net.antennas[s * net.l + t]));
      }
    }
  }
  rep.min_node_antenna_distance = std::sqrt(best2);
  return rep;
}

// Probability floor for every cell holding (1 +- delta0) n^(1-beta) nodes:
// 1 - n^beta exp(-Delta(delta0) n^(1-beta)), Delta(d) = (1+d)ln(1+d) - d.
// The value is negative (vacuous) when n is too small for the exponent to win.
inline double chernoff_bound(double delta0, std::uint64_t n, double beta) {
  if (!(delta0 > 0.0 && delta0 < 1.0))
    throw std::invalid_argument("chernoff_bound: delta0 must lie in (0, 1)");
  if (n < 1) throw std::invalid_argument("chernoff_bound: n must be >= 1");
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("chernoff_bound: beta must lie in [0,1)");
  const double nd = static_cast<double>(n);
  const double delta_fn = (1.0 + delta0) * std::log1p(delta0) - delta0;
  return 1.0 - std::pow(nd, beta) * std::exp(-delta_fn * std::pow(nd, 1.0 - beta));
}

// True when every cell count lies strictly inside ((1-delta0), (1+delta0))
// times the mean occupancy n/m.
inline bool occupancy_within(const GeometryReport& rep, std::uint64_t n, double delta0) {
  const double mean = static_cast<double>(n) / static_cast<double>(rep.per_cell_counts.size());
  for (const auto c : rep.per_cell_counts) {
    const double v = static_cast<double>(c);
    if (!(v > (1.0 - delta0) * mean && v < (1.0 + delta0) * mean)) return false;
  }
  return true;
}

}  // namespace hybridnet
