#pragma once
// Multihop plumbing shared by the routed schemes: a global routing grid of
// side sqrt(2 * max(1, log2 n)) anchored at the origin, per-cell relay nodes,
// L-shaped (horizontal, then vertical) cell paths, and a 9-slot TDMA reuse
// pattern. Hop rates are log2(1+SINR) with interference summed over
// same-color cells that are active in the phase.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hybridnet/channel.hpp"
#include "hybridnet/common.hpp"
#include "hybridnet/netgen.hpp"

namespace hybridnet {

struct RoutingGrid {
  double side = 0.0;
  std::uint32_t dim = 0;
  std::vector<std::uint32_t> color;                 // (cx%3) + 3*(cy%3)
  std::vector<std::int64_t> relay;                  // node nearest cell center, -1 if empty
  std::vector<std::vector<std::uint32_t>> members;  // node indices per cell
};

inline std::uint32_t routing_cell_of(const RoutingGrid& grid, Vec2 p) {
  const auto clampi = [&](double v) {
    const auto idx = static_cast<std::int64_t>(std::floor(v / grid.side));
    return static_cast<std::uint32_t>(
        std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(grid.dim) - 1));
  };
  return clampi(p.y) * grid.dim + clampi(p.x);
}

inline RoutingGrid build_routing_grid(const NetworkInstance& net) {
  RoutingGrid grid;
  const double lg = std::max(1.0, std::log2(static_cast<double>(net.config.n)));
  grid.side = std::sqrt(2.0 * lg);
  grid.dim = static_cast<std::uint32_t>(std::max<double>(1.0, std::ceil(net.area_side / grid.side)));
  const std::size_t cells = static_cast<std::size_t>(grid.dim) * grid.dim;
  grid.color.resize(cells);
  grid.relay.assign(cells, -1);
  grid.members.assign(cells, {});
  for (std::uint32_t cy = 0; cy < grid.dim; ++cy)
    for (std::uint32_t cx = 0; cx < grid.dim; ++cx)
      grid.color[static_cast<std::size_t>(cy) * grid.dim + cx] = (cx % 3) + 3 * (cy % 3);
  for (std::uint32_t i = 0; i < net.nodes.size(); ++i)
    grid.members[routing_cell_of(grid, net.nodes[i])].push_back(i);
  for (std::size_t c = 0; c < cells; ++c) {
    const Vec2 center{(static_cast<double>(c % grid.dim) + 0.5) * grid.side,
                      (static_cast<double>(c / grid.dim) + 0.5) * grid.side};
    double best = 0.0;
    for (const std::uint32_t i : grid.members[c]) {
      const double q = dist2(net.nodes[i], center);
      if (grid.relay[c] < 0 || q < best) {
        grid.relay[c] = i;
        best = q;
      }
    }
  }
  return grid;
}

// Cells visited walking horizontally to the target column, then vertically;
// includes both endpoints.
inline std::vector<std::uint32_t> l_path(const RoutingGrid& grid, std::uint32_t from,
                                         std::uint32_t to) {
  if (from >= grid.dim * grid.dim || to >= grid.dim * grid.dim)
    throw std::invalid_argument("l_path: cell out of range");
  const std::int64_t fx = from % grid.dim, fy = from / grid.dim;
  const std::int64_t tx = to % grid.dim, ty = to / grid.dim;
  std::vector<std::uint32_t> path;
  path.reserve(static_cast<std::size_t>(std::abs(tx - fx) + std::abs(ty - fy) + 1));
  const std::int64_t sx = tx > fx ? 1 : -1;
  for (std::int64_t x = fx; x != tx; x += sx)
    path.push_back(static_cast<std::uint32_t>(fy * grid.dim + x));
  const std::int64_t sy = ty > fy ? 1 : -1;
  for (std::int64_t y = fy; y != ty; y += sy)
    path.push_back(static_cast<std::uint32_t>(y * grid.dim + tx));
  path.push_back(to);
  return path;
}

struct Hop {
  std::uint64_t tx_uid = 0;
  std::uint64_t rx_uid = 0;
  std::uint32_t tx_cell = 0;
};

using Route = std::vector<Hop>;

// L-path route from one endpoint to another. Intermediate cells forward via
// their relay node; the first hop leaves the true source and the last hop
// lands on the true destination. Returns nothing if a needed relay cell is
// empty of nodes.
inline std::optional<Route> build_route(const NetworkInstance& net, const RoutingGrid& grid,
                                        std::uint64_t src_uid, std::uint64_t dst_uid) {
  const std::uint32_t c0 = routing_cell_of(grid, endpoint_position(net, src_uid));
  const std::uint32_t ck = routing_cell_of(grid, endpoint_position(net, dst_uid));
  const std::vector<std::uint32_t> cells = l_path(grid, c0, ck);
  Route route;
  if (cells.size() == 1) {
    route.push_back({src_uid, dst_uid, c0});
    return route;
  }
  route.reserve(cells.size() - 1);
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    const bool first = (i == 0);
    const bool last = (i + 2 == cells.size());
    std::uint64_t tx, rx;
    if (first) {
      tx = src_uid;
    } else {
      if (grid.relay[cells[i]] < 0) return std::nullopt;
      tx = node_uid(static_cast<std::uint64_t>(grid.relay[cells[i]]));
    }
    if (last) {
      rx = dst_uid;
    } else {
      if (grid.relay[cells[i + 1]] < 0) return std::nullopt;
      rx = node_uid(static_cast<std::uint64_t>(grid.relay[cells[i + 1]]));
    }
    route.push_back({tx, rx, cells[i]});
  }
  return route;
}

struct PhaseRates {
  std::vector<std::vector<double>> rates;  // per route, per hop: log2(1+SINR)
  InterferenceStat interference;           // over all hop receivers of the phase
};

// Per-hop spectral efficiencies for one phase of concurrent routes. Every
// transmitter sends at power `power`; a hop's interference sums same-color
// active cells, each represented by the first transmitter it hosts in this
// phase. TDMA duty (1/9) is NOT applied here.
inline PhaseRates phase_hop_rates(const NetworkInstance& net,
                                  const RoutingGrid& grid,
                                  const std::vector<Route>& routes,
                                  double power) {
  if (!(power > 0.0)) throw std::invalid_argument("phase_hop_rates: power must be positive");
  const PathLoss pl(net.config.alpha);
  const std::size_t cells = grid.color.size();
  // Representative transmit position per active cell.
  std::vector<char> active(cells, 0);
  std::vector<Vec2> rep(cells, Vec2{0.0, 0.0});
  for (const Route& r : routes)
    for (const Hop& h : r)
      if (!active[h.tx_cell]) {
        active[h.tx_cell] = 1;
        rep[h.tx_cell] = endpoint_position(net, h.tx_uid);
      }
  std::vector<std::uint32_t> active_cells;
  for (std::size_t c = 0; c < cells; ++c)
    if (active[c]) active_cells.push_back(static_cast<std::uint32_t>(c));

  PhaseRates out;
  out.rates.resize(routes.size());
  double interference_sum = 0.0;
  for (std::size_t ri = 0; ri < routes.size(); ++ri) {
    out.rates[ri].reserve(routes[ri].size());
    for (const Hop& h : routes[ri]) {
      const Vec2 rxp = endpoint_position(net, h.rx_uid);
      const double q = dist2(endpoint_position(net, h.tx_uid), rxp);
      if (q <= 0.0) throw std::domain_error("phase_hop_rates: coincident hop endpoints");
      const double signal = power * pl.from_q(q);
      double interference = 0.0;
      const std::uint32_t k = grid.color[h.tx_cell];
      for (const std::uint32_t c : active_cells) {
        if (c == h.tx_cell || grid.color[c] != k) continue;
        interference += power * pl.from_q(dist2(rep[c], rxp));
      }
      out.rates[ri].push_back(std::log2(1.0 + signal / (net.config.noise + interference)));
      interference_sum += interference;
      out.interference.max_power = std::max(out.interference.max_power, interference);
      ++out.interference.samples;
    }
  }
  if (out.interference.samples > 0)
    out.interference.mean_power = interference_sum / static_cast<double>(out.interference.samples);
  return out;
}

// Number of hops each cell transmits for across all routes of a phase.
inline std::vector<std::uint64_t> cell_load(const RoutingGrid& grid,
                                            const std::vector<Route>& routes) {
  std::vector<std::uint64_t> load(grid.color.size(), 0);
  for (const Route& r : routes)
    for (const Hop& h : r) ++load[h.tx_cell];
  return load;
}

}  // namespace hybridnet
