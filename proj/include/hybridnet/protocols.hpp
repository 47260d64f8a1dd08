#pragma once
// The achievable-throughput constructions.
//
// ISH (infrastructure single hop): every node reaches its BS in one hop; the
// cell uplink is an l-antenna SIMO multiple-access channel decoded jointly,
// the downlink is its dual with the BS power budget nP/m split over served
// users. Out-of-cell interference under full activation is folded into an
// effective white-noise level per cell.
//
// IMH (infrastructure multihop): per cell, up to min(l_bnd, nodes) sessions
// route over the global routing grid to/from distinct boundary antennas.
// Sessions are spatially parallel lanes: each is limited by its worst hop at
// 1/9 TDMA duty, with SINR interference from all concurrently active cells.
//
// MH (pure multihop): every source-destination pair routes over the grid;
// cells time-share their airtime over the hops they host, so throughput is
// set by the most overloaded cell.
//
// HC (hierarchical cooperation) enters only through its closed-form exponent.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hybridnet/channel.hpp"
#include "hybridnet/common.hpp"
#include "hybridnet/netgen.hpp"
#include "hybridnet/regimes.hpp"
#include "hybridnet/routing.hpp"

namespace hybridnet {

struct ProtocolResult {
  Scheme scheme = Scheme::mh;
  std::vector<double> per_cell_rate;   // per BS cell: min(access, exit) aggregate
  double total_throughput = 0.0;       // min(access_total, exit_total)
  double access_total = 0.0;           // uplink/source-side aggregate rate
  double exit_total = 0.0;             // downlink/destination-side aggregate rate
  std::uint64_t active_pairs = 0;      // served sessions or routed pairs
  std::uint64_t route_failures = 0;    // sessions lost to empty relay cells
  InterferenceStat uplink_interference;
  InterferenceStat downlink_interference;
  double median_hop_sinr = 0.0;        // routed schemes only; linear scale
};

namespace detail {

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
  }
  return hi;
}

}  // namespace detail

// Uplink SIMO MAC rate of one cell: all its nodes transmit at P toward the
// cell's l antennas; `effective_noise` already includes out-of-cell
// interference. Averaged over `symbols` fading draws.
inline double ish_access_rate(const NetworkInstance& net, std::uint32_t cell,
                              double effective_noise, std::uint64_t symbols) {
  if (cell >= net.m) throw std::invalid_argument("ish_access_rate: cell out of range");
  if (symbols < 1) throw std::invalid_argument("ish_access_rate: symbols must be >= 1");
  if (!(effective_noise > 0.0))
    throw std::invalid_argument("ish_access_rate: effective noise must be positive");
  std::vector<std::uint64_t> tx;
  for (std::uint32_t i = 0; i < net.nodes.size(); ++i)
    if (net.cell_index[i] == cell) tx.push_back(node_uid(i));
  if (tx.empty()) return 0.0;
  std::vector<std::uint64_t> rx;
  rx.reserve(net.l);
  for (std::uint64_t t = 0; t < net.l; ++t) rx.push_back(antenna_uid(net, cell, t));
  const Eigen::VectorXd power =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(tx.size()), net.config.power);
  double acc = 0.0;
  for (std::uint64_t s = 0; s < symbols; ++s)
    acc += mac_rate(realize_channel(net, tx, rx, s).gains, power, effective_noise);
  return acc / static_cast<double>(symbols);
}

// Downlink rate of one cell via uplink-downlink duality: serving all its
// nodes with per-user power (nP/m)/n_c equals the dual MAC where each user
// "transmits" that share toward the l antennas.
inline double ish_exit_rate(const NetworkInstance& net, std::uint32_t cell, double effective_noise,
                            std::uint64_t symbols) {
  if (cell >= net.m) throw std::invalid_argument("ish_exit_rate: cell out of range");
  if (symbols < 1) throw std::invalid_argument("ish_exit_rate: symbols must be >= 1");
  if (!(effective_noise > 0.0))
    throw std::invalid_argument("ish_exit_rate: effective noise must be positive");
  std::vector<std::uint64_t> users;
  for (std::uint32_t i = 0; i < net.nodes.size(); ++i)
    if (net.cell_index[i] == cell) users.push_back(node_uid(i));
  if (users.empty()) return 0.0;
  std::vector<std::uint64_t> ant;
  ant.reserve(net.l);
  for (std::uint64_t t = 0; t < net.l; ++t) ant.push_back(antenna_uid(net, cell, t));
  const double budget =
      static_cast<double>(net.config.n) * net.config.power / static_cast<double>(net.m);
  const double per_user = budget / static_cast<double>(users.size());
  double acc = 0.0;
  for (std::uint64_t s = 0; s < symbols; ++s) {
    // gains: users x antennas; the dual MAC treats users as transmitters.
    const Eigen::MatrixXcd g = realize_channel(net, ant, users, s).gains;
    acc += logdet2_i_plus_gram(g, per_user / effective_noise);
  }
  return acc / static_cast<double>(symbols);
}

// Full-network ISH throughput. Per-cell effective noise is N0 plus the mean
// out-of-cell interference under full activation, estimated over up to
// `max_probes` stride-selected receive points per cell (the mean already
// aggregates thousands of interferer terms per probe, so a bounded probe set
// concentrates tightly; cells with at most `max_probes` receive points get
// the exact mean). Total takes the weaker of the two directions.
inline ProtocolResult ish_throughput(const NetworkInstance& net, std::uint64_t symbols = 1,
                                     unsigned threads = 1, std::uint64_t max_probes = 32) {
  if (max_probes < 1) throw std::invalid_argument("ish_throughput: max_probes must be >= 1");
  const PathLoss pl(net.config.alpha);
  const auto cp = detail::nodes_soa_by_cell(net);
  const auto by_cell = nodes_by_cell(net);
  std::vector<double> ax(net.antennas.size()), ay(net.antennas.size());
  for (std::size_t a = 0; a < net.antennas.size(); ++a) {
    ax[a] = net.antennas[a].x;
    ay[a] = net.antennas[a].y;
  }
  const double per_antenna = static_cast<double>(net.config.n) * net.config.power /
                             (static_cast<double>(net.m) * static_cast<double>(net.l));

  ProtocolResult out;
  out.scheme = Scheme::ish;
  out.active_pairs = net.config.n;
  out.uplink_interference.direction = Direction::uplink;
  out.downlink_interference.direction = Direction::downlink;

  struct CellNoise {
    double up = 0.0, down = 0.0;
    double up_sum = 0.0, up_max = 0.0, down_sum = 0.0, down_max = 0.0;
    std::uint64_t up_cnt = 0, down_cnt = 0;
  };
  std::vector<CellNoise> cn(net.m);
  parallel_for(net.m, threads, [&](std::size_t ci) {
    const auto c = static_cast<std::uint32_t>(ci);
    CellNoise& e = cn[ci];
    // Uplink: probe antennas of cell c against all out-of-cell nodes at P.
    const std::uint64_t up_probes = std::min<std::uint64_t>(net.l, max_probes);
    for (std::uint64_t j = 0; j < up_probes; ++j) {
      const std::uint64_t t = j * net.l / up_probes;
      const Vec2 p = net.antennas[static_cast<std::size_t>(c) * net.l + t];
      double acc = 0.0;
      for (std::uint32_t o = 0; o < net.m; ++o) {
        if (o == c) continue;
        acc += pl.sum_from(cp.xs[o].data(), cp.ys[o].data(), cp.xs[o].size(), p.x, p.y);
      }
      acc *= net.config.power;
      e.up_sum += acc;
      e.up_max = std::max(e.up_max, acc);
      ++e.up_cnt;
    }
    e.up = net.config.noise + (e.up_cnt ? e.up_sum / static_cast<double>(e.up_cnt) : 0.0);
    // Downlink: probe nodes of cell c against all out-of-cell antennas at
    // (nP/m)/l, summed over the two antenna spans flanking the cell's own.
    const auto& members = by_cell[c];
    const std::uint64_t down_probes = std::min<std::uint64_t>(members.size(), max_probes);
    const std::size_t lo = static_cast<std::size_t>(c) * net.l;
    const std::size_t hi = lo + net.l;
    for (std::uint64_t j = 0; j < down_probes; ++j) {
      const Vec2 p = net.nodes[members[j * members.size() / down_probes]];
      const double acc = (pl.sum_from(ax.data(), ay.data(), lo, p.x, p.y) +
                          pl.sum_from(ax.data() + hi, ay.data() + hi, ax.size() - hi, p.x, p.y)) *
                         per_antenna;
      e.down_sum += acc;
      e.down_max = std::max(e.down_max, acc);
      ++e.down_cnt;
    }
    e.down = net.config.noise + (e.down_cnt ? e.down_sum / static_cast<double>(e.down_cnt) : 0.0);
  });

  std::vector<double> up_noise(net.m), down_noise(net.m);
  for (std::uint32_t c = 0; c < net.m; ++c) {
    up_noise[c] = cn[c].up;
    down_noise[c] = cn[c].down;
    out.uplink_interference.mean_power += cn[c].up_sum;
    out.uplink_interference.samples += cn[c].up_cnt;
    out.uplink_interference.max_power = std::max(out.uplink_interference.max_power, cn[c].up_max);
    out.downlink_interference.mean_power += cn[c].down_sum;
    out.downlink_interference.samples += cn[c].down_cnt;
    out.downlink_interference.max_power =
        std::max(out.downlink_interference.max_power, cn[c].down_max);
  }
  if (out.uplink_interference.samples > 0)
    out.uplink_interference.mean_power /= static_cast<double>(out.uplink_interference.samples);
  if (out.downlink_interference.samples > 0)
    out.downlink_interference.mean_power /= static_cast<double>(out.downlink_interference.samples);
  out.uplink_interference.samples *= symbols;
  out.downlink_interference.samples *= symbols;

  std::vector<double> access(net.m, 0.0), exit(net.m, 0.0);
  parallel_for(net.m, threads, [&](std::size_t c) {
    const auto cell = static_cast<std::uint32_t>(c);
    access[c] = ish_access_rate(net, cell, up_noise[c], symbols);
    exit[c] = ish_exit_rate(net, cell, down_noise[c], symbols);
  });

  out.per_cell_rate.resize(net.m);
  for (std::uint32_t c = 0; c < net.m; ++c) {
    out.access_total += access[c];
    out.exit_total += exit[c];
    out.per_cell_rate[c] = std::min(access[c], exit[c]);
  }
  out.total_throughput = std::min(out.access_total, out.exit_total);
  return out;
}

// One IMH session: a node, its assigned boundary antenna, and the two routed
// legs (node -> antenna on access, antenna -> node on exit).
struct ImhSession {
  std::uint32_t node = 0;
  std::uint32_t bs = 0;
  std::uint32_t antenna_slot = 0;
  Route access;
  Route exit;
};

struct ImhPlan {
  RoutingGrid grid;
  std::vector<ImhSession> sessions;
  std::vector<std::uint32_t> sessions_per_cell;  // per BS cell, after drops
  std::uint64_t requested = 0;                   // sum of min(l_bnd, n_c)
  std::uint64_t dropped = 0;
};

// Session layout: each cell enrolls one node per boundary antenna slot, so
// concurrent lanes never exceed the boundary packing limit; slots prefer
// sources outside the antenna's own routing cell (see the selection loop).
inline ImhPlan imh_plan(const NetworkInstance& net) {
  ImhPlan plan;
  plan.grid = build_routing_grid(net);
  plan.sessions_per_cell.assign(net.m, 0);
  const auto by_cell = nodes_by_cell(net);
  const std::uint64_t lanes = net.boundary_antennas;
  for (std::uint32_t c = 0; c < net.m; ++c) {
    const auto& members = by_cell[c];
    const std::uint64_t k = std::min<std::uint64_t>(lanes, members.size());
    plan.requested += k;
    std::vector<char> used(members.size(), 0);
    for (std::uint64_t j = 0; j < k; ++j) {
      const std::uint64_t ant = antenna_uid(net, c, j);
      // Prefer a source outside the antenna's own routing cell so every hop
      // rides the relay lattice; a same-cell source would shortcut straight
      // to the antenna.
      const std::uint32_t access_cell =
          routing_cell_of(plan.grid, endpoint_position(net, ant));
      std::size_t pick = members.size();
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (used[i]) continue;
        if (pick == members.size()) pick = i;  // fallback: first unused
        if (routing_cell_of(plan.grid, net.nodes[members[i]]) != access_cell) {
          pick = i;
          break;
        }
      }
      used[pick] = 1;
      const std::uint64_t node = members[pick];
      auto access = build_route(net, plan.grid, node_uid(node), ant);
      auto exit = build_route(net, plan.grid, ant, node_uid(node));
      if (!access || !exit) {
        ++plan.dropped;
        continue;
      }
      ImhSession s;
      s.node = static_cast<std::uint32_t>(node);
      s.bs = c;
      s.antenna_slot = static_cast<std::uint32_t>(j);
      s.access = std::move(*access);
      s.exit = std::move(*exit);
      plan.sessions.push_back(std::move(s));
      ++plan.sessions_per_cell[c];
    }
  }
  return plan;
}

inline ProtocolResult imh_throughput(const NetworkInstance& net) {
  const ImhPlan plan = imh_plan(net);
  ProtocolResult out;
  out.scheme = Scheme::imh;
  out.active_pairs = plan.sessions.size();
  out.route_failures = plan.dropped;
  out.per_cell_rate.assign(net.m, 0.0);
  if (plan.sessions.empty()) return out;

  std::vector<Route> access, exit;
  access.reserve(plan.sessions.size());
  exit.reserve(plan.sessions.size());
  for (const ImhSession& s : plan.sessions) {
    access.push_back(s.access);
    exit.push_back(s.exit);
  }
  const PhaseRates arates = phase_hop_rates(net, plan.grid, access, net.config.power);
  const PhaseRates erates = phase_hop_rates(net, plan.grid, exit, net.config.power);
  out.uplink_interference = arates.interference;
  out.uplink_interference.direction = Direction::uplink;
  out.downlink_interference = erates.interference;
  out.downlink_interference.direction = Direction::downlink;

  std::vector<double> cell_access(net.m, 0.0), cell_exit(net.m, 0.0);
  std::vector<double> sinrs;
  for (std::size_t i = 0; i < plan.sessions.size(); ++i) {
    const double a =
        (1.0 / 9.0) * *std::min_element(arates.rates[i].begin(), arates.rates[i].end());
    const double e =
        (1.0 / 9.0) * *std::min_element(erates.rates[i].begin(), erates.rates[i].end());
    out.access_total += a;
    out.exit_total += e;
    cell_access[plan.sessions[i].bs] += a;
    cell_exit[plan.sessions[i].bs] += e;
    for (const double r : arates.rates[i]) sinrs.push_back(std::exp2(r) - 1.0);
    for (const double r : erates.rates[i]) sinrs.push_back(std::exp2(r) - 1.0);
  }
  for (std::uint32_t c = 0; c < net.m; ++c)
    out.per_cell_rate[c] = std::min(cell_access[c], cell_exit[c]);
  out.total_throughput = std::min(out.access_total, out.exit_total);
  out.median_hop_sinr = detail::median_of(std::move(sinrs));
  return out;
}

// Pure multihop over the derangement pairing: uniform per-pair rate set by
// the most loaded cell's airtime, i.e. min over loaded cells of the cell's
// worst hop rate divided by its hop count, at 1/9 duty.
inline ProtocolResult mh_throughput(const NetworkInstance& net) {
  const RoutingGrid grid = build_routing_grid(net);
  std::vector<Route> routes;
  routes.reserve(net.config.n);
  ProtocolResult out;
  out.scheme = Scheme::mh;
  for (std::uint32_t i = 0; i < net.config.n; ++i) {
    auto r = build_route(net, grid, node_uid(i), node_uid(net.pairing[i]));
    if (!r) {
      ++out.route_failures;
      continue;
    }
    routes.push_back(std::move(*r));
  }
  out.active_pairs = routes.size();
  if (routes.empty()) return out;

  const PhaseRates phase = phase_hop_rates(net, grid, routes, net.config.power);
  out.uplink_interference = phase.interference;
  out.downlink_interference = phase.interference;
  out.downlink_interference.direction = Direction::downlink;
  std::vector<double> cell_min_rate(grid.color.size(), std::numeric_limits<double>::infinity());
  const std::vector<std::uint64_t> load = cell_load(grid, routes);
  std::vector<double> sinrs;
  for (std::size_t ri = 0; ri < routes.size(); ++ri)
    for (std::size_t h = 0; h < routes[ri].size(); ++h) {
      const std::uint32_t c = routes[ri][h].tx_cell;
      cell_min_rate[c] = std::min(cell_min_rate[c], phase.rates[ri][h]);
      sinrs.push_back(std::exp2(phase.rates[ri][h]) - 1.0);
    }
  double per_pair = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < load.size(); ++c)
    if (load[c] > 0)
      per_pair = std::min(per_pair, cell_min_rate[c] / static_cast<double>(load[c]));
  per_pair /= 9.0;
  out.total_throughput = static_cast<double>(routes.size()) * per_pair;
  out.access_total = out.total_throughput;
  out.exit_total = out.total_throughput;
  out.median_hop_sinr = detail::median_of(std::move(sinrs));
  return out;
}

// Source-cell to destination-cell traffic matrix over the pairing, and the
// wired-backbone rate a BS pair must carry when every pair sustains T_n / n.
struct BackboneLoad {
  std::uint32_t m = 1;
  std::vector<std::uint64_t> x;  // m*m; x[k*m + i] = pairs from cell i to cell k
  std::uint64_t max_entry = 0;
  double required_cbs = 0.0;
};

inline BackboneLoad backbone_load(const NetworkInstance& net, double t_n) {
  if (!(t_n >= 0.0)) throw std::invalid_argument("backbone_load: throughput must be >= 0");
  BackboneLoad out;
  out.m = static_cast<std::uint32_t>(net.m);
  out.x.assign(static_cast<std::size_t>(net.m) * net.m, 0);
  for (std::uint32_t i = 0; i < net.config.n; ++i) {
    const std::uint32_t src_cell = net.cell_index[i];
    const std::uint32_t dst_cell = net.cell_index[net.pairing[i]];
    ++out.x[static_cast<std::size_t>(dst_cell) * net.m + src_cell];
  }
  for (const auto v : out.x) out.max_entry = std::max(out.max_entry, v);
  out.required_cbs =
      (t_n / static_cast<double>(net.config.n)) * static_cast<double>(out.max_entry);
  return out;
}

}  // namespace hybridnet
