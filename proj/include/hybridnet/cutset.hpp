#pragma once
// Cut-set upper-bound machinery for extended networks.
//
// The area splits at the vertical centerline. Sources are the nodes on the
// left; destinations are every right-half node plus every BS antenna (BSs
// belong to a side by their center, ties to the right; their backbone is
// wired, so even left-BS antennas absorb cut-crossing traffic). Destinations
// partition into
//   d1: right-half receivers within x-distance 1 of the cut,
//   d2: left-BS antennas within distance 1 inside their boundary circle,
//   d3: everything else, bounded through total received power alone.
// The bound is t1 (per-destination MISO logs over d1) + t2 (analytic DoF cap
// for d2) + t3 (n^eps times the d3 power transfer).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hybridnet/channel.hpp"
#include "hybridnet/common.hpp"
#include "hybridnet/netgen.hpp"

namespace hybridnet {

struct CutPartition {
  double cut_x = 0.0;
  std::vector<std::uint32_t> sources_left;  // node ids with x < cut_x
  std::vector<std::uint64_t> d1;            // endpoint uids
  std::vector<std::uint64_t> d2;
  std::vector<std::uint64_t> d3;
  std::size_t d3_far_right_count = 0;       // d3 prefix: right-half targets beyond
                                            // the slab; suffix: deep left-BS antennas
  std::vector<std::uint32_t> b_left;        // left-half BS ids
  std::vector<std::uint32_t> d_right;       // right-half node ids
};

inline CutPartition build_cut(const NetworkInstance& net) {
  if (net.config.geometry != Geometry::extended)
    throw std::invalid_argument("build_cut: requires extended geometry");
  CutPartition cut;
  cut.cut_x = net.area_side / 2.0;

  for (std::uint32_t i = 0; i < net.nodes.size(); ++i) {
    if (net.nodes[i].x < cut.cut_x)
      cut.sources_left.push_back(i);
    else
      cut.d_right.push_back(i);
  }
  std::vector<char> bs_left(net.m, 0);
  for (std::uint32_t s = 0; s < net.m; ++s) {
    if (net.bs_centers[s].x < cut.cut_x) {
      bs_left[s] = 1;
      cut.b_left.push_back(s);
    }
  }

  // Right-half nodes: slab membership by x-distance.
  std::vector<std::uint64_t> far_right;
  for (const std::uint32_t i : cut.d_right) {
    if (net.nodes[i].x - cut.cut_x < 1.0)
      cut.d1.push_back(node_uid(i));
    else
      far_right.push_back(node_uid(i));
  }
  // Antennas: right-BS ones by slab rule, left-BS ones by boundary-ring rule.
  std::vector<std::uint64_t> deep_left;
  for (std::uint32_t s = 0; s < net.m; ++s) {
    for (std::uint64_t t = 0; t < net.l; ++t) {
      const std::uint64_t uid = antenna_uid(net, s, t);
      const Vec2 p = antenna_position(net, s, t);
      if (!bs_left[s]) {
        if (std::abs(p.x - cut.cut_x) < 1.0)
          cut.d1.push_back(uid);
        else
          far_right.push_back(uid);
      } else {
        const double r = dist(p, net.bs_centers[s]);
        if (r >= net.bs_radius - 1.0)
          cut.d2.push_back(uid);
        else
          deep_left.push_back(uid);
      }
    }
  }
  cut.d3_far_right_count = far_right.size();
  cut.d3 = std::move(far_right);
  cut.d3.insert(cut.d3.end(), deep_left.begin(), deep_left.end());
  return cut;
}

struct PowerTransfer {
  double d4_sum = 0.0;   // P-weighted transfer into right-half targets beyond the slab
  double d5_sum = 0.0;   // P-weighted transfer into deep left-BS antennas
  double d3_total = 0.0; // d4_sum + d5_sum
};

// Exact sums of P * r^(-alpha) from every left source to the two d3 target
// families.
inline PowerTransfer power_transfer(const NetworkInstance& net, const CutPartition& cut) {
  const PathLoss pl(net.config.alpha);
  std::vector<double> sx(cut.sources_left.size()), sy(cut.sources_left.size());
  for (std::size_t i = 0; i < cut.sources_left.size(); ++i) {
    sx[i] = net.nodes[cut.sources_left[i]].x;
    sy[i] = net.nodes[cut.sources_left[i]].y;
  }
  const auto family_sum = [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const Vec2 t = endpoint_position(net, cut.d3[k]);
      acc += pl.sum_from(sx.data(), sy.data(), sx.size(), t.x, t.y);
    }
    return acc * net.config.power;
  };
  PowerTransfer pt;
  pt.d4_sum = family_sum(0, cut.d3_far_right_count);
  pt.d5_sum = family_sum(cut.d3_far_right_count, cut.d3.size());
  pt.d3_total = pt.d4_sum + pt.d5_sum;
  return pt;
}

// Per-destination MISO logs over the slab: sum over k in d1 of
// log2(1 + (P/N0) * sum_i r_ki^(-alpha)). Channel magnitudes carry no phase,
// so every symbol yields the same value; `symbols` is interface parity only.
inline double term_t1(const NetworkInstance& net, const CutPartition& cut,
                      std::uint64_t symbols = 1) {
  if (symbols < 1) throw std::invalid_argument("term_t1: symbols must be >= 1");
  const PathLoss pl(net.config.alpha);
  const double snr_scale = net.config.power / net.config.noise;
  std::vector<double> sx(cut.sources_left.size()), sy(cut.sources_left.size());
  for (std::size_t i = 0; i < cut.sources_left.size(); ++i) {
    sx[i] = net.nodes[cut.sources_left[i]].x;
    sy[i] = net.nodes[cut.sources_left[i]].y;
  }
  double total = 0.0;
  for (const std::uint64_t uid : cut.d1) {
    const Vec2 t = endpoint_position(net, uid);
    const double gain_sum = pl.sum_from(sx.data(), sy.data(), sx.size(), t.x, t.y);
    if (!std::isfinite(gain_sum))
      throw std::domain_error("term_t1: coincident source and destination");
    total += std::log2(1.0 + snr_scale * gain_sum);
  }
  return total;
}

// Analytic DoF cap on information into the d2 rings: m * min(l, sqrt(n/m)) *
// log2(n). Kept as a pure formula because realized near-boundary distances
// make per-antenna logs numerically explosive.
inline double term_t2_value(std::uint64_t n, std::uint64_t m, std::uint64_t l) {
  const double cap = std::min(static_cast<double>(l),
                              std::sqrt(static_cast<double>(n) / static_cast<double>(m)));
  return static_cast<double>(m) * cap * std::log2(static_cast<double>(n));
}

inline double term_t2(const NetworkInstance& net, const CutPartition& cut) {
  if (cut.d2.empty()) return 0.0;
  return term_t2_value(net.config.n, net.m, net.l);
}

// Power-transfer cap on information into d3: n^eps times the total P-weighted
// transfer.
inline double term_t3(const NetworkInstance& net, const CutPartition& cut, double epsilon = 0.05) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("term_t3: epsilon must be >= 0");
  const PowerTransfer pt = power_transfer(net, cut);
  return std::pow(static_cast<double>(net.config.n), epsilon) * pt.d3_total;
}

struct CutsetResult {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double d4_sum = 0.0;
  double d5_sum = 0.0;
  double total = 0.0;
  double epsilon = 0.05;
};

inline CutsetResult cutset_total(const NetworkInstance& net, std::uint64_t symbols = 1,
                                 double epsilon = 0.05) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("cutset_total: epsilon must be >= 0");
  const CutPartition cut = build_cut(net);
  const PowerTransfer pt = power_transfer(net, cut);
  CutsetResult res;
  res.epsilon = epsilon;
  res.t1 = term_t1(net, cut, symbols);
  res.t2 = term_t2(net, cut);
  res.t3 = std::pow(static_cast<double>(net.config.n), epsilon) * pt.d3_total;
  res.d4_sum = pt.d4_sum;
  res.d5_sum = pt.d5_sum;
  res.total = res.t1 + res.t2 + res.t3;
  return res;
}

// Isotropic-input MIMO rate across the full cut: log2 det(I + (P/N0) H H*),
// H spanning every destination x every left source, averaged over symbols.
// A feasible-input floor, so cutset_total must not fall below it (modulo the
// n^eps slack). Dense linear algebra, hence the size guard.
inline double direct_cut_capacity(const NetworkInstance& net, const CutPartition& cut,
                                  std::uint64_t symbols = 1) {
  if (net.config.n > 1024)
    throw std::invalid_argument("direct_cut_capacity: n exceeds the dense-linear-algebra guard");
  if (symbols < 1) throw std::invalid_argument("direct_cut_capacity: symbols must be >= 1");
  std::vector<std::uint64_t> tx;
  tx.reserve(cut.sources_left.size());
  for (const std::uint32_t i : cut.sources_left) tx.push_back(node_uid(i));
  std::vector<std::uint64_t> rx = cut.d1;
  rx.insert(rx.end(), cut.d2.begin(), cut.d2.end());
  rx.insert(rx.end(), cut.d3.begin(), cut.d3.end());
  if (tx.empty() || rx.empty()) return 0.0;
  const double scale = net.config.power / net.config.noise;
  double acc = 0.0;
  for (std::uint64_t s = 0; s < symbols; ++s)
    acc += logdet2_i_plus_gram(realize_channel(net, tx, rx, s).gains, scale);
  return acc / static_cast<double>(symbols);
}

// Monte Carlo estimate of E[ ||F||_2^2 ] where F is the cut matrix restricted
// to d3 destinations with each source column scaled by 1/sqrt(d3_i), giving
// exact unit column norms. The spectral norm comes from power iteration with
// a seeded start vector.
inline double f3_norm_stat(const NetworkInstance& net, const CutPartition& cut,
                           std::uint64_t samples = 8) {
  if (samples < 1) throw std::invalid_argument("f3_norm_stat: samples must be >= 1");
  if (cut.d3.empty() || cut.sources_left.empty()) return 0.0;
  const PathLoss pl(net.config.alpha);

  // Per-source transfer totals; sources with zero transfer are dropped
  // (cannot occur with positive distances, but the contract allows it).
  const std::size_t rows = cut.d3.size();
  std::vector<Vec2> tpos(rows);
  for (std::size_t k = 0; k < rows; ++k) tpos[k] = endpoint_position(net, cut.d3[k]);
  std::vector<std::uint32_t> kept;
  std::vector<double> inv_sqrt_d3;
  for (const std::uint32_t i : cut.sources_left) {
    const Vec2 sp = net.nodes[i];
    double d3_i = 0.0;
    for (std::size_t k = 0; k < rows; ++k) d3_i += pl.from_q(dist2(sp, tpos[k]));
    if (d3_i > 0.0) {
      kept.push_back(i);
      inv_sqrt_d3.push_back(1.0 / std::sqrt(d3_i));
    }
  }
  if (kept.empty()) return 0.0;
  const std::size_t cols = kept.size();

  const double two_pi = 2.0 * std::numbers::pi;
  double acc = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    Eigen::MatrixXcd f(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < cols; ++i) {
      const Vec2 sp = net.nodes[kept[i]];
      const std::uint64_t tx = node_uid(kept[i]);
      for (std::size_t k = 0; k < rows; ++k) {
        const double q = dist2(sp, tpos[k]);
        const double mag = std::sqrt(pl.from_q(q)) * inv_sqrt_d3[i];
        const double theta =
            two_pi * unit_double(derive_seed(stream_seed(net.config.seed, Stream::phase), s, tx,
                                             cut.d3[k]));
        f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = std::polar(mag, theta);
      }
    }
    // Power iteration on F*F via matvecs.
    Rng rng(derive_seed(stream_seed(net.config.seed, Stream::power_iter), s));
    Eigen::VectorXcd v(static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = std::complex<double>(rng.uniform() - 0.5, rng.uniform() - 0.5);
    v.normalize();
    // Cap chosen for the near-degenerate top of random-matrix spectra: the
    // small gap that slows convergence equally bounds the value bias, so the
    // estimate is within O(gap) of the true norm at exit.
    double lambda = 0.0;
    for (int iter = 0; iter < 120; ++iter) {
      const Eigen::VectorXcd fv = f * v;
      const double next = fv.squaredNorm();
      Eigen::VectorXcd w = f.adjoint() * fv;
      const double wn = w.norm();
      if (wn == 0.0) {
        lambda = 0.0;
        break;
      }
      v = w / wn;
      if (iter > 0 && std::abs(next - lambda) <= 1e-8 * std::max(1.0, next)) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    acc += lambda;
  }
  return acc / static_cast<double>(samples);
}

// Analytic dense-network throughput cap: every source's SIMO capacity toward
// all other receive points, upper-bounded via the whp minimum distance
// n^-(1+eps1), summed over sources. Scales as c * n * log2(n).
inline double dense_upper(const NetworkConfig& config, double epsilon1 = 0.5) {
  if (config.geometry != Geometry::dense)
    throw std::invalid_argument("dense_upper: requires dense geometry");
  if (!(epsilon1 > 0.0)) throw std::invalid_argument("dense_upper: epsilon1 must be positive");
  validate(config);
  const double n = static_cast<double>(config.n);
  const double receive_points = n - 1.0 + static_cast<double>(bs_count(config)) *
                                              static_cast<double>(antennas_per_bs(config));
  const double min_dist_gain = std::pow(n, (1.0 + epsilon1) * config.alpha);
  return n * std::log2(1.0 + (config.power / config.noise) * receive_points * min_dist_gain);
}

// Realized counterpart: exact per-source SIMO capacity sum on one instance,
// for cross-checking the analytic cap at small n.
inline double dense_upper_realized(const NetworkInstance& net) {
  if (net.config.geometry != Geometry::dense)
    throw std::invalid_argument("dense_upper_realized: requires dense geometry");
  if (net.config.n > 1024)
    throw std::invalid_argument("dense_upper_realized: n exceeds the evaluation guard");
  const PathLoss pl(net.config.alpha);
  const double snr_scale = net.config.power / net.config.noise;
  double total = 0.0;
  for (std::uint32_t i = 0; i < net.nodes.size(); ++i) {
    double gain_sum = 0.0;
    for (std::uint32_t k = 0; k < net.nodes.size(); ++k) {
      if (k == i) continue;
      gain_sum += pl.from_q(dist2(net.nodes[i], net.nodes[k]));
    }
    for (const Vec2& a : net.antennas) gain_sum += pl.from_q(dist2(net.nodes[i], a));
    total += std::log2(1.0 + snr_scale * gain_sum);
  }
  return total;
}

}  // namespace hybridnet
