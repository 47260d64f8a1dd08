#pragma once
// Channel realization and interference measurement.
//
// A link from transmitter u to receiver v at distance r has gain
// exp(j*theta) * r^(-alpha/2), where theta is an i.i.d. uniform phase drawn
// by hashing (seed, symbol, tx, rx). Magnitudes are phase-free, so any
// power-sum quantity is identical across symbols; only determinant-style
// quantities depend on the symbol index.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hybridnet/common.hpp"
#include "hybridnet/netgen.hpp"

namespace hybridnet {

// Endpoints share one id space: nodes first, then antennas BS-major.
inline std::uint64_t node_uid(std::uint64_t node) { return node; }

inline std::uint64_t antenna_uid(const NetworkInstance& net, std::uint64_t bs, std::uint64_t t) {
  return net.config.n + bs * net.l + t;
}

inline bool is_antenna_uid(const NetworkInstance& net, std::uint64_t uid) {
  return uid >= net.config.n;
}

inline Vec2 endpoint_position(const NetworkInstance& net, std::uint64_t uid) {
  if (uid < net.config.n) return net.nodes[uid];
  const std::uint64_t a = uid - net.config.n;
  if (a >= net.antennas.size()) throw std::invalid_argument("endpoint uid out of range");
  return net.antennas[a];
}

// r^(-alpha) evaluated from squared distance; the acceptance-relevant
// exponents get sqrt/multiply fast paths, anything else falls back to pow.
class PathLoss {
 public:
  explicit PathLoss(double alpha) : exp_(-0.5 * alpha) {
    if (!(alpha > 2.0)) throw std::invalid_argument("PathLoss: alpha must exceed 2");
    if (near(alpha, 2.5)) kind_ = Kind::a25;
    else if (near(alpha, 3.0)) kind_ = Kind::a3;
    else if (near(alpha, 3.5)) kind_ = Kind::a35;
    else if (near(alpha, 4.0)) kind_ = Kind::a4;
    else kind_ = Kind::general;
  }

  // q = r^2; returns r^(-alpha).
  double from_q(double q) const {
    switch (kind_) {
      case Kind::a25: {
        const double s = std::sqrt(q);
        return 1.0 / (q * std::sqrt(s));
      }
      case Kind::a3:
        return 1.0 / (q * std::sqrt(q));
      case Kind::a35: {
        const double s = std::sqrt(q);
        return 1.0 / (q * s * std::sqrt(s));
      }
      case Kind::a4:
        return 1.0 / (q * q);
      default:
        return std::pow(q, exp_);
    }
  }

  double from_r(double r) const { return from_q(r * r); }

  // Sum of r^(-alpha) from (rx, ry) to `count` points in coordinate arrays.
  // Four independent accumulator lanes keep the order fixed (deterministic)
  // while letting the compiler vectorize the strict-FP reduction.
  double sum_from(const double* xs, const double* ys, std::size_t count, double rx,
                  double ry) const {
    switch (kind_) {
      case Kind::a25:
        return strided_sum(
            [](double q) {
              const double s = std::sqrt(q);
              return 1.0 / (q * std::sqrt(s));
            },
            xs, ys, count, rx, ry);
      case Kind::a3:
        return strided_sum([](double q) { return 1.0 / (q * std::sqrt(q)); }, xs, ys, count, rx,
                           ry);
      case Kind::a35:
        return strided_sum(
            [](double q) {
              const double s = std::sqrt(q);
              return 1.0 / (q * s * std::sqrt(s));
            },
            xs, ys, count, rx, ry);
      case Kind::a4:
        return strided_sum([](double q) { return 1.0 / (q * q); }, xs, ys, count, rx, ry);
      default: {
        const double e = exp_;
        return strided_sum([e](double q) { return std::pow(q, e); }, xs, ys, count, rx, ry);
      }
    }
  }

 private:
  enum class Kind { a25, a3, a35, a4, general };
  static bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

  template <class F>
  static double strided_sum(F f, const double* xs, const double* ys, std::size_t count, double rx,
                            double ry) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
      const double q0 = (xs[i] - rx) * (xs[i] - rx) + (ys[i] - ry) * (ys[i] - ry);
      const double q1 = (xs[i + 1] - rx) * (xs[i + 1] - rx) + (ys[i + 1] - ry) * (ys[i + 1] - ry);
      const double q2 = (xs[i + 2] - rx) * (xs[i + 2] - rx) + (ys[i + 2] - ry) * (ys[i + 2] - ry);
      const double q3 = (xs[i + 3] - rx) * (xs[i + 3] - rx) + (ys[i + 3] - ry) * (ys[i + 3] - ry);
      a0 += f(q0);
      a1 += f(q1);
      a2 += f(q2);
      a3 += f(q3);
    }
    double tail = 0.0;
    for (; i < count; ++i) {
      const double q = (xs[i] - rx) * (xs[i] - rx) + (ys[i] - ry) * (ys[i] - ry);
      tail += f(q);
    }
    return ((a0 + a1) + (a2 + a3)) + tail;
  }

  Kind kind_;
  double exp_;
};

// Phase of link (tx -> rx) at one symbol; tx/rx order matters, so uplink and
// downlink phases between the same pair are independent.
inline double link_phase(const NetworkInstance& net, std::uint64_t tx_uid, std::uint64_t rx_uid,
                         std::uint64_t symbol) {
  const std::uint64_t h =
      derive_seed(stream_seed(net.config.seed, Stream::phase), symbol, tx_uid, rx_uid);
  return 2.0 * std::numbers::pi * unit_double(h);
}

inline std::complex<double> channel_gain(const NetworkInstance& net, std::uint64_t tx_uid,
                                         std::uint64_t rx_uid, std::uint64_t symbol) {
  const double r2 = dist2(endpoint_position(net, tx_uid), endpoint_position(net, rx_uid));
  if (r2 <= 0.0) throw std::domain_error("channel_gain: coincident endpoints");
  const double mag = std::pow(r2, -0.25 * net.config.alpha);
  return std::polar(mag, link_phase(net, tx_uid, rx_uid, symbol));
}

struct ChannelRealization {
  Eigen::MatrixXcd gains;      // rx x tx
  Eigen::MatrixXd distances;   // rx x tx
  std::uint64_t symbol = 0;
};

inline ChannelRealization realize_channel(const NetworkInstance& net,
                                          const std::vector<std::uint64_t>& tx_uids,
                                          const std::vector<std::uint64_t>& rx_uids,
                                          std::uint64_t symbol) {
  ChannelRealization out;
  out.symbol = symbol;
  out.gains.resize(static_cast<Eigen::Index>(rx_uids.size()),
                   static_cast<Eigen::Index>(tx_uids.size()));
  out.distances.resizeLike(out.gains);
  for (std::size_t r = 0; r < rx_uids.size(); ++r) {
    const Vec2 rp = endpoint_position(net, rx_uids[r]);
    for (std::size_t t = 0; t < tx_uids.size(); ++t) {
      const Vec2 tp = endpoint_position(net, tx_uids[t]);
      const double d2v = dist2(rp, tp);
      if (d2v <= 0.0) throw std::domain_error("realize_channel: coincident endpoints");
      const double d = std::sqrt(d2v);
      out.distances(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = d;
      out.gains(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) =
          std::polar(std::pow(d2v, -0.25 * net.config.alpha),
                     link_phase(net, tx_uids[t], rx_uids[r], symbol));
    }
  }
  return out;
}

enum class Direction { uplink, downlink };

struct Transmitter {
  std::uint64_t uid = 0;
  double power = 0.0;
};

// Transmitters grouped by the BS cell they operate in.
using ActiveMap = std::vector<std::vector<Transmitter>>;

struct InterferenceStat {
  Direction direction = Direction::uplink;
  double mean_power = 0.0;
  double max_power = 0.0;
  std::uint64_t samples = 0;
};

// Sum of power * r^(-alpha) at each reference receiver of `cell` (its BS
// antennas for uplink, its nodes for downlink) from transmitters in every
// other cell. Magnitudes carry no phase, so each symbol contributes the same
// value; `symbols` only scales the sample count.
inline InterferenceStat measure_interference(const NetworkInstance& net, std::uint32_t cell,
                                             const ActiveMap& active, Direction direction,
                                             std::uint64_t symbols) {
  if (cell >= net.m) throw std::invalid_argument("measure_interference: cell out of range");
  if (active.size() != net.m)
    throw std::invalid_argument("measure_interference: active map must cover every cell");
  if (symbols < 1) throw std::invalid_argument("measure_interference: symbols must be >= 1");
  const PathLoss pl(net.config.alpha);

  std::vector<Vec2> receivers;
  if (direction == Direction::uplink) {
    receivers.reserve(net.l);
    for (std::uint64_t t = 0; t < net.l; ++t) receivers.push_back(antenna_position(net, cell, t));
  } else {
    for (std::size_t i = 0; i < net.nodes.size(); ++i)
      if (net.cell_index[i] == cell) receivers.push_back(net.nodes[i]);
  }

  InterferenceStat stat;
  stat.direction = direction;
  stat.samples = receivers.size() * symbols;
  if (receivers.empty()) return stat;

  double total = 0.0;
  for (const Vec2 rx : receivers) {
    double acc = 0.0;
    for (std::uint32_t c = 0; c < net.m; ++c) {
      if (c == cell) continue;
      for (const Transmitter& tx : active[c]) {
        const double q = dist2(endpoint_position(net, tx.uid), rx);
        if (q <= 0.0) throw std::domain_error("measure_interference: coincident endpoints");
        acc += tx.power * pl.from_q(q);
      }
    }
    total += acc;
    stat.max_power = std::max(stat.max_power, acc);
  }
  stat.mean_power = total / static_cast<double>(receivers.size());
  return stat;
}

// Full activation maps for the infrastructure-supported single-hop scheme:
// every node transmits at P on the uplink; every BS spends nP/m split evenly
// over its l antennas on the downlink.
inline ActiveMap ish_uplink_active_map(const NetworkInstance& net) {
  ActiveMap map(net.m);
  for (std::uint32_t i = 0; i < net.nodes.size(); ++i)
    map[net.cell_index[i]].push_back({node_uid(i), net.config.power});
  return map;
}

inline ActiveMap ish_downlink_active_map(const NetworkInstance& net) {
  ActiveMap map(net.m);
  const double per_antenna = static_cast<double>(net.config.n) * net.config.power /
                             (static_cast<double>(net.m) * static_cast<double>(net.l));
  for (std::uint32_t s = 0; s < net.m; ++s)
    for (std::uint64_t t = 0; t < net.l; ++t)
      map[s].push_back({antenna_uid(net, s, t), per_antenna});
  return map;
}

namespace detail {

// Node coordinates grouped by cell for branch-free inner loops.
struct CellPoints {
  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> ys;
};

inline CellPoints nodes_soa_by_cell(const NetworkInstance& net) {
  CellPoints cp;
  cp.xs.resize(net.m);
  cp.ys.resize(net.m);
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    cp.xs[net.cell_index[i]].push_back(net.nodes[i].x);
    cp.ys[net.cell_index[i]].push_back(net.nodes[i].y);
  }
  return cp;
}

}  // namespace detail

// Uplink interference at every antenna under full activation: for antenna a
// of BS s, sum of P * r^(-alpha) over all nodes outside cell s.
inline std::vector<double> ish_uplink_interference_field(const NetworkInstance& net,
                                                         unsigned threads = 1) {
  const PathLoss pl(net.config.alpha);
  const auto cp = detail::nodes_soa_by_cell(net);
  std::vector<double> out(net.antennas.size(), 0.0);
  parallel_for(net.antennas.size(), threads, [&](std::size_t a) {
    const std::uint32_t own = static_cast<std::uint32_t>(a / net.l);
    const double ax = net.antennas[a].x;
    const double ay = net.antennas[a].y;
    double acc = 0.0;
    for (std::uint32_t c = 0; c < net.m; ++c) {
      if (c == own) continue;
      acc += pl.sum_from(cp.xs[c].data(), cp.ys[c].data(), cp.xs[c].size(), ax, ay);
    }
    out[a] = acc * net.config.power;
  });
  return out;
}

// Downlink interference at every node under full activation: sum over
// antennas of every other BS at per-antenna power (nP/m)/l.
inline std::vector<double> ish_downlink_interference_field(const NetworkInstance& net,
                                                           unsigned threads = 1) {
  const PathLoss pl(net.config.alpha);
  const double per_antenna = static_cast<double>(net.config.n) * net.config.power /
                             (static_cast<double>(net.m) * static_cast<double>(net.l));
  std::vector<double> ax(net.antennas.size()), ay(net.antennas.size());
  for (std::size_t a = 0; a < net.antennas.size(); ++a) {
    ax[a] = net.antennas[a].x;
    ay[a] = net.antennas[a].y;
  }
  std::vector<double> out(net.nodes.size(), 0.0);
  parallel_for(net.nodes.size(), threads, [&](std::size_t i) {
    const std::uint32_t own = net.cell_index[i];
    const double px = net.nodes[i].x;
    const double py = net.nodes[i].y;
    const std::size_t lo = static_cast<std::size_t>(own) * net.l;
    const std::size_t hi = lo + net.l;
    out[i] = (pl.sum_from(ax.data(), ay.data(), lo, px, py) +
              pl.sum_from(ax.data() + hi, ay.data() + hi, ax.size() - hi, px, py)) *
             per_antenna;
  });
  return out;
}

// log2 det(I + scale * H H^*), evaluated on the smaller Gram side (the two
// sides agree by Sylvester's identity). Cholesky of the Hermitian positive
// definite matrix gives the determinant as a product of real pivots.
inline double logdet2_i_plus_gram(const Eigen::MatrixXcd& h, double scale) {
  if (h.rows() == 0 || h.cols() == 0 || scale == 0.0) return 0.0;
  if (!(scale > 0.0)) throw std::invalid_argument("logdet2_i_plus_gram: scale must be >= 0");
  Eigen::MatrixXcd gram;
  const Eigen::Index k = std::min(h.rows(), h.cols());
  gram = Eigen::MatrixXcd::Zero(k, k);
  if (h.rows() <= h.cols())
    gram.selfadjointView<Eigen::Lower>().rankUpdate(h, scale);
  else
    gram.selfadjointView<Eigen::Lower>().rankUpdate(h.adjoint(), scale);
  gram.diagonal().array() += 1.0;
  const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("logdet2_i_plus_gram: Cholesky failed");
  double acc = 0.0;
  const auto& packed = llt.matrixLLT();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) acc += std::log2(packed(i, i).real());
  return 2.0 * acc;
}

// Multiple-access sum rate: log2 det(I + (1/noise) * H diag(p) H^*), with one
// power per transmit column.
inline double mac_rate(const Eigen::MatrixXcd& h, const Eigen::VectorXd& tx_power, double noise) {
  if (tx_power.size() != h.cols()) throw std::invalid_argument("mac_rate: power per column");
  if (!(noise > 0.0)) throw std::invalid_argument("mac_rate: noise must be positive");
  for (Eigen::Index j = 0; j < tx_power.size(); ++j)
    if (!(tx_power[j] >= 0.0)) throw std::invalid_argument("mac_rate: negative power");
  Eigen::MatrixXcd scaled = h;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j)
    scaled.col(j) *= std::sqrt(tx_power[j]);
  return logdet2_i_plus_gram(scaled, 1.0 / noise);
}

// Per-transmitter rates under MMSE reception with successive interference
// cancellation in column order: user j sees only users > j as interference.
// The rates sum to mac_rate by the chain rule, which makes the pair a strong
// mutual consistency check.
inline std::vector<double> mmse_sic_rates(const Eigen::MatrixXcd& h, const Eigen::VectorXd& tx_power,
                                          double noise) {
  if (tx_power.size() != h.cols()) throw std::invalid_argument("mmse_sic_rates: power per column");
  if (!(noise > 0.0)) throw std::invalid_argument("mmse_sic_rates: noise must be positive");
  const Eigen::Index k = h.cols();
  std::vector<double> rates(static_cast<std::size_t>(k), 0.0);
  Eigen::MatrixXcd cov = noise * Eigen::MatrixXcd::Identity(h.rows(), h.rows());
  for (Eigen::Index j = k - 1; j >= 0; --j) {
    const Eigen::LLT<Eigen::MatrixXcd> llt(cov);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("mmse_sic_rates: Cholesky failed");
    const Eigen::VectorXcd col = h.col(j);
    const double sinr = tx_power[j] * llt.solve(col).dot(col).real();
    rates[static_cast<std::size_t>(j)] = std::log2(1.0 + sinr);
    cov += tx_power[j] * (col * col.adjoint());
  }
  return rates;
}

}  // namespace hybridnet
