#pragma once
// Experiment orchestration: seeded parameter sweeps, exponent fitting on
// log-log medians, the statistical verification battery for the geometric
// and stochastic claims the constructions rest on, and achievability-versus-
// bound reconciliation at fixed parameter points.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridnet/common.hpp"
#include "hybridnet/config.hpp"
#include "hybridnet/cutset.hpp"
#include "hybridnet/netgen.hpp"
#include "hybridnet/protocols.hpp"
#include "hybridnet/regimes.hpp"

namespace hybridnet {

constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

struct TaskSet {
  bool ish = false;
  bool imh = false;
  bool mh = false;
  bool hc = false;
  bool cutset = false;
  bool any() const { return ish || imh || mh || hc || cutset; }
};

struct SweepSpec {
  std::vector<std::uint64_t> n_values;
  std::uint32_t trials_per_n = 1;
  double alpha = 3.0;
  double beta = 0.0;
  double gamma = 0.0;
  double epsilon0 = 0.1;
  double power = 1.0;
  double noise = 1.0;
  double boundary_scale = 1.0;
  Geometry geometry = Geometry::extended;
  TaskSet tasks{};
  std::uint64_t base_seed = 0;
  std::uint64_t symbols = 1;
  double cut_epsilon = 0.05;
};

inline void validate(const SweepSpec& spec) {
  if (spec.n_values.empty()) throw std::invalid_argument("sweep: n_values must not be empty");
  for (std::size_t i = 0; i < spec.n_values.size(); ++i) {
    if (spec.n_values[i] < 1) throw std::invalid_argument("sweep: n values must be >= 1");
    if (i > 0 && spec.n_values[i] <= spec.n_values[i - 1])
      throw std::invalid_argument("sweep: n_values must be strictly increasing");
  }
  if (spec.trials_per_n < 1) throw std::invalid_argument("sweep: trials_per_n must be >= 1");
  if (!spec.tasks.any()) throw std::invalid_argument("sweep: no tasks requested");
  if (spec.symbols < 1) throw std::invalid_argument("sweep: symbols must be >= 1");
  if (!(spec.cut_epsilon >= 0.0)) throw std::invalid_argument("sweep: cut_epsilon must be >= 0");
}

// One (n, trial) outcome. Values of tasks not requested (or lost to a row
// failure) stay NaN; rows never abort the sweep.
struct SweepRow {
  std::uint64_t n = 0;
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t m = 0;
  std::uint64_t l = 0;
  bool failed = false;
  double ish = kAbsent;
  double imh = kAbsent;
  double mh = kAbsent;
  double hc = kAbsent;
  double cutset = kAbsent;
  double cut_t1 = kAbsent;
  double cut_t2 = kAbsent;
  double cut_t3 = kAbsent;
  double cut_d4 = kAbsent;
  double cut_d5 = kAbsent;
  double imh_sinr = kAbsent;
  std::uint64_t imh_sessions = 0;
  std::uint64_t imh_drops = 0;
  std::uint64_t mh_pairs = 0;
  std::uint64_t mh_drops = 0;
  std::string error;  // diagnostic only; not serialized
};

// Deterministic function of the spec: row (n, trial) always runs on the
// instance seeded by derive_seed(base_seed, n, trial). Rows execute in a
// parallel pool with per-row result slots; inner kernels stay single-threaded
// so the table is identical at any thread budget.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0) {
  validate(spec);
  const std::size_t total =
      spec.n_values.size() * static_cast<std::size_t>(spec.trials_per_n);
  std::vector<SweepRow> rows(total);
  const unsigned budget = threads == 0 ? thread_budget() : threads;
  parallel_for(total, budget, [&](std::size_t idx) {
    SweepRow& row = rows[idx];
    row.n = spec.n_values[idx / spec.trials_per_n];
    row.trial = static_cast<std::uint32_t>(idx % spec.trials_per_n);
    row.seed = derive_seed(spec.base_seed, row.n, row.trial);
    try {
      NetworkConfig cfg;
      cfg.n = row.n;
      cfg.alpha = spec.alpha;
      cfg.beta = spec.beta;
      cfg.gamma = spec.gamma;
      cfg.epsilon0 = spec.epsilon0;
      cfg.power = spec.power;
      cfg.noise = spec.noise;
      cfg.boundary_scale = spec.boundary_scale;
      cfg.geometry = spec.geometry;
      cfg.seed = row.seed;
      const NetworkInstance net = generate_network(cfg);
      row.m = net.m;
      row.l = net.l;
      if (spec.tasks.ish) row.ish = ish_throughput(net, spec.symbols, 1).total_throughput;
      if (spec.tasks.imh) {
        const ProtocolResult r = imh_throughput(net);
        row.imh = r.total_throughput;
        row.imh_sinr = r.median_hop_sinr;
        row.imh_sessions = r.active_pairs;
        row.imh_drops = r.route_failures;
      }
      if (spec.tasks.mh) {
        const ProtocolResult r = mh_throughput(net);
        row.mh = r.total_throughput;
        row.mh_pairs = r.active_pairs;
        row.mh_drops = r.route_failures;
      }
      // The closed-form scheme carries no simulation: its column holds the
      // exact scaling value n^e so downstream fits recover e itself.
      if (spec.tasks.hc)
        row.hc = std::pow(static_cast<double>(row.n), hc_exponent(spec.alpha));
      if (spec.tasks.cutset) {
        const CutsetResult r = cutset_total(net, spec.symbols, spec.cut_epsilon);
        row.cutset = r.total;
        row.cut_t1 = r.t1;
        row.cut_t2 = r.t2;
        row.cut_t3 = r.t3;
        row.cut_d4 = r.d4_sum;
        row.cut_d5 = r.d5_sum;
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  });
  return rows;
}

inline double sweep_column(const SweepRow& row, const std::string& column) {
  if (column == "ish") return row.ish;
  if (column == "imh") return row.imh;
  if (column == "mh") return row.mh;
  if (column == "hc") return row.hc;
  if (column == "cutset") return row.cutset;
  if (column == "cut_t1") return row.cut_t1;
  if (column == "cut_t2") return row.cut_t2;
  if (column == "cut_t3") return row.cut_t3;
  if (column == "cut_d4") return row.cut_d4;
  if (column == "cut_d5") return row.cut_d5;
  if (column == "imh_sinr") return row.imh_sinr;
  throw std::invalid_argument("unknown sweep column: " + column);
}

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  std::uint32_t points_used = 0;   // distinct n surviving the filters
  std::uint64_t rows_dropped = 0;  // failed / absent / non-positive rows
};

namespace detail {

// Two-sided 95% Student-t multipliers, exact to printed precision for
// df <= 30, asymptotic approximation beyond.
inline double t_quantile_975(std::uint32_t df) {
  static constexpr double table[30] = {
      12.70620474, 4.30265273, 3.18244631, 2.77644511, 2.57058184, 2.44691185,
      2.36462425,  2.30600414, 2.26215716, 2.22813885, 2.20098516, 2.17881283,
      2.16036866,  2.14478669, 2.13144955, 2.11990530, 2.10981558, 2.10092204,
      2.09302405,  2.08596345, 2.07961384, 2.07387307, 2.06865761, 2.06389856,
      2.05953855,  2.05552944, 2.05183052, 2.04841007, 2.04523075, 2.04227246};
  if (df < 1) throw std::invalid_argument("t_quantile_975: df must be >= 1");
  if (df <= 30) return table[df - 1];
  return 1.96 + 2.4 / static_cast<double>(df);
}

struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double se_slope = 0.0;
  std::size_t k = 0;
};

inline Ols ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ols_fit: need >= 2 matched points");
  const auto k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("ols_fit: x values are degenerate");
  Ols out;
  out.k = x.size();
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  out.r_squared =
      ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  out.se_slope =
      x.size() > 2 ? std::sqrt(std::max(ss_res, 0.0) / ((k - 2.0) * sxx)) : 0.0;
  return out;
}

}  // namespace detail

// Finite-n exponent estimate: ordinary least squares of
// log2(median-over-trials of `column`) against log2 n. Failed rows and
// non-positive values are dropped (counted in rows_dropped); a defensible
// fit needs >= 4 surviving n spanning >= 3 octaves.
inline FitResult fit_exponent(const std::vector<SweepRow>& table, const std::string& column) {
  std::map<std::uint64_t, std::vector<double>> grouped;
  FitResult out;
  for (const SweepRow& row : table) {
    const double v = sweep_column(row, column);
    if (row.failed || !std::isfinite(v) || !(v > 0.0)) {
      ++out.rows_dropped;
      continue;
    }
    grouped[row.n].push_back(v);
  }
  std::vector<double> xs, ys;
  for (auto& [n, vals] : grouped) {
    const double med = detail::median_of(std::move(vals));
    if (!(med > 0.0)) continue;
    xs.push_back(std::log2(static_cast<double>(n)));
    ys.push_back(std::log2(med));
  }
  if (xs.size() < 4)
    throw std::invalid_argument("fit_exponent: need >= 4 distinct n with positive medians");
  if (!(xs.back() - xs.front() >= 3.0 - 1e-9))
    throw std::invalid_argument("fit_exponent: n range must span >= 3 octaves");
  const detail::Ols o = detail::ols_fit(xs, ys);
  out.slope = o.slope;
  out.intercept = o.intercept;
  out.r_squared = o.r_squared;
  out.points_used = static_cast<std::uint32_t>(o.k);
  const double half =
      detail::t_quantile_975(static_cast<std::uint32_t>(o.k - 2)) * o.se_slope;
  out.ci95_lo = o.slope - half;
  out.ci95_hi = o.slope + half;
  return out;
}

// ---------------------------------------------------------------------------
// Statistical verification battery. Each check regenerates fresh instances
// from (base_seed, check id, ...) and reduces to one statistic compared
// against one threshold, so reports read uniformly.
// ---------------------------------------------------------------------------

struct LemmaParams {
  std::uint32_t seeds = 0;  // 0 -> per-check default
  std::uint64_t base_seed = 1;
  double delta0 = 0.5;    // occupancy / traffic-matrix slack
  double epsilon1 = 0.5;  // distance-floor exponent margin
  unsigned threads = 0;
};

struct LemmaReport {
  std::string id;
  bool pass = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string comparison;  // how statistic relates to threshold on pass
  std::string detail;
};

namespace detail {

inline NetworkConfig lemma_config(std::uint64_t n, double alpha, double beta, double gamma,
                                  double epsilon0, Geometry geometry, std::uint64_t seed) {
  NetworkConfig cfg;
  cfg.n = n;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.gamma = gamma;
  cfg.epsilon0 = epsilon0;
  cfg.geometry = geometry;
  cfg.seed = seed;
  return cfg;
}

// Cell-occupancy concentration: fraction of seeds with every cell inside
// (1 +- delta0) n/m must clear the analytic floor.
inline LemmaReport lemma_occupancy(const LemmaParams& p, unsigned budget) {
  const std::uint32_t seeds = p.seeds ? p.seeds : 100;
  const std::uint64_t n = 4096;
  const double beta = 0.5;
  std::vector<char> ok(seeds, 0);
  parallel_for(seeds, budget, [&](std::size_t s) {
    const auto cfg = lemma_config(n, 3.0, beta, 0.0, 0.1, Geometry::extended,
                                  derive_seed(p.base_seed, 1, s));
    const GeometryReport rep = measure_geometry(generate_network(cfg));
    ok[s] = occupancy_within(rep, n, p.delta0) ? 1 : 0;
  });
  LemmaReport rep;
  rep.id = "L1";
  std::uint32_t hits = 0;
  for (const char c : ok) hits += c;
  rep.statistic = static_cast<double>(hits) / static_cast<double>(seeds);
  rep.threshold = chernoff_bound(p.delta0, n, beta);
  rep.comparison = ">=";
  rep.pass = rep.statistic >= rep.threshold;
  std::ostringstream os;
  os << "all-cells occupancy fraction " << rep.statistic << " over " << seeds
     << " seeds (n=4096, beta=0.5, delta0=" << p.delta0 << ") vs analytic floor "
     << rep.threshold;
  rep.detail = os.str();
  return rep;
}

// Uplink interference boundedness: the mean out-of-cell interference power
// must not grow with n (log-log slope at most 0.05; it decays for alpha > 2).
inline LemmaReport lemma_interference(const LemmaParams& p, unsigned budget) {
  const std::uint32_t seeds = p.seeds ? p.seeds : 5;
  const std::vector<std::uint64_t> ns = {1024, 2048, 4096, 8192, 16384};
  std::vector<double> xs, ys;
  std::ostringstream med_list;
  for (const std::uint64_t n : ns) {
    std::vector<double> means(seeds, 0.0);
    parallel_for(seeds, budget, [&](std::size_t s) {
      const auto cfg = lemma_config(n, 4.0, 0.5, 0.0, 0.1, Geometry::extended,
                                    derive_seed(p.base_seed, 3, n, s));
      const NetworkInstance net = generate_network(cfg);
      const std::vector<double> field = ish_uplink_interference_field(net);
      double acc = 0.0;
      for (const double v : field) acc += v;
      means[s] = field.empty() ? 0.0 : acc / static_cast<double>(field.size());
    });
    const double med = median_of(std::move(means));
    xs.push_back(std::log2(static_cast<double>(n)));
    ys.push_back(std::log2(med));
    med_list << " " << med;
  }
  LemmaReport rep;
  rep.id = "L3";
  rep.statistic = ols_fit(xs, ys).slope;
  rep.threshold = 0.05;
  rep.comparison = "<=";
  rep.pass = rep.statistic <= rep.threshold;
  std::ostringstream os;
  os << "mean uplink interference log-log slope " << rep.statistic
     << " over n=2^10..2^14 at (alpha=4, beta=0.5); medians:" << med_list.str();
  rep.detail = os.str();
  return rep;
}

// Traffic-matrix uniformity: max source-cell -> destination-cell pair count
// stays under the concentration bound for both load regimes. The mean-load
// branch runs at (n=2^16, beta=0.25), where the bound (1+delta0)^2 n/m^2 sits
// far above the Poisson(n/m^2) bulk; at smaller n/m^2 ratios the bound lands
// inside the tail and no placement policy can clear it on 95% of seeds.
inline LemmaReport lemma_traffic_matrix(const LemmaParams& p, unsigned budget) {
  const std::uint32_t seeds = p.seeds ? p.seeds : 200;
  const auto branch = [&](std::uint64_t n, double beta, double bound,
                          std::uint64_t tag) -> double {
    std::vector<char> ok(seeds, 0);
    parallel_for(seeds, budget, [&](std::size_t s) {
      const auto cfg = lemma_config(n, 3.0, beta, 0.0, 0.1, Geometry::extended,
                                    derive_seed(p.base_seed, 5, tag, s));
      const NetworkInstance net = generate_network(cfg);
      ok[s] = static_cast<double>(backbone_load(net, 0.0).max_entry) <= bound ? 1 : 0;
    });
    std::uint32_t hits = 0;
    for (const char c : ok) hits += c;
    return static_cast<double>(hits) / static_cast<double>(seeds);
  };
  const std::uint64_t n_a = 65536;
  const auto cfg_a = lemma_config(n_a, 3.0, 0.25, 0.0, 0.1, Geometry::extended, 0);
  const double m_a = static_cast<double>(bs_count(cfg_a));
  const double bound_a =
      (1.0 + p.delta0) * (1.0 + p.delta0) * static_cast<double>(n_a) / (m_a * m_a);
  const double frac_a = branch(n_a, 0.25, bound_a, 1);
  const std::uint64_t n_b = 1024;
  const double bound_b = std::log(static_cast<double>(n_b));
  const double frac_b = branch(n_b, 0.6, bound_b, 2);
  LemmaReport rep;
  rep.id = "L5";
  rep.statistic = std::min(frac_a, frac_b);
  rep.threshold = 0.95;
  rep.comparison = ">=";
  rep.pass = frac_a >= rep.threshold && frac_b >= rep.threshold;
  std::ostringstream os;
  os << "traffic-matrix max-entry bound fractions: mean-load branch " << frac_a
     << " (n=2^16, beta=0.25, bound " << bound_a << "), log-load branch " << frac_b
     << " (n=2^10, beta=0.6, bound ln n = " << bound_b << "), " << seeds << " seeds each";
  rep.detail = os.str();
  return rep;
}

// Minimum-separation floor (dense): closest node pair and closest
// node-antenna pair both clear n^-(1+eps1) on at least 99% of seeds.
inline LemmaReport lemma_min_distance(const LemmaParams& p, unsigned budget) {
  const std::uint32_t seeds = p.seeds ? p.seeds : 200;
  const std::uint64_t n = 1024;
  const double floor = std::pow(static_cast<double>(n), -(1.0 + p.epsilon1));
  std::vector<char> ok(seeds, 0);
  parallel_for(seeds, budget, [&](std::size_t s) {
    const auto cfg =
        lemma_config(n, 3.0, 0.0, 0.0, 0.1, Geometry::dense, derive_seed(p.base_seed, 6, s));
    const GeometryReport rep = measure_geometry(generate_network(cfg));
    ok[s] = std::min(rep.min_node_distance, rep.min_node_antenna_distance) >= floor ? 1 : 0;
  });
  LemmaReport rep;
  rep.id = "L6";
  std::uint32_t hits = 0;
  for (const char c : ok) hits += c;
  rep.statistic = static_cast<double>(hits) / static_cast<double>(seeds);
  rep.threshold = 0.99;
  rep.comparison = ">=";
  rep.pass = rep.statistic >= rep.threshold;
  std::ostringstream os;
  os << "distance-floor fraction " << rep.statistic << " over " << seeds
     << " seeds (n=2^10 dense, floor n^-(1+" << p.epsilon1 << "))";
  rep.detail = os.str();
  return rep;
}

// Normalized cut-matrix norm growth: E[||F||_2^2] / (log2 n)^3 shows no
// increasing trend (slope of the ratio against log2 n at most 0.1).
inline LemmaReport lemma_norm_growth(const LemmaParams& p, unsigned budget) {
  const std::uint32_t instances = p.seeds ? p.seeds : 3;
  const std::uint64_t samples = 4;
  const std::vector<std::uint64_t> ns = {256, 512, 1024, 2048, 4096};
  std::vector<double> xs, ys;
  std::ostringstream ratio_list;
  for (const std::uint64_t n : ns) {
    std::vector<double> stats(instances, 0.0);
    parallel_for(instances, budget, [&](std::size_t s) {
      const auto cfg = lemma_config(n, 3.0, 0.5, 0.5, 0.1, Geometry::extended,
                                    derive_seed(p.base_seed, 7, n, s));
      const NetworkInstance net = generate_network(cfg);
      stats[s] = f3_norm_stat(net, build_cut(net), samples);
    });
    double mean = 0.0;
    for (const double v : stats) mean += v;
    mean /= static_cast<double>(instances);
    const double lg = std::log2(static_cast<double>(n));
    const double ratio = mean / (lg * lg * lg);
    xs.push_back(lg);
    ys.push_back(ratio);
    ratio_list << " " << ratio;
  }
  LemmaReport rep;
  rep.id = "L7";
  rep.statistic = ols_fit(xs, ys).slope;
  rep.threshold = 0.1;
  rep.comparison = "<=";
  rep.pass = rep.statistic <= rep.threshold;
  std::ostringstream os;
  os << "||F||^2 / (log2 n)^3 trend slope " << rep.statistic
     << " over n=2^8..2^12 (alpha=3, beta=gamma=0.5); ratios:" << ratio_list.str();
  rep.detail = os.str();
  return rep;
}

// Deep-interior power-transfer scaling: fitted log-log slope of d5_sum
// against the parameter-evaluated exponent 1 - gamma/2 + (beta+gamma-1)
// alpha/2. Runs at epsilon0 = 0.25, the largest admissible boundary-disk
// ratio, since the deep region r < R-1 is empty until R exceeds 1.
inline LemmaReport lemma_deep_transfer(const LemmaParams& p, unsigned budget) {
  const std::uint32_t seeds = p.seeds ? p.seeds : 3;
  const double alpha = 4.0, beta = 0.5, gamma = 0.5, epsilon0 = 0.25;
  const std::vector<std::uint64_t> ns = {1024, 2048, 4096, 8192, 16384, 32768, 65536};
  std::vector<double> xs, ys;
  std::ostringstream med_list;
  for (const std::uint64_t n : ns) {
    std::vector<double> sums(seeds, 0.0);
    parallel_for(seeds, budget, [&](std::size_t s) {
      const auto cfg = lemma_config(n, alpha, beta, gamma, epsilon0, Geometry::extended,
                                    derive_seed(p.base_seed, 8, n, s));
      const NetworkInstance net = generate_network(cfg);
      sums[s] = power_transfer(net, build_cut(net)).d5_sum;
    });
    const double med = median_of(std::move(sums));
    med_list << " " << med;
    if (med > 0.0) {
      xs.push_back(std::log2(static_cast<double>(n)));
      ys.push_back(std::log2(med));
    }
  }
  LemmaReport rep;
  rep.id = "L8";
  if (xs.size() < 4) {
    rep.pass = false;
    rep.comparison = "|x - target| <=";
    rep.detail = "deep-interior transfer sums were zero on too many n to fit";
    return rep;
  }
  const double target = 1.0 - gamma / 2.0 + (beta + gamma - 1.0) * alpha / 2.0;
  rep.statistic = ols_fit(xs, ys).slope;
  rep.threshold = target;
  rep.comparison = "|x - target| <= 0.2";
  rep.pass = std::abs(rep.statistic - target) <= 0.2;
  std::ostringstream os;
  os << "deep-interior transfer slope " << rep.statistic << " vs target " << target
     << " +- 0.2 over n=2^10..2^16 (alpha=4, beta=gamma=0.5, epsilon0=0.25); medians:"
     << med_list.str();
  rep.detail = os.str();
  return rep;
}

}  // namespace detail

inline LemmaReport verify_lemma(std::string id, const LemmaParams& params = {}) {
  for (auto& ch : id) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  const unsigned budget = params.threads == 0 ? thread_budget() : params.threads;
  if (id == "L1") return detail::lemma_occupancy(params, budget);
  if (id == "L3") return detail::lemma_interference(params, budget);
  if (id == "L5") return detail::lemma_traffic_matrix(params, budget);
  if (id == "L6") return detail::lemma_min_distance(params, budget);
  if (id == "L7") return detail::lemma_norm_growth(params, budget);
  if (id == "L8") return detail::lemma_deep_transfer(params, budget);
  throw std::invalid_argument("verify_lemma: unknown id " + id);
}

// ---------------------------------------------------------------------------
// Achievability-versus-bound reconciliation.
// ---------------------------------------------------------------------------

// Each scheme is measured at an operating point where its scaling mechanism
// is visible at desk-scale n: the single-hop array-gain scheme needs a
// deeply noise-limited regime (large N0) so per-cell rates track array
// geometry rather than a saturating interference floor, and deeper noise
// also log-compresses the close-approach channel spikes that otherwise
// steepen the fitted slope; the multihop schemes are interference-limited
// by construction (negligible N0 keeps hop SINR flat across n); the cut-set
// bound is evaluated at unit SNR.
struct SchemeNoisePresets {
  double ish = 400.0;
  double imh = 1e-6;
  double mh = 1e-6;
  double cutset = 1.0;
};

struct ReconcileParams {
  double alpha = 3.0;
  double beta = 0.0;
  double gamma = 0.0;
  double epsilon0 = 0.1;
  std::vector<std::uint64_t> n_values = {1024, 2048, 4096, 8192, 16384, 32768, 65536};
  std::uint32_t trials_per_n = 10;
  std::uint64_t base_seed = 7;
  std::uint64_t symbols = 1;
  SchemeNoisePresets presets{};
  bool with_cutset = true;
  double flag_tol = 0.2;    // |fitted - analytic| beyond this flags the entry
  double cut_slack = 0.05;  // bound may undercut the best fit by at most this
  unsigned threads = 0;
};

struct ReconcileEntry {
  Scheme scheme = Scheme::mh;
  double fitted = kAbsent;
  double analytic = 0.0;
  bool flagged = false;  // |fitted - analytic| > 0.2
};

struct ReconcileReport {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  Regime regime = Regime::a;
  std::vector<ReconcileEntry> entries;  // ish, imh, mh, hc
  double cutset_fitted = kAbsent;
  bool cutset_consistent = true;  // cutset_fitted >= best fitted - 0.05
  Scheme best_fitted = Scheme::mh;
  double best_fitted_value = 0.0;
  Scheme best_analytic = Scheme::mh;
  bool best_match = false;
};

inline ReconcileReport reconcile(const ReconcileParams& rp) {
  const SchemeExponents analytic = scheme_exponents(rp.alpha, rp.beta, rp.gamma);
  const RegimeReport regime = classify(rp.alpha, rp.beta, rp.gamma);

  SweepSpec base;
  base.n_values = rp.n_values;
  base.trials_per_n = rp.trials_per_n;
  base.alpha = rp.alpha;
  base.beta = rp.beta;
  base.gamma = rp.gamma;
  base.epsilon0 = rp.epsilon0;
  base.geometry = Geometry::extended;
  base.base_seed = rp.base_seed;  // shared seed: all tables see the same instances
  base.symbols = rp.symbols;

  SweepSpec ish_spec = base;
  ish_spec.tasks.ish = true;
  ish_spec.tasks.hc = true;
  ish_spec.noise = rp.presets.ish;
  SweepSpec imh_spec = base;
  imh_spec.tasks.imh = true;
  imh_spec.noise = rp.presets.imh;
  SweepSpec mh_spec = base;
  mh_spec.tasks.mh = true;
  mh_spec.noise = rp.presets.mh;

  const auto ish_table = run_sweep(ish_spec, rp.threads);
  const auto imh_table = run_sweep(imh_spec, rp.threads);
  const auto mh_table = run_sweep(mh_spec, rp.threads);

  ReconcileReport rep;
  rep.alpha = rp.alpha;
  rep.beta = rp.beta;
  rep.gamma = rp.gamma;
  rep.regime = regime.regime;
  rep.best_analytic = regime.best;
  const auto add = [&](Scheme s, double fitted) {
    ReconcileEntry e;
    e.scheme = s;
    e.fitted = fitted;
    e.analytic = analytic.of(s);
    e.flagged = !(std::abs(fitted - e.analytic) <= rp.flag_tol);
    rep.entries.push_back(e);
  };
  add(Scheme::ish, fit_exponent(ish_table, "ish").slope);
  add(Scheme::imh, fit_exponent(imh_table, "imh").slope);
  add(Scheme::mh, fit_exponent(mh_table, "mh").slope);
  add(Scheme::hc, fit_exponent(ish_table, "hc").slope);

  rep.best_fitted = rep.entries.front().scheme;
  rep.best_fitted_value = rep.entries.front().fitted;
  for (const ReconcileEntry& e : rep.entries) {
    if (e.fitted > rep.best_fitted_value) {
      rep.best_fitted = e.scheme;
      rep.best_fitted_value = e.fitted;
    }
  }
  rep.best_match = rep.best_fitted == rep.best_analytic;

  if (rp.with_cutset) {
    SweepSpec cut_spec = base;
    cut_spec.tasks.cutset = true;
    cut_spec.noise = rp.presets.cutset;
    const auto cut_table = run_sweep(cut_spec, rp.threads);
    rep.cutset_fitted = fit_exponent(cut_table, "cutset").slope;
    rep.cutset_consistent = rep.cutset_fitted >= rep.best_fitted_value - rp.cut_slack;
  }
  return rep;
}

}  // namespace hybridnet
