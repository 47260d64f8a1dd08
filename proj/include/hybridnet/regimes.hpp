#pragma once
// Closed-form throughput exponents for the four schemes and the operating
// regimes they induce on the (beta, gamma) square. All quantities here are
// exact algebra, so regime boundaries are exact exponent crossings.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridnet {

enum class Scheme { ish, imh, mh, hc };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ish: return "ish";
    case Scheme::imh: return "imh";
    case Scheme::mh: return "mh";
    case Scheme::hc: return "hc";
  }
  throw std::invalid_argument("unknown scheme");
}

inline std::string scheme_label(Scheme s) {
  switch (s) {
    case Scheme::ish: return "ISH";
    case Scheme::imh: return "IMH";
    case Scheme::mh: return "MH";
    case Scheme::hc: return "HC";
  }
  throw std::invalid_argument("unknown scheme");
}

inline Scheme scheme_from_string(std::string name) {
  for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (name == "ish") return Scheme::ish;
  if (name == "imh") return Scheme::imh;
  if (name == "mh") return Scheme::mh;
  if (name == "hc") return Scheme::hc;
  throw std::invalid_argument("unknown scheme: " + name);
}

enum class Regime { a, b, c, d };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::a: return "A";
    case Regime::b: return "B";
    case Regime::c: return "C";
    case Regime::d: return "D";
  }
  throw std::invalid_argument("unknown regime");
}

namespace detail {
inline void check_domain(double alpha, double beta, double gamma) {
  if (!(alpha > 2.0)) throw std::invalid_argument("alpha must exceed 2");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0,1)");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
  if (beta + gamma > 1.0) throw std::invalid_argument("beta + gamma must not exceed 1");
}
}  // namespace detail

struct SchemeExponents {
  double ish = 0.0;
  double imh = 0.0;
  double mh = 0.0;
  double hc = 0.0;

  double of(Scheme s) const {
    switch (s) {
      case Scheme::ish: return ish;
      case Scheme::imh: return imh;
      case Scheme::mh: return mh;
      case Scheme::hc: return hc;
    }
    throw std::invalid_argument("unknown scheme");
  }
  double best() const { return std::max({ish, imh, mh, hc}); }
};

// Extended-network throughput exponents e(alpha,beta,gamma): T = Theta(n^e).
inline SchemeExponents scheme_exponents(double alpha, double beta, double gamma) {
  detail::check_domain(alpha, beta, gamma);
  SchemeExponents e;
  e.ish = 1.0 + gamma - (1.0 - beta) * alpha / 2.0;
  e.imh = std::min(beta + gamma, (1.0 + beta) / 2.0);
  e.mh = 0.5;
  e.hc = 2.0 - alpha / 2.0;
  return e;
}

inline double hc_exponent(double alpha) {
  if (!(alpha > 2.0)) throw std::invalid_argument("alpha must exceed 2");
  return 2.0 - alpha / 2.0;
}

// Dense networks achieve linear scaling for every (beta, gamma).
inline double dense_exponent() { return 1.0; }

// Partition of the (beta, gamma) domain by which schemes can ever dominate:
//   A: beta + gamma < 1/2            (infrastructure too sparse to matter)
//   B: beta + 2*gamma < 1            (ISH never wins; IMH takes over from HC)
//   C: gamma < (beta^2 - 3*beta + 2)/2  (ISH still shadowed by IMH)
//   D: the rest                      (ISH holds a window between HC and IMH)
inline Regime regime_of(double beta, double gamma) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0,1)");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
  if (beta + gamma > 1.0) throw std::invalid_argument("beta + gamma must not exceed 1");
  if (beta + gamma < 0.5) return Regime::a;
  if (beta + 2.0 * gamma < 1.0) return Regime::b;
  if (gamma < (beta * beta - 3.0 * beta + 2.0) / 2.0) return Regime::c;
  return Regime::d;
}

// A path-loss threshold at which the dominant scheme changes; alpha >= value
// selects `right`, the scheme on the high-alpha side.
struct RegimeBoundary {
  double alpha = 0.0;
  Scheme right = Scheme::mh;
};

struct RegimeReport {
  Regime regime = Regime::a;
  SchemeExponents exponents;
  Scheme best = Scheme::hc;
  double best_exponent = 0.0;
  std::vector<RegimeBoundary> boundaries;  // strictly increasing in alpha
  bool degenerate = false;                 // a crossing collapsed to an empty window
};

// Dominant scheme as a function of alpha within each regime. Hierarchical
// cooperation always wins as alpha -> 2; each boundary is the exact alpha at
// which the next scheme's exponent overtakes.
inline RegimeReport classify(double alpha, double beta, double gamma) {
  RegimeReport rep;
  rep.regime = regime_of(beta, gamma);
  rep.exponents = scheme_exponents(alpha, beta, gamma);
  switch (rep.regime) {
    case Regime::a:
      rep.boundaries = {{3.0, Scheme::mh}};
      break;
    case Regime::b:
      rep.boundaries = {{4.0 - 2.0 * beta - 2.0 * gamma, Scheme::imh}};
      break;
    case Regime::c:
      rep.boundaries = {{3.0 - beta, Scheme::imh}};
      break;
    case Regime::d: {
      if (beta <= 0.0) throw std::invalid_argument("regime D requires beta > 0");
      const double ish_on = 2.0 * (1.0 - gamma) / beta;
      const double imh_on = 1.0 + 2.0 * gamma / (1.0 - beta);
      if (ish_on < imh_on) {
        rep.boundaries = {{ish_on, Scheme::ish}, {imh_on, Scheme::imh}};
      } else {
        // The ISH window is empty (boundary of regime C); hand over directly.
        rep.boundaries = {{imh_on, Scheme::imh}};
        rep.degenerate = true;
      }
      break;
    }
  }
  rep.best = Scheme::hc;
  for (const RegimeBoundary& b : rep.boundaries)
    if (alpha >= b.alpha) rep.best = b.right;
  rep.best_exponent = rep.exponents.of(rep.best);
  return rep;
}

}  // namespace hybridnet
