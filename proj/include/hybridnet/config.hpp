#pragma once
// Network configuration and the cell geometry derived from it.
//
// A network has n nodes on a square (unit square when dense, side sqrt(n)
// when extended), m = round(n^beta) base stations coerced down to a perfect
// square so they sit on a uniform grid, and l = round(n^gamma) antennas per
// base station. Each base station owns a disk of radius epsilon0 * cell_side,
// strictly inside its cell because epsilon0 <= 1/4.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "hybridnet/common.hpp"

namespace hybridnet {

enum class Geometry { dense, extended };

inline const char* to_string(Geometry g) {
  return g == Geometry::dense ? "dense" : "extended";
}

inline Geometry geometry_from_string(const std::string& s) {
  if (s == "dense") return Geometry::dense;
  if (s == "extended") return Geometry::extended;
  throw std::invalid_argument("unknown geometry: " + s);
}

struct NetworkConfig {
  std::uint64_t n = 1;
  double alpha = 3.0;           // path-loss exponent, > 2
  double beta = 0.0;            // base-station scaling exponent
  double gamma = 0.0;           // antenna scaling exponent
  double epsilon0 = 0.1;        // BS disk radius per cell side, <= 1/4
  double power = 1.0;           // per-node average transmit power P
  double noise = 1.0;           // thermal noise power N0
  double boundary_scale = 1.0;  // boundary antenna slots per sqrt(n/m)
  Geometry geometry = Geometry::extended;
  std::uint64_t seed = 0;
};

// Largest perfect square <= round(n^beta); never below 1.
inline std::uint64_t bs_count(const NetworkConfig& c) {
  const double raw = std::pow(static_cast<double>(c.n), c.beta);
  std::uint64_t rounded = static_cast<std::uint64_t>(std::llround(raw));
  if (rounded < 1) rounded = 1;
  std::uint64_t k = static_cast<std::uint64_t>(std::floor(std::sqrt(static_cast<double>(rounded))));
  while ((k + 1) * (k + 1) <= rounded) ++k;
  while (k > 1 && k * k > rounded) --k;
  return k * k;
}

inline std::uint64_t bs_grid_dim(const NetworkConfig& c) {
  const std::uint64_t m = bs_count(c);
  return static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(m))));
}

inline std::uint64_t antennas_per_bs(const NetworkConfig& c) {
  const double raw = std::pow(static_cast<double>(c.n), c.gamma);
  const auto l = static_cast<std::uint64_t>(std::llround(raw));
  return l < 1 ? 1 : l;
}

inline double area_side(const NetworkConfig& c) {
  return c.geometry == Geometry::dense ? 1.0 : std::sqrt(static_cast<double>(c.n));
}

inline double cell_side(const NetworkConfig& c) {
  return area_side(c) / static_cast<double>(bs_grid_dim(c));
}

inline double bs_radius(const NetworkConfig& c) { return c.epsilon0 * cell_side(c); }

// Antenna slots on the BS boundary circle: ceil(boundary_scale * sqrt(n/m)).
inline std::uint64_t boundary_capacity(const NetworkConfig& c) {
  const double ratio = static_cast<double>(c.n) / static_cast<double>(bs_count(c));
  const double cap = std::ceil(c.boundary_scale * std::sqrt(ratio));
  return cap < 1.0 ? 1 : static_cast<std::uint64_t>(cap);
}

inline void validate(const NetworkConfig& c) {
  if (c.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (!(c.alpha > 2.0)) throw std::invalid_argument("config: alpha must exceed 2");
  if (!(c.beta >= 0.0 && c.beta < 1.0)) throw std::invalid_argument("config: beta must lie in [0,1)");
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) throw std::invalid_argument("config: gamma must lie in [0,1)");
  if (c.beta + c.gamma > 1.0) throw std::invalid_argument("config: beta + gamma must not exceed 1");
  if (!(c.epsilon0 > 0.0 && c.epsilon0 <= 0.25))
    throw std::invalid_argument("config: epsilon0 must lie in (0, 1/4]");
  if (!(c.power > 0.0)) throw std::invalid_argument("config: power must be positive");
  if (!(c.noise > 0.0)) throw std::invalid_argument("config: noise must be positive");
  if (!(c.boundary_scale > 0.0))
    throw std::invalid_argument("config: boundary_scale must be positive");
  if (bs_count(c) * antennas_per_bs(c) > c.n)
    throw std::invalid_argument("config: m*l exceeds n; lower beta or gamma");
}

}  // namespace hybridnet
