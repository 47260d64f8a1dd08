#include <hybridnet/netgen.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "support.hpp"

using namespace hybridnet;
using testsupport::make_config;

TEST_CASE("validate rejects out-of-domain configurations") {
  auto ok = make_config(64, 3.0, 0.5, 0.25, Geometry::extended, 1);
  CHECK_NOTHROW(validate(ok));

  auto bad = ok;
  bad.n = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = ok;
  bad.alpha = 2.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = ok;
  bad.beta = 1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = ok;
  bad.beta = -0.1;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = ok;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = ok;
  bad.beta = 0.6;
  bad.gamma = 0.6;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);  // beta + gamma > 1
  bad = ok;
  bad.epsilon0 = 0.3;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = ok;
  bad.epsilon0 = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = ok;
  bad.power = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = ok;
  bad.noise = -1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = ok;
  bad.boundary_scale = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("validate rejects infrastructure exceeding the node count") {
  // round(15^0.5) = 4 is already a perfect square, so m*l = 16 > 15.
  auto c = make_config(15, 3.0, 0.5, 0.5, Geometry::dense, 1);
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("station count is the largest perfect square at or below round(n^beta)") {
  // round(1024^0.5) = 32 -> 25; round(16384^0.4) = 49 is already square.
  CHECK(bs_count(make_config(1024, 3.0, 0.5, 0.0, Geometry::dense, 1)) == 25);
  CHECK(bs_count(make_config(16384, 3.0, 0.4, 0.0, Geometry::dense, 1)) == 49);
  CHECK(bs_count(make_config(4096, 3.0, 0.5, 0.0, Geometry::dense, 1)) == 64);
  CHECK(bs_count(make_config(1024, 3.0, 0.0, 0.0, Geometry::dense, 1)) == 1);
}

TEST_CASE("derived geometry of a 1024-node extended instance") {
  auto cfg = make_config(1024, 3.0, 0.5, 0.25, Geometry::extended, 3);
  const NetworkInstance net = generate_network(cfg);
  CHECK(net.m == 25);
  CHECK(net.grid_dim == 5);
  CHECK(net.l == 6);  // round(1024^0.25) = round(5.66)
  CHECK(net.area_side == 32.0);
  CHECK(net.cell_side == Catch::Approx(6.4).epsilon(1e-15));
  CHECK(net.bs_radius == Catch::Approx(0.64).epsilon(1e-15));
  // Boundary slots: ceil(sqrt(1024/25)) = 7, capped by l = 6.
  CHECK(boundary_capacity(cfg) == 7);
  CHECK(net.boundary_antennas == 6);
  CHECK(net.nodes.size() == 1024);
  CHECK(net.antennas.size() == 25 * 6);
  CHECK(net.bs_centers.size() == 25);
}

TEST_CASE("boundary antennas sit exactly on the disk circle, equally spaced from angle zero") {
  auto cfg = make_config(1024, 3.0, 0.5, 0.25, Geometry::extended, 5);
  const NetworkInstance net = generate_network(cfg);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::uint64_t s = 0; s < net.m; ++s) {
    const Vec2 c = net.bs_centers[s];
    for (std::uint64_t t = 0; t < net.boundary_antennas; ++t) {
      const Vec2 p = net.antennas[s * net.l + t];
      CHECK(dist(p, c) == Catch::Approx(net.bs_radius).margin(1e-12));
      const double ang = two_pi * static_cast<double>(t) / static_cast<double>(net.boundary_antennas);
      CHECK(p.x == Catch::Approx(c.x + net.bs_radius * std::cos(ang)).margin(1e-12));
      CHECK(p.y == Catch::Approx(c.y + net.bs_radius * std::sin(ang)).margin(1e-12));
    }
  }
}

TEST_CASE("interior antennas stay inside the disk, nodes stay outside every disk") {
  // gamma = 0.45 gives l = 23 > boundary capacity at small cells? Use a case
  // with interior antennas: n = 4096, beta = 0.25, gamma = 0.5 -> l = 64,
  // cap = ceil(sqrt(4096/9)) = 22.
  auto cfg = make_config(4096, 3.0, 0.25, 0.5, Geometry::extended, 11);
  const NetworkInstance net = generate_network(cfg);
  REQUIRE(net.boundary_antennas < net.l);
  for (std::uint64_t s = 0; s < net.m; ++s)
    for (std::uint64_t t = net.boundary_antennas; t < net.l; ++t)
      CHECK(dist(net.antennas[s * net.l + t], net.bs_centers[s]) <= net.bs_radius + 1e-12);
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const std::uint32_t c = net.cell_index[i];
    CHECK(dist2(net.nodes[i], net.bs_centers[c]) > net.bs_radius * net.bs_radius);
    CHECK(cell_of(net, net.nodes[i]) == c);
  }
}

TEST_CASE("node sampling is deterministic in the seed and varies across seeds") {
  auto cfg = make_config(256, 3.0, 0.5, 0.0, Geometry::dense, 42);
  const NetworkInstance a = generate_network(cfg);
  const NetworkInstance b = generate_network(cfg);
  cfg.seed = 43;
  const NetworkInstance c = generate_network(cfg);
  REQUIRE(a.nodes.size() == b.nodes.size());
  bool identical = true, differs = false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    identical = identical && a.nodes[i].x == b.nodes[i].x && a.nodes[i].y == b.nodes[i].y;
    differs = differs || a.nodes[i].x != c.nodes[i].x;
  }
  CHECK(identical);
  CHECK(differs);
  CHECK(a.pairing == b.pairing);
}

TEST_CASE("pairing is a derangement for n >= 2 and identity for n = 1") {
  auto cfg = make_config(333, 3.0, 0.25, 0.0, Geometry::dense, 17);
  const NetworkInstance net = generate_network(cfg);
  std::vector<std::uint32_t> sorted = net.pairing;
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
  for (std::uint32_t i = 0; i < net.pairing.size(); ++i) CHECK(net.pairing[i] != i);

  auto one = make_config(1, 3.0, 0.0, 0.0, Geometry::dense, 1);
  CHECK(generate_network(one).pairing == std::vector<std::uint32_t>{0});
}

TEST_CASE("measure_geometry agrees with brute force on a small instance") {
  auto cfg = make_config(96, 3.0, 0.4, 0.25, Geometry::extended, 23);
  const NetworkInstance net = generate_network(cfg);
  const GeometryReport rep = measure_geometry(net);

  CHECK(std::accumulate(rep.per_cell_counts.begin(), rep.per_cell_counts.end(), std::uint64_t{0}) ==
        net.nodes.size());
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    REQUIRE(net.cell_index[i] < rep.per_cell_counts.size());
  }

  double best_nodes = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < net.nodes.size(); ++j)
      best_nodes = std::min(best_nodes, dist(net.nodes[i], net.nodes[j]));
  CHECK(rep.min_node_distance == Catch::Approx(best_nodes).epsilon(1e-13));

  double best_na = std::numeric_limits<double>::infinity();
  for (const auto& p : net.nodes)
    for (const auto& a : net.antennas) best_na = std::min(best_na, dist(p, a));
  CHECK(rep.min_node_antenna_distance == Catch::Approx(best_na).epsilon(1e-13));
}

TEST_CASE("chernoff occupancy floor matches its closed form and guards its domain") {
  // Frozen: 1 - 1024^0.5 exp(-((1.5 ln 1.5) - 0.5) * 1024^0.5).
  CHECK(chernoff_bound(0.5, 1024, 0.5) == Catch::Approx(-0.0034165367099225907).margin(1e-15));
  const double delta_fn = 1.5 * std::log1p(0.5) - 0.5;
  CHECK(delta_fn == Catch::Approx(0.10819766216224658).margin(1e-15));
  // Grows toward 1 once the exponential term wins.
  CHECK(chernoff_bound(0.5, 4096, 0.5) > 0.93);
  CHECK(chernoff_bound(0.5, 4096, 0.5) < 1.0);

  CHECK_THROWS_AS(chernoff_bound(0.0, 1024, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(chernoff_bound(1.0, 1024, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(chernoff_bound(0.5, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(chernoff_bound(0.5, 1024, 1.0), std::invalid_argument);
}

TEST_CASE("occupancy_within uses strict two-sided bounds around the mean") {
  GeometryReport rep;
  rep.per_cell_counts = {10, 10, 10, 10};  // mean 10
  CHECK(occupancy_within(rep, 40, 0.5));
  rep.per_cell_counts = {15, 10, 10, 5};  // 15 == (1+0.5)*10 exactly: strict fails
  CHECK_FALSE(occupancy_within(rep, 40, 0.5));
  rep.per_cell_counts = {14, 11, 9, 6};
  CHECK(occupancy_within(rep, 40, 0.5));
  rep.per_cell_counts = {14, 11, 10, 5};  // 5 == (1-0.5)*10 exactly: strict fails
  CHECK_FALSE(occupancy_within(rep, 40, 0.5));
}
