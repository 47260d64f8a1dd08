#include <hybridnet/routing.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "support.hpp"

using namespace hybridnet;
using testsupport::make_config;
using testsupport::make_grid_instance;

namespace {

// Single-cell network (m = 1) over a given extent with explicit nodes; the
// routing grid is independent of the BS grid, so this isolates it.
NetworkInstance flat_net(double extent, std::vector<Vec2> nodes, double alpha = 3.0) {
  return make_grid_instance(1, extent, std::move(nodes), {{extent / 2, extent / 2}}, alpha, 1.0,
                            1.0);
}

}  // namespace

TEST_CASE("routing grid side is sqrt(2 log2 n) and covers the area") {
  auto cfg = make_config(1024, 3.0, 0.5, 0.0, Geometry::extended, 3);
  const NetworkInstance net = generate_network(cfg);
  const RoutingGrid grid = build_routing_grid(net);
  CHECK(grid.side == Catch::Approx(std::sqrt(20.0)).epsilon(1e-15));
  CHECK(grid.dim == static_cast<std::uint32_t>(std::ceil(32.0 / std::sqrt(20.0))));
  CHECK(grid.color.size() == static_cast<std::size_t>(grid.dim) * grid.dim);
  CHECK(grid.members.size() == grid.color.size());

  std::size_t member_total = 0;
  for (const auto& ms : grid.members) member_total += ms.size();
  CHECK(member_total == net.nodes.size());
}

TEST_CASE("colors follow the 3x3 reuse pattern") {
  auto net = flat_net(40.0, {{1.0, 1.0}});
  net.config.n = 1024;  // grid side sqrt(20), dim ceil(40/4.472) = 9
  const RoutingGrid grid = build_routing_grid(net);
  REQUIRE(grid.dim == 9);
  for (std::uint32_t cy = 0; cy < grid.dim; ++cy)
    for (std::uint32_t cx = 0; cx < grid.dim; ++cx)
      CHECK(grid.color[cy * grid.dim + cx] == (cx % 3) + 3 * (cy % 3));
  // Same color iff both coordinates agree mod 3.
  CHECK(grid.color[0] == grid.color[3]);
  CHECK(grid.color[0] == grid.color[3 * grid.dim]);
  CHECK(grid.color[0] != grid.color[1]);
}

TEST_CASE("relays are the nodes nearest their routing-cell centers") {
  auto cfg = make_config(256, 3.0, 0.5, 0.0, Geometry::extended, 9);
  const NetworkInstance net = generate_network(cfg);
  const RoutingGrid grid = build_routing_grid(net);
  for (std::size_t c = 0; c < grid.members.size(); ++c) {
    if (grid.members[c].empty()) {
      CHECK(grid.relay[c] == -1);
      continue;
    }
    REQUIRE(grid.relay[c] >= 0);
    const Vec2 center{(static_cast<double>(c % grid.dim) + 0.5) * grid.side,
                      (static_cast<double>(c / grid.dim) + 0.5) * grid.side};
    const double chosen = dist2(net.nodes[static_cast<std::size_t>(grid.relay[c])], center);
    for (const std::uint32_t i : grid.members[c]) CHECK(chosen <= dist2(net.nodes[i], center));
  }
}

TEST_CASE("l_path walks horizontally first, then vertically") {
  auto net = flat_net(40.0, {{1.0, 1.0}});
  net.config.n = 1024;
  const RoutingGrid grid = build_routing_grid(net);  // dim 9
  const std::uint32_t d = grid.dim;

  // (1,1) -> (4,3): columns 1..4 on row 1, then rows 1..3 on column 4.
  const auto path = l_path(grid, 1 * d + 1, 3 * d + 4);
  const std::vector<std::uint32_t> expect = {1 * d + 1, 1 * d + 2, 1 * d + 3, 1 * d + 4,
                                             2 * d + 4, 3 * d + 4};
  CHECK(path == expect);

  // Reverse direction walks left and up.
  const auto rev = l_path(grid, 3 * d + 4, 1 * d + 1);
  const std::vector<std::uint32_t> expect_rev = {3 * d + 4, 3 * d + 3, 3 * d + 2, 3 * d + 1,
                                                 2 * d + 1, 1 * d + 1};
  CHECK(rev == expect_rev);

  CHECK(l_path(grid, 5, 5) == std::vector<std::uint32_t>{5});
  CHECK_THROWS_AS(l_path(grid, d * d, 0), std::invalid_argument);
}

TEST_CASE("routes hop between true endpoints and intermediate relays") {
  // Four nodes -> routing side sqrt(2 * log2 4) = 2, dim ceil(10/2) = 5.
  // The source sits in cell (0,0), the destination in cell (3,0), and every
  // intermediate column cell holds exactly one node (its relay).
  const double s = 2.0;
  auto net = flat_net(10.0, {{0.5 * s, 0.5 * s},
                             {1.5 * s, 0.4 * s},
                             {2.5 * s, 0.6 * s},
                             {3.5 * s, 0.5 * s}});
  const RoutingGrid grid = build_routing_grid(net);
  REQUIRE(grid.side == Catch::Approx(2.0).epsilon(1e-15));
  REQUIRE(grid.dim == 5);

  const auto route = build_route(net, grid, 0, 3);
  REQUIRE(route.has_value());
  REQUIRE(route->size() == 3);
  CHECK((*route)[0].tx_uid == 0);
  CHECK((*route)[0].rx_uid == 1);
  CHECK((*route)[0].tx_cell == 0);
  CHECK((*route)[1].tx_uid == 1);
  CHECK((*route)[1].rx_uid == 2);
  CHECK((*route)[1].tx_cell == 1);
  CHECK((*route)[2].tx_uid == 2);
  CHECK((*route)[2].rx_uid == 3);
  CHECK((*route)[2].tx_cell == 2);
  // Chain continuity: each hop starts where the previous one landed.
  for (std::size_t i = 0; i + 1 < route->size(); ++i)
    CHECK((*route)[i].rx_uid == (*route)[i + 1].tx_uid);
}

TEST_CASE("same-cell endpoints yield a single direct hop") {
  const double s = std::sqrt(2.0);
  auto net = flat_net(10.0, {{0.3 * s, 0.5 * s}, {0.7 * s, 0.5 * s}});
  const RoutingGrid grid = build_routing_grid(net);
  const auto route = build_route(net, grid, 0, 1);
  REQUIRE(route.has_value());
  REQUIRE(route->size() == 1);
  CHECK((*route)[0].tx_uid == 0);
  CHECK((*route)[0].rx_uid == 1);
}

TEST_CASE("adjacent-cell endpoints need no relay") {
  const double s = std::sqrt(2.0);
  auto net = flat_net(10.0, {{0.5 * s, 0.5 * s}, {1.5 * s, 0.5 * s}});
  const RoutingGrid grid = build_routing_grid(net);
  const auto route = build_route(net, grid, 0, 1);
  REQUIRE(route.has_value());
  CHECK(route->size() == 1);
}

TEST_CASE("routes through empty relay cells are refused") {
  const double s = std::sqrt(2.0);
  // Intermediate cell (1,0) holds no node.
  auto net = flat_net(10.0, {{0.5 * s, 0.5 * s}, {2.5 * s, 0.5 * s}});
  const RoutingGrid grid = build_routing_grid(net);
  CHECK_FALSE(build_route(net, grid, 0, 1).has_value());
}

TEST_CASE("phase hop rates: lone hop at unit distance and unit power is one bit") {
  const double s = std::sqrt(2.0);
  auto net = flat_net(10.0, {{0.2 * s, 0.5 * s}, {0.2 * s + 1.0, 0.5 * s}});
  net.config.noise = 1.0;
  const RoutingGrid grid = build_routing_grid(net);
  const auto route = build_route(net, grid, 0, 1);
  REQUIRE(route.has_value());
  const PhaseRates pr = phase_hop_rates(net, grid, {*route}, 1.0);
  REQUIRE(pr.rates.size() == 1);
  REQUIRE(pr.rates[0].size() == 1);
  CHECK(pr.rates[0][0] == Catch::Approx(1.0).epsilon(1e-15));  // log2(1 + 1/1)
  CHECK(pr.interference.mean_power == 0.0);
  CHECK(pr.interference.samples == 1);
}

TEST_CASE("only same-color concurrent cells interfere") {
  // Six nodes -> routing side sqrt(2 * log2 6).
  const double s = std::sqrt(2.0 * std::log2(6.0));
  // Route A transmits from cell (0,0); route B from cell (3,0) — same color
  // (3 mod 3 == 0) — and route C from cell (1,0), a different color.
  auto net = flat_net(12.0, {{0.5 * s, 0.5 * s}, {0.9 * s, 0.5 * s},    // A: src, dst
                             {3.5 * s, 0.5 * s}, {3.9 * s, 0.5 * s},    // B
                             {1.5 * s, 0.5 * s}, {1.9 * s, 0.5 * s}});  // C
  net.config.noise = 1.0;
  net.config.alpha = 4.0;
  const RoutingGrid grid = build_routing_grid(net);
  const auto ra = build_route(net, grid, 0, 1);
  const auto rb = build_route(net, grid, 2, 3);
  const auto rc = build_route(net, grid, 4, 5);
  REQUIRE((ra && rb && rc));

  const PhaseRates pr = phase_hop_rates(net, grid, {*ra, *rb, *rc}, 1.0);
  REQUIRE(pr.rates.size() == 3);

  // Route A's receiver at node 1 hears only route B's transmitter (node 2).
  const double d_ab = dist(net.nodes[2], net.nodes[1]);
  const double want_i = std::pow(d_ab, -4.0);
  const double d_sig = dist(net.nodes[0], net.nodes[1]);
  const double want_rate = std::log2(1.0 + std::pow(d_sig, -4.0) / (1.0 + want_i));
  CHECK(pr.rates[0][0] == Catch::Approx(want_rate).epsilon(1e-13));

  // Interference stats cover all three hop receivers.
  CHECK(pr.interference.samples == 3);
  CHECK(pr.interference.max_power > 0.0);

  CHECK_THROWS_AS(phase_hop_rates(net, grid, {*ra}, 0.0), std::invalid_argument);
}

TEST_CASE("cell_load counts transmitting hops per cell") {
  const double s = 2.0;  // routing side for four nodes
  auto net = flat_net(10.0, {{0.5 * s, 0.5 * s},
                             {1.5 * s, 0.4 * s},
                             {2.5 * s, 0.6 * s},
                             {3.5 * s, 0.5 * s}});
  const RoutingGrid grid = build_routing_grid(net);
  const auto route = build_route(net, grid, 0, 3);
  REQUIRE(route.has_value());
  const auto load = cell_load(grid, {*route, *route});
  CHECK(load[0] == 2);
  CHECK(load[1] == 2);
  CHECK(load[2] == 2);
  CHECK(load[3] == 0);
  std::uint64_t total = 0;
  for (const auto v : load) total += v;
  CHECK(total == 6);
}
