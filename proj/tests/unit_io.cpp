#include <hybridnet/io.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "support.hpp"

using namespace hybridnet;
using nlohmann::json;

namespace {

bool same_double(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return a == b && std::signbit(a) == std::signbit(b);
}

NetworkInstance sample_net() {
  NetworkConfig cfg =
      testsupport::make_config(256, 3.0, 0.25, 0.25, Geometry::extended, 6);
  return generate_network(cfg);
}

}  // namespace

TEST_CASE("shortest-exact double format survives a parse round trip") {
  const std::vector<double> vals = {0.0,
                                    -0.0,
                                    1.0,
                                    0.1,
                                    1.0 / 3.0,
                                    -2.5e-7,
                                    1e300,
                                    5e-324,  // smallest denormal
                                    3.14159265358979312,
                                    std::nan(""),
                                    std::numeric_limits<double>::infinity(),
                                    -std::numeric_limits<double>::infinity()};
  for (const double v : vals) {
    const std::string s = format_double(v);
    CAPTURE(s);
    CHECK(same_double(parse_double(s), v));
    CHECK(format_double(parse_double(s)) == s);
  }
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("12x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("1 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("--3"), std::invalid_argument);
}

TEST_CASE("count parser accepts digits only") {
  CHECK(parse_uint("0") == 0);
  CHECK(parse_uint("123") == 123);
  CHECK(parse_uint("18446744073709551615") == 18446744073709551615ULL);
  CHECK_THROWS_AS(parse_uint(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_uint("-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_uint("12.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_uint("7seven"), std::invalid_argument);
}

TEST_CASE("geometry labels round-trip and reject strangers") {
  CHECK(std::string(to_string(Geometry::dense)) == "dense");
  CHECK(geometry_from_string("extended") == Geometry::extended);
  CHECK(geometry_from_string(to_string(Geometry::dense)) == Geometry::dense);
  CHECK_THROWS_AS(geometry_from_string("spherical"), std::invalid_argument);
}

TEST_CASE("network config JSON carries every field") {
  NetworkConfig cfg = testsupport::make_config(4096, 3.5, 0.4, 0.2,
                                               Geometry::dense, 42);
  cfg.epsilon0 = 0.2;
  cfg.power = 2.0;
  cfg.noise = 0.5;
  cfg.boundary_scale = 1.5;
  const json j = cfg;
  const NetworkConfig back = j.get<NetworkConfig>();
  CHECK(back.n == cfg.n);
  CHECK(back.alpha == cfg.alpha);
  CHECK(back.beta == cfg.beta);
  CHECK(back.gamma == cfg.gamma);
  CHECK(back.epsilon0 == cfg.epsilon0);
  CHECK(back.power == cfg.power);
  CHECK(back.noise == cfg.noise);
  CHECK(back.boundary_scale == cfg.boundary_scale);
  CHECK(back.geometry == cfg.geometry);
  CHECK(back.seed == cfg.seed);

  // Absent keys fall back to the defaults of a fresh config.
  const NetworkConfig sparse = json::object().get<NetworkConfig>();
  const NetworkConfig fresh{};
  CHECK(sparse.n == fresh.n);
  CHECK(sparse.alpha == fresh.alpha);
  CHECK(sparse.geometry == fresh.geometry);
  CHECK(sparse.seed == fresh.seed);

  json bad = cfg;
  bad["geometry"] = "spherical";
  CHECK_THROWS_AS(bad.get<NetworkConfig>(), std::invalid_argument);
}

TEST_CASE("instance JSON round-trips through text exactly") {
  const NetworkInstance net = sample_net();
  const json j = instance_to_json(net);
  const NetworkInstance direct = instance_from_json(j);
  const NetworkInstance texted = instance_from_json(json::parse(j.dump()));
  for (const NetworkInstance* back : {&direct, &texted}) {
    CHECK(back->config.seed == net.config.seed);
    CHECK(back->m == net.m);
    CHECK(back->l == net.l);
    CHECK(back->grid_dim == net.grid_dim);
    CHECK(back->area_side == net.area_side);
    CHECK(back->cell_side == net.cell_side);
    CHECK(back->bs_radius == net.bs_radius);
    CHECK(back->boundary_antennas == net.boundary_antennas);
    REQUIRE(back->nodes.size() == net.nodes.size());
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      CHECK(back->nodes[i].x == net.nodes[i].x);
      CHECK(back->nodes[i].y == net.nodes[i].y);
    }
    REQUIRE(back->antennas.size() == net.antennas.size());
    for (std::size_t i = 0; i < net.antennas.size(); ++i)
      CHECK(back->antennas[i].x == net.antennas[i].x);
    CHECK(back->cell_index == net.cell_index);
    CHECK(back->pairing == net.pairing);
  }
}

TEST_CASE("instance JSON rejects tampered payloads") {
  const NetworkInstance net = sample_net();
  const json good = instance_to_json(net);

  json j = good;
  j["nodes"].erase(0);
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j["bs_centers"].erase(0);
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j["antennas"].erase(0);
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j["cell_index"].erase(0);
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j["cell_index"][0] = net.m;  // out of range
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j["pairing"].erase(0);
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j["pairing"][0] = net.config.n;  // out of range
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j["pairing"][0] = 0;  // fixed point
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j["config"]["alpha"] = 2.0;  // invalid config
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j["nodes"][0] = json::array({1.0});  // not an [x, y] pair
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);

  j = good;
  j.erase("nodes");
  CHECK_THROWS(instance_from_json(j));
}

TEST_CASE("task name lists round-trip") {
  TaskSet t;
  t.ish = t.hc = t.cutset = true;
  const std::vector<std::string> names = task_names(t);
  CHECK(names == std::vector<std::string>{"ish", "hc", "cutset"});
  const TaskSet back = task_set_from_names(names);
  CHECK(back.ish);
  CHECK_FALSE(back.imh);
  CHECK_FALSE(back.mh);
  CHECK(back.hc);
  CHECK(back.cutset);
  CHECK_FALSE(task_set_from_names({}).any());
  CHECK_THROWS_AS(task_set_from_names({"warp"}), std::invalid_argument);
}

TEST_CASE("sweep spec JSON carries tasks and scalars") {
  SweepSpec spec;
  spec.n_values = {64, 128, 256};
  spec.trials_per_n = 3;
  spec.alpha = 4.0;
  spec.beta = 0.5;
  spec.gamma = 0.25;
  spec.epsilon0 = 0.2;
  spec.power = 2.0;
  spec.noise = 400.0;
  spec.boundary_scale = 0.5;
  spec.geometry = Geometry::extended;
  spec.tasks.ish = spec.tasks.cutset = true;
  spec.base_seed = 11;
  spec.symbols = 2;
  spec.cut_epsilon = 0.1;
  const json j = spec;
  const SweepSpec back = j.get<SweepSpec>();
  CHECK(back.n_values == spec.n_values);
  CHECK(back.trials_per_n == spec.trials_per_n);
  CHECK(back.alpha == spec.alpha);
  CHECK(back.noise == spec.noise);
  CHECK(back.geometry == spec.geometry);
  CHECK(back.tasks.ish);
  CHECK(back.tasks.cutset);
  CHECK_FALSE(back.tasks.mh);
  CHECK(back.base_seed == 11);
  CHECK(back.symbols == 2);
  CHECK(back.cut_epsilon == 0.1);

  // Minimal payload: n_values and tasks are required, the rest defaults.
  const json minimal = {{"n_values", {16, 32}}, {"tasks", {"mh"}}};
  const SweepSpec sparse = minimal.get<SweepSpec>();
  CHECK(sparse.n_values == std::vector<std::uint64_t>{16, 32});
  CHECK(sparse.tasks.mh);
  CHECK(sparse.alpha == SweepSpec{}.alpha);
  CHECK_THROWS(json::object().get<SweepSpec>());  // n_values missing

  json bad = j;
  bad["tasks"] = {"warp"};
  CHECK_THROWS_AS(bad.get<SweepSpec>(), std::invalid_argument);
}

TEST_CASE("fit and battery reports expose their fields as JSON") {
  FitResult fit;
  fit.slope = 0.75;
  fit.intercept = -1.5;
  fit.r_squared = 0.99;
  fit.ci95_lo = 0.7;
  fit.ci95_hi = 0.8;
  fit.points_used = 7;
  fit.rows_dropped = 2;
  const json jf = fit;
  CHECK(jf["slope"] == 0.75);
  CHECK(jf["intercept"] == -1.5);
  CHECK(jf["r_squared"] == 0.99);
  CHECK(jf["ci95_lo"] == 0.7);
  CHECK(jf["ci95_hi"] == 0.8);
  CHECK(jf["points_used"] == 7);
  CHECK(jf["rows_dropped"] == 2);

  LemmaReport rep;
  rep.id = "L1";
  rep.pass = true;
  rep.statistic = 0.98;
  rep.threshold = 0.93;
  rep.comparison = ">=";
  rep.detail = "all good";
  const json jr = rep;
  CHECK(jr["id"] == "L1");
  CHECK(jr["pass"] == true);
  CHECK(jr["statistic"] == 0.98);
  CHECK(jr["threshold"] == 0.93);
  CHECK(jr["comparison"] == ">=");
  CHECK(jr["detail"] == "all good");
}

TEST_CASE("regime report JSON names the winner and its handovers") {
  const json j = regime_report_to_json(classify(3.0, 0.4, 0.5));
  CHECK(j["regime"] == "D");
  CHECK(j["best"] == "IMH");
  CHECK(j["exponent"] == Catch::Approx(0.7).margin(1e-15));
  CHECK(j["exponents"]["mh"] == 0.5);
  CHECK(j["exponents"]["hc"] == 0.5);
  REQUIRE(j["boundaries"].size() == 2);
  CHECK(j["boundaries"][0]["alpha"] == Catch::Approx(2.5).margin(1e-15));
  CHECK(j["boundaries"][0]["right"] == "ISH");
  CHECK(j["boundaries"][1]["right"] == "IMH");
  CHECK(j["degenerate"] == false);
}

TEST_CASE("reconcile report JSON omits the bound when it was skipped") {
  ReconcileReport rep;
  rep.alpha = 3.0;
  rep.beta = 0.2;
  rep.gamma = 0.2;
  rep.regime = Regime::a;
  ReconcileEntry e;
  e.scheme = Scheme::mh;
  e.fitted = 0.48;
  e.analytic = 0.5;
  rep.entries.push_back(e);
  rep.best_fitted = Scheme::mh;
  rep.best_fitted_value = 0.48;
  rep.best_analytic = Scheme::mh;
  rep.best_match = true;

  rep.cutset_fitted = kAbsent;
  json j = reconcile_report_to_json(rep);
  CHECK_FALSE(j.contains("cutset_fitted"));
  CHECK_FALSE(j.contains("cutset_consistent"));
  CHECK(j["best_match"] == true);
  CHECK(j["entries"][0]["scheme"] == "MH");
  CHECK(j["entries"][0]["flagged"] == false);

  rep.cutset_fitted = 0.6;
  rep.cutset_consistent = true;
  j = reconcile_report_to_json(rep);
  CHECK(j["cutset_fitted"] == 0.6);
  CHECK(j["cutset_consistent"] == true);
}

TEST_CASE("sweep CSV writes and reads back the identical table") {
  SweepSpec spec;
  spec.n_values = {64, 128};
  spec.trials_per_n = 1;
  spec.alpha = 4.0;
  spec.tasks.mh = true;
  spec.base_seed = 3;
  SweepTable table;
  table.metadata = sweep_metadata(spec);
  table.rows = run_sweep(spec);

  // Add rows exercising the awkward values: NaN columns, a failed row, and
  // a seed needing all 64 bits.
  SweepRow odd;
  odd.n = 256;
  odd.trial = 9;
  odd.seed = 0xfedcba9876543210ULL;
  odd.failed = true;
  odd.imh_sinr = -0.0;
  table.rows.push_back(odd);

  std::ostringstream first;
  write_sweep_csv(first, table);
  std::istringstream in(first.str());
  const SweepTable back = read_sweep_csv(in);

  CHECK(back.metadata == table.metadata);
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const SweepRow& a = table.rows[i];
    const SweepRow& b = back.rows[i];
    CHECK(a.n == b.n);
    CHECK(a.trial == b.trial);
    CHECK(a.seed == b.seed);
    CHECK(a.m == b.m);
    CHECK(a.l == b.l);
    CHECK(a.failed == b.failed);
    for (const char* col : {"ish", "imh", "mh", "hc", "cutset", "cut_t1", "cut_t2",
                            "cut_t3", "cut_d4", "cut_d5", "imh_sinr"})
      CHECK(same_double(sweep_column(a, col), sweep_column(b, col)));
    CHECK(a.imh_sessions == b.imh_sessions);
    CHECK(a.imh_drops == b.imh_drops);
    CHECK(a.mh_pairs == b.mh_pairs);
    CHECK(a.mh_drops == b.mh_drops);
  }

  // Writing the parsed table reproduces the bytes.
  std::ostringstream second;
  write_sweep_csv(second, back);
  CHECK(second.str() == first.str());
}

TEST_CASE("sweep CSV rejects malformed input") {
  SweepTable table;
  table.rows.push_back(SweepRow{});
  std::ostringstream os;
  write_sweep_csv(os, table);
  const std::string good = os.str();

  const auto reject = [](const std::string& text) {
    std::istringstream is(text);
    CHECK_THROWS_AS(read_sweep_csv(is), std::invalid_argument);
  };
  reject("");                                       // no metadata line
  reject("n,trial\n");                              // missing '#'
  reject("# noequals\nn,trial\n");                  // malformed metadata
  reject("#\n");                                    // missing header
  reject("#\nn,trial,seed\n");                      // truncated header
  {
    std::string tampered = good;
    tampered.replace(tampered.find("cutset"), 6, "cutsXt");
    reject(tampered);
  }
  reject(good + "1,2,3\n");                         // short row
  {
    std::string text = good;
    text.replace(text.rfind("0,0\n"), 4, "0,x\n");  // non-numeric count
    reject(text);
  }

  // Metadata tokens must stay machine-splittable.
  SweepTable bad;
  bad.metadata["has space"] = "1";
  std::ostringstream sink;
  CHECK_THROWS_AS(write_sweep_csv(sink, bad), std::invalid_argument);
  SweepTable bad2;
  bad2.metadata["k"] = "a=b";
  CHECK_THROWS_AS(write_sweep_csv(sink, bad2), std::invalid_argument);
}

TEST_CASE("atlas enumerates the admissible grid and round-trips") {
  const Atlas atlas = build_atlas(3.0, 8);
  CHECK(atlas.alpha == 3.0);
  CHECK(atlas.grid == 8);
  std::size_t expected = 0;
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k)
      if (i + k <= 8) ++expected;
  CHECK(atlas.cells.size() == expected);
  for (const AtlasCell& c : atlas.cells) {
    const RegimeReport r = classify(3.0, c.beta, c.gamma);
    CHECK(c.regime == r.regime);
    CHECK(c.best == r.best);
    CHECK(c.exponent == r.best_exponent);
  }
  CHECK_THROWS_AS(build_atlas(2.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_atlas(3.0, 1), std::invalid_argument);

  std::ostringstream os;
  write_atlas_csv(os, atlas);
  std::istringstream is(os.str());
  const Atlas back = read_atlas_csv(is);
  CHECK(back.alpha == atlas.alpha);
  CHECK(back.grid == atlas.grid);
  REQUIRE(back.cells.size() == atlas.cells.size());
  for (std::size_t i = 0; i < atlas.cells.size(); ++i) {
    CHECK(back.cells[i].beta == atlas.cells[i].beta);
    CHECK(back.cells[i].gamma == atlas.cells[i].gamma);
    CHECK(back.cells[i].regime == atlas.cells[i].regime);
    CHECK(back.cells[i].best == atlas.cells[i].best);
    CHECK(back.cells[i].exponent == atlas.cells[i].exponent);
  }
  std::ostringstream again;
  write_atlas_csv(again, back);
  CHECK(again.str() == os.str());
}

TEST_CASE("atlas CSV rejects malformed input") {
  const auto reject = [](const std::string& text) {
    std::istringstream is(text);
    CHECK_THROWS_AS(read_atlas_csv(is), std::invalid_argument);
  };
  reject("");
  reject("beta,gamma\n");
  reject("# alpha=3 grid=4\nwrong,header\n");
  reject("# alpha=3 grid=4 extra=1\nbeta,gamma,regime,best,exponent\n");
  reject("# alpha=3 grid=4\nbeta,gamma,regime,best,exponent\n0,0,A\n");
  reject("# alpha=3 grid=4\nbeta,gamma,regime,best,exponent\n0,0,E,MH,0.5\n");
  reject("# alpha=3 grid=4\nbeta,gamma,regime,best,exponent\n0,0,A,WARP,0.5\n");
  CHECK_THROWS_AS(regime_from_string("E"), std::invalid_argument);
  CHECK(regime_from_string("C") == Regime::c);
}

TEST_CASE("text files round-trip binary content") {
  const std::string path = "/tmp/hybridnet_io_roundtrip.bin";
  std::string payload = "line1\nline2\r\n";
  payload.push_back('\0');
  payload += "tail";
  write_text_file(path, payload);
  CHECK(read_text_file(path) == payload);
  std::remove(path.c_str());

  CHECK_THROWS_AS(read_text_file("/tmp/hybridnet_absent_file_42"), std::runtime_error);
  CHECK_THROWS_AS(write_text_file("/tmp/no_such_dir_42/x", "y"), std::runtime_error);
}
