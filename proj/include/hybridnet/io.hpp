#pragma once
// Serialization: JSON for configs, instances, experiment specs, and reports;
// CSV for sweep tables and the scheme atlas. Every writer has a matching
// reader, and writing what a reader produced reproduces the bytes exactly
// (doubles print as shortest-exact %.17g).

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridnet/common.hpp"
#include "hybridnet/config.hpp"
#include "hybridnet/harness.hpp"
#include "hybridnet/netgen.hpp"
#include "hybridnet/regimes.hpp"

namespace hybridnet {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

inline double parse_double(const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || static_cast<std::size_t>(end - begin) != tok.size())
    throw std::invalid_argument("not a number: '" + tok + "'");
  return v;
}

inline std::uint64_t parse_uint(const std::string& tok) {
  if (tok.empty() || tok[0] == '-') throw std::invalid_argument("not a count: '" + tok + "'");
  const char* begin = tok.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || static_cast<std::size_t>(end - begin) != tok.size())
    throw std::invalid_argument("not a count: '" + tok + "'");
  return v;
}

// --------------------------------------------------------------------------
// JSON: configs and instances
// --------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const NetworkConfig& c) {
  j = nlohmann::json{{"n", c.n},
                     {"alpha", c.alpha},
                     {"beta", c.beta},
                     {"gamma", c.gamma},
                     {"epsilon0", c.epsilon0},
                     {"power", c.power},
                     {"noise", c.noise},
                     {"boundary_scale", c.boundary_scale},
                     {"geometry", to_string(c.geometry)},
                     {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, NetworkConfig& c) {
  c = NetworkConfig{};
  c.n = j.value("n", c.n);
  c.alpha = j.value("alpha", c.alpha);
  c.beta = j.value("beta", c.beta);
  c.gamma = j.value("gamma", c.gamma);
  c.epsilon0 = j.value("epsilon0", c.epsilon0);
  c.power = j.value("power", c.power);
  c.noise = j.value("noise", c.noise);
  c.boundary_scale = j.value("boundary_scale", c.boundary_scale);
  c.geometry = geometry_from_string(j.value("geometry", std::string("extended")));
  c.seed = j.value("seed", c.seed);
}

namespace detail {

inline nlohmann::json points_to_json(const std::vector<Vec2>& pts) {
  nlohmann::json a = nlohmann::json::array();
  for (const Vec2& p : pts) a.push_back(nlohmann::json::array({p.x, p.y}));
  return a;
}

inline std::vector<Vec2> points_from_json(const nlohmann::json& a) {
  if (!a.is_array()) throw std::invalid_argument("instance: point list must be an array");
  std::vector<Vec2> out;
  out.reserve(a.size());
  for (const auto& e : a) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("instance: point entries must be [x, y]");
    out.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return out;
}

}  // namespace detail

inline nlohmann::json instance_to_json(const NetworkInstance& net) {
  nlohmann::json j;
  j["config"] = net.config;
  j["nodes"] = detail::points_to_json(net.nodes);
  j["bs_centers"] = detail::points_to_json(net.bs_centers);
  j["antennas"] = detail::points_to_json(net.antennas);
  j["cell_index"] = net.cell_index;
  j["pairing"] = net.pairing;
  return j;
}

// Rebuilds the derived scalars from the embedded config and validates that
// the stored arrays are mutually consistent with it.
inline NetworkInstance instance_from_json(const nlohmann::json& j) {
  NetworkInstance net;
  net.config = j.at("config").get<NetworkConfig>();
  validate(net.config);
  net.area_side = area_side(net.config);
  net.m = bs_count(net.config);
  net.l = antennas_per_bs(net.config);
  net.grid_dim = bs_grid_dim(net.config);
  net.cell_side = cell_side(net.config);
  net.bs_radius = bs_radius(net.config);
  net.boundary_antennas = std::min<std::uint64_t>(net.l, boundary_capacity(net.config));
  net.nodes = detail::points_from_json(j.at("nodes"));
  net.bs_centers = detail::points_from_json(j.at("bs_centers"));
  net.antennas = detail::points_from_json(j.at("antennas"));
  net.cell_index = j.at("cell_index").get<std::vector<std::uint32_t>>();
  net.pairing = j.at("pairing").get<std::vector<std::uint32_t>>();
  if (net.nodes.size() != net.config.n)
    throw std::invalid_argument("instance: nodes array does not match n");
  if (net.bs_centers.size() != net.m)
    throw std::invalid_argument("instance: bs_centers array does not match the BS count");
  if (net.antennas.size() != net.m * net.l)
    throw std::invalid_argument("instance: antennas array does not match m*l");
  if (net.cell_index.size() != net.nodes.size())
    throw std::invalid_argument("instance: cell_index size does not match nodes");
  if (net.pairing.size() != net.nodes.size())
    throw std::invalid_argument("instance: pairing size does not match nodes");
  for (const std::uint32_t c : net.cell_index)
    if (c >= net.m) throw std::invalid_argument("instance: cell_index out of range");
  for (std::size_t i = 0; i < net.pairing.size(); ++i) {
    if (net.pairing[i] >= net.nodes.size())
      throw std::invalid_argument("instance: pairing out of range");
    if (net.pairing.size() > 1 && net.pairing[i] == i)
      throw std::invalid_argument("instance: pairing must have no fixed points");
  }
  return net;
}

// --------------------------------------------------------------------------
// JSON: experiment specs and reports
// --------------------------------------------------------------------------

inline std::vector<std::string> task_names(const TaskSet& t) {
  std::vector<std::string> out;
  if (t.ish) out.push_back("ish");
  if (t.imh) out.push_back("imh");
  if (t.mh) out.push_back("mh");
  if (t.hc) out.push_back("hc");
  if (t.cutset) out.push_back("cutset");
  return out;
}

inline TaskSet task_set_from_names(const std::vector<std::string>& names) {
  TaskSet t;
  for (const std::string& s : names) {
    if (s == "ish") t.ish = true;
    else if (s == "imh") t.imh = true;
    else if (s == "mh") t.mh = true;
    else if (s == "hc") t.hc = true;
    else if (s == "cutset") t.cutset = true;
    else throw std::invalid_argument("unknown task name: " + s);
  }
  return t;
}

inline void to_json(nlohmann::json& j, const SweepSpec& s) {
  j = nlohmann::json{{"n_values", s.n_values},
                     {"trials_per_n", s.trials_per_n},
                     {"alpha", s.alpha},
                     {"beta", s.beta},
                     {"gamma", s.gamma},
                     {"epsilon0", s.epsilon0},
                     {"power", s.power},
                     {"noise", s.noise},
                     {"boundary_scale", s.boundary_scale},
                     {"geometry", to_string(s.geometry)},
                     {"tasks", task_names(s.tasks)},
                     {"base_seed", s.base_seed},
                     {"symbols", s.symbols},
                     {"cut_epsilon", s.cut_epsilon}};
}

inline void from_json(const nlohmann::json& j, SweepSpec& s) {
  s = SweepSpec{};
  s.n_values = j.at("n_values").get<std::vector<std::uint64_t>>();
  s.trials_per_n = j.value("trials_per_n", s.trials_per_n);
  s.alpha = j.value("alpha", s.alpha);
  s.beta = j.value("beta", s.beta);
  s.gamma = j.value("gamma", s.gamma);
  s.epsilon0 = j.value("epsilon0", s.epsilon0);
  s.power = j.value("power", s.power);
  s.noise = j.value("noise", s.noise);
  s.boundary_scale = j.value("boundary_scale", s.boundary_scale);
  s.geometry = geometry_from_string(j.value("geometry", std::string("extended")));
  s.tasks = task_set_from_names(j.at("tasks").get<std::vector<std::string>>());
  s.base_seed = j.value("base_seed", s.base_seed);
  s.symbols = j.value("symbols", s.symbols);
  s.cut_epsilon = j.value("cut_epsilon", s.cut_epsilon);
}

inline void to_json(nlohmann::json& j, const FitResult& f) {
  j = nlohmann::json{{"slope", f.slope},
                     {"intercept", f.intercept},
                     {"r_squared", f.r_squared},
                     {"ci95_lo", f.ci95_lo},
                     {"ci95_hi", f.ci95_hi},
                     {"points_used", f.points_used},
                     {"rows_dropped", f.rows_dropped}};
}

inline void to_json(nlohmann::json& j, const LemmaReport& r) {
  j = nlohmann::json{{"id", r.id},
                     {"pass", r.pass},
                     {"statistic", r.statistic},
                     {"threshold", r.threshold},
                     {"comparison", r.comparison},
                     {"detail", r.detail}};
}

inline nlohmann::json regime_report_to_json(const RegimeReport& r) {
  nlohmann::json j;
  j["regime"] = to_string(r.regime);
  j["best"] = scheme_label(r.best);
  j["exponent"] = r.best_exponent;
  j["exponents"] = nlohmann::json{{"ish", r.exponents.ish},
                                  {"imh", r.exponents.imh},
                                  {"mh", r.exponents.mh},
                                  {"hc", r.exponents.hc}};
  nlohmann::json bounds = nlohmann::json::array();
  for (const RegimeBoundary& b : r.boundaries)
    bounds.push_back(nlohmann::json{{"alpha", b.alpha}, {"right", scheme_label(b.right)}});
  j["boundaries"] = bounds;
  j["degenerate"] = r.degenerate;
  return j;
}

inline nlohmann::json reconcile_report_to_json(const ReconcileReport& r) {
  nlohmann::json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["gamma"] = r.gamma;
  j["regime"] = to_string(r.regime);
  nlohmann::json entries = nlohmann::json::array();
  for (const ReconcileEntry& e : r.entries)
    entries.push_back(nlohmann::json{{"scheme", scheme_label(e.scheme)},
                                     {"fitted", e.fitted},
                                     {"analytic", e.analytic},
                                     {"flagged", e.flagged}});
  j["entries"] = entries;
  if (std::isfinite(r.cutset_fitted)) {
    j["cutset_fitted"] = r.cutset_fitted;
    j["cutset_consistent"] = r.cutset_consistent;
  }
  j["best_fitted"] = scheme_label(r.best_fitted);
  j["best_fitted_value"] = r.best_fitted_value;
  j["best_analytic"] = scheme_label(r.best_analytic);
  j["best_match"] = r.best_match;
  return j;
}

// --------------------------------------------------------------------------
// CSV: sweep tables
// --------------------------------------------------------------------------

struct SweepTable {
  std::map<std::string, std::string> metadata;  // sorted; one '#' line
  std::vector<SweepRow> rows;
};

inline std::map<std::string, std::string> sweep_metadata(const SweepSpec& spec) {
  std::map<std::string, std::string> meta;
  meta["alpha"] = format_double(spec.alpha);
  meta["beta"] = format_double(spec.beta);
  meta["gamma"] = format_double(spec.gamma);
  meta["epsilon0"] = format_double(spec.epsilon0);
  meta["power"] = format_double(spec.power);
  meta["noise"] = format_double(spec.noise);
  meta["boundary_scale"] = format_double(spec.boundary_scale);
  meta["geometry"] = to_string(spec.geometry);
  meta["base_seed"] = std::to_string(spec.base_seed);
  meta["symbols"] = std::to_string(spec.symbols);
  meta["trials_per_n"] = std::to_string(spec.trials_per_n);
  meta["cut_epsilon"] = format_double(spec.cut_epsilon);
  std::string tasks;
  for (const std::string& t : task_names(spec.tasks)) {
    if (!tasks.empty()) tasks += "+";
    tasks += t;
  }
  meta["tasks"] = tasks;
  return meta;
}

inline const std::vector<std::string>& sweep_csv_columns() {
  static const std::vector<std::string> cols = {
      "n",      "trial",  "seed",   "m",        "l",            "failed",
      "ish",    "imh",    "mh",     "hc",       "cutset",       "cut_t1",
      "cut_t2", "cut_t3", "cut_d4", "cut_d5",   "imh_sinr",     "imh_sessions",
      "imh_drops", "mh_pairs", "mh_drops"};
  return cols;
}

inline void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "#";
  for (const auto& [k, v] : table.metadata) {
    if (k.empty() || k.find_first_of("=, \t\n") != std::string::npos ||
        v.find_first_of("=, \t\n") != std::string::npos)
      throw std::invalid_argument("csv metadata must be nonempty tokens free of '=', ',', and whitespace");
    os << " " << k << "=" << v;
  }
  os << "\n";
  const auto& cols = sweep_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const SweepRow& r : table.rows) {
    os << r.n << "," << r.trial << "," << r.seed << "," << r.m << "," << r.l << ","
       << (r.failed ? 1 : 0) << "," << format_double(r.ish) << "," << format_double(r.imh)
       << "," << format_double(r.mh) << "," << format_double(r.hc) << ","
       << format_double(r.cutset) << "," << format_double(r.cut_t1) << ","
       << format_double(r.cut_t2) << "," << format_double(r.cut_t3) << ","
       << format_double(r.cut_d4) << "," << format_double(r.cut_d5) << ","
       << format_double(r.imh_sinr) << "," << r.imh_sessions << "," << r.imh_drops << ","
       << r.mh_pairs << "," << r.mh_drops << "\n";
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline SweepTable read_sweep_csv(std::istream& is) {
  SweepTable table;
  std::string line;
  if (!std::getline(is, line) || line.empty() || line[0] != '#')
    throw std::invalid_argument("sweep csv: missing '#' metadata line");
  std::istringstream meta(line.substr(1));
  std::string tok;
  while (meta >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("sweep csv: malformed metadata token '" + tok + "'");
    table.metadata[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  if (!std::getline(is, line)) throw std::invalid_argument("sweep csv: missing header row");
  const auto header = detail::split_csv_line(line);
  const auto& cols = sweep_csv_columns();
  if (header != cols) throw std::invalid_argument("sweep csv: unexpected header row");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != cols.size())
      throw std::invalid_argument("sweep csv: row has wrong field count");
    SweepRow r;
    r.n = parse_uint(f[0]);
    r.trial = static_cast<std::uint32_t>(parse_uint(f[1]));
    r.seed = parse_uint(f[2]);
    r.m = parse_uint(f[3]);
    r.l = parse_uint(f[4]);
    r.failed = parse_uint(f[5]) != 0;
    r.ish = parse_double(f[6]);
    r.imh = parse_double(f[7]);
    r.mh = parse_double(f[8]);
    r.hc = parse_double(f[9]);
    r.cutset = parse_double(f[10]);
    r.cut_t1 = parse_double(f[11]);
    r.cut_t2 = parse_double(f[12]);
    r.cut_t3 = parse_double(f[13]);
    r.cut_d4 = parse_double(f[14]);
    r.cut_d5 = parse_double(f[15]);
    r.imh_sinr = parse_double(f[16]);
    r.imh_sessions = parse_uint(f[17]);
    r.imh_drops = parse_uint(f[18]);
    r.mh_pairs = parse_uint(f[19]);
    r.mh_drops = parse_uint(f[20]);
    table.rows.push_back(std::move(r));
  }
  return table;
}

// --------------------------------------------------------------------------
// CSV: the (beta, gamma) -> best-scheme atlas at fixed alpha
// --------------------------------------------------------------------------

struct AtlasCell {
  double beta = 0.0;
  double gamma = 0.0;
  Regime regime = Regime::a;
  Scheme best = Scheme::mh;
  double exponent = 0.0;
};

struct Atlas {
  double alpha = 0.0;
  std::uint32_t grid = 0;
  std::vector<AtlasCell> cells;  // admissible grid points only, row-major
};

inline Atlas build_atlas(double alpha, std::uint32_t grid) {
  if (!(alpha > 2.0)) throw std::invalid_argument("atlas: alpha must be > 2");
  if (grid < 2) throw std::invalid_argument("atlas: grid must be >= 2");
  Atlas atlas;
  atlas.alpha = alpha;
  atlas.grid = grid;
  for (std::uint32_t i = 0; i < grid; ++i) {
    for (std::uint32_t k = 0; k < grid; ++k) {
      const double beta = static_cast<double>(i) / grid;
      const double gamma = static_cast<double>(k) / grid;
      if (beta + gamma > 1.0) continue;  // infrastructure cannot outgrow the nodes
      const RegimeReport r = classify(alpha, beta, gamma);
      atlas.cells.push_back({beta, gamma, r.regime, r.best, r.best_exponent});
    }
  }
  return atlas;
}

inline void write_atlas_csv(std::ostream& os, const Atlas& atlas) {
  os << "# alpha=" << format_double(atlas.alpha) << " grid=" << atlas.grid << "\n";
  os << "beta,gamma,regime,best,exponent\n";
  for (const AtlasCell& c : atlas.cells)
    os << format_double(c.beta) << "," << format_double(c.gamma) << "," << to_string(c.regime)
       << "," << scheme_label(c.best) << "," << format_double(c.exponent) << "\n";
}

inline Regime regime_from_string(const std::string& s) {
  if (s == "A") return Regime::a;
  if (s == "B") return Regime::b;
  if (s == "C") return Regime::c;
  if (s == "D") return Regime::d;
  throw std::invalid_argument("unknown regime label: " + s);
}

inline Atlas read_atlas_csv(std::istream& is) {
  Atlas atlas;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# alpha=", 0) != 0)
    throw std::invalid_argument("atlas csv: missing metadata line");
  std::istringstream meta(line.substr(1));
  std::string tok;
  while (meta >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("atlas csv: malformed metadata");
    const std::string key = tok.substr(0, eq);
    if (key == "alpha") atlas.alpha = parse_double(tok.substr(eq + 1));
    else if (key == "grid") atlas.grid = static_cast<std::uint32_t>(parse_uint(tok.substr(eq + 1)));
    else throw std::invalid_argument("atlas csv: unknown metadata key '" + key + "'");
  }
  if (!std::getline(is, line) || line != "beta,gamma,regime,best,exponent")
    throw std::invalid_argument("atlas csv: unexpected header row");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 5) throw std::invalid_argument("atlas csv: row has wrong field count");
    AtlasCell c;
    c.beta = parse_double(f[0]);
    c.gamma = parse_double(f[1]);
    c.regime = regime_from_string(f[2]);
    c.best = scheme_from_string(f[3]);
    c.exponent = parse_double(f[4]);
    atlas.cells.push_back(c);
  }
  return atlas;
}

// --------------------------------------------------------------------------
// Whole-file helpers
// --------------------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

}  // namespace hybridnet
