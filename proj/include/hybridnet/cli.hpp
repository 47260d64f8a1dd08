#pragma once
// Command-line front end: eight verbs over the library. Parse errors exit 1,
// runtime or numerical failures exit 2, success exits 0. All randomness flows
// from --seed, so a rerun with identical flags writes identical bytes.

#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hybridnet/channel.hpp"
#include "hybridnet/config.hpp"
#include "hybridnet/cutset.hpp"
#include "hybridnet/harness.hpp"
#include "hybridnet/io.hpp"
#include "hybridnet/netgen.hpp"
#include "hybridnet/protocols.hpp"
#include "hybridnet/regimes.hpp"

namespace hybridnet::cli {

inline void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_text_file(path, content);
  }
}

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct NetFlags {
  NetworkConfig cfg;
  std::string geometry = "extended";
  NetworkConfig resolve() const {
    NetworkConfig out = cfg;
    out.geometry = geometry_from_string(geometry);
    validate(out);
    return out;
  }
};

inline void add_network_flags(CLI::App* cmd, NetFlags& nf) {
  cmd->add_option("--n", nf.cfg.n, "node count")->required();
  cmd->add_option("--alpha", nf.cfg.alpha, "path-loss exponent, > 2")->capture_default_str();
  cmd->add_option("--beta", nf.cfg.beta, "infrastructure-count exponent in [0, 1)")
      ->capture_default_str();
  cmd->add_option("--gamma", nf.cfg.gamma, "antennas-per-station exponent in [0, 1)")
      ->capture_default_str();
  cmd->add_option("--epsilon0", nf.cfg.epsilon0,
                  "antenna-disk radius as a fraction of cell side, in (0, 0.25]")
      ->capture_default_str();
  cmd->add_option("--power", nf.cfg.power, "per-node transmit power")->capture_default_str();
  cmd->add_option("--noise", nf.cfg.noise, "receiver noise power")->capture_default_str();
  cmd->add_option("--boundary-scale", nf.cfg.boundary_scale,
                  "boundary antenna budget multiplier")
      ->capture_default_str();
  cmd->add_option("--geometry", nf.geometry, "dense | extended")->capture_default_str();
  cmd->add_option("--seed", nf.cfg.seed, "seed controlling all randomness")
      ->capture_default_str();
}

inline nlohmann::json interference_to_json(const InterferenceStat& s) {
  return nlohmann::json{{"mean_power", s.mean_power},
                        {"max_power", s.max_power},
                        {"samples", s.samples}};
}

inline nlohmann::json protocol_result_to_json(const NetworkConfig& cfg, const ProtocolResult& r) {
  nlohmann::json j;
  j["config"] = cfg;
  j["scheme"] = scheme_label(r.scheme);
  j["total_throughput"] = r.total_throughput;
  j["access_total"] = r.access_total;
  j["exit_total"] = r.exit_total;
  j["active_pairs"] = r.active_pairs;
  j["route_failures"] = r.route_failures;
  j["median_hop_sinr"] = r.median_hop_sinr;
  j["uplink_interference"] = interference_to_json(r.uplink_interference);
  j["downlink_interference"] = interference_to_json(r.downlink_interference);
  return j;
}

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"hybrid wireless network scaling toolkit"};
  app.require_subcommand(1);

  // generate --------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "sample a network instance and write it as JSON");
  NetFlags gen_net;
  std::string gen_out = "-";
  add_network_flags(generate, gen_net);
  generate->add_option("--out", gen_out, "output path, '-' for stdout")->capture_default_str();

  // simulate ---------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "run one transmission scheme on a sampled instance");
  NetFlags sim_net;
  std::string sim_scheme;
  std::string sim_out = "-";
  std::uint64_t sim_symbols = 1;
  std::uint64_t sim_probes = 32;
  unsigned sim_threads = 0;
  add_network_flags(simulate, sim_net);
  simulate->add_option("--scheme", sim_scheme, "ish | imh | mh")->required();
  simulate->add_option("--symbols", sim_symbols, "fading draws to average")->capture_default_str();
  simulate->add_option("--probes", sim_probes, "max interference probe points per cell (ish)")
      ->capture_default_str();
  simulate->add_option("--threads", sim_threads, "worker cap, 0 = auto")->capture_default_str();
  simulate->add_option("--out", sim_out, "output path, '-' for stdout")->capture_default_str();

  // classify ---------------------------------------------------------------
  auto* classify_cmd = app.add_subcommand("classify", "report the operating regime and best scheme");
  double cls_alpha = 0.0, cls_beta = 0.0, cls_gamma = 0.0;
  std::string cls_out = "-";
  classify_cmd->add_option("--alpha", cls_alpha, "path-loss exponent, > 2")->required();
  classify_cmd->add_option("--beta", cls_beta, "infrastructure-count exponent")->required();
  classify_cmd->add_option("--gamma", cls_gamma, "antennas-per-station exponent")->required();
  classify_cmd->add_option("--out", cls_out, "output path, '-' for stdout")->capture_default_str();

  // atlas -------------------------------------------------------------------
  auto* atlas_cmd = app.add_subcommand("atlas", "map (beta, gamma) to the best scheme at fixed alpha");
  double atl_alpha = 0.0;
  std::uint32_t atl_grid = 50;
  std::string atl_out = "-";
  atlas_cmd->add_option("--alpha", atl_alpha, "path-loss exponent, > 2")->required();
  atlas_cmd->add_option("--grid", atl_grid, "grid resolution per axis")->capture_default_str();
  atlas_cmd->add_option("--out", atl_out, "output path, '-' for stdout")->capture_default_str();

  // cutset -------------------------------------------------------------------
  auto* cutset_cmd = app.add_subcommand("cutset", "evaluate the information-flow upper bound on one instance");
  NetFlags cut_net;
  std::string cut_out = "-";
  std::uint64_t cut_symbols = 1;
  double cut_eps = 0.05;
  std::uint64_t cut_f3_samples = 0;
  bool cut_direct = false;
  add_network_flags(cutset_cmd, cut_net);
  cutset_cmd->add_option("--symbols", cut_symbols, "fading draws to average")->capture_default_str();
  cutset_cmd->add_option("--cut-epsilon", cut_eps, "slack exponent on the residual term")
      ->capture_default_str();
  cutset_cmd->add_option("--f3-samples", cut_f3_samples,
                         "also report the normalized cut-matrix norm statistic over this many draws");
  cutset_cmd->add_flag("--direct", cut_direct,
                       "also evaluate the direct MIMO bound (dense linear algebra, n <= 1024)");
  cutset_cmd->add_option("--out", cut_out, "output path, '-' for stdout")->capture_default_str();

  // sweep ---------------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment file and write a CSV table plus JSON summary");
  std::string swp_spec, swp_out, swp_summary;
  unsigned swp_threads = 0;
  sweep_cmd->add_option("--spec", swp_spec, "experiment JSON path")->required();
  sweep_cmd->add_option("--out", swp_out, "CSV output path")->required();
  sweep_cmd->add_option("--summary", swp_summary, "summary JSON path (default: <out>.summary.json)");
  sweep_cmd->add_option("--threads", swp_threads, "worker cap, 0 = auto")->capture_default_str();

  // verify -----------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "run the statistical verification battery");
  std::vector<std::string> ver_ids;
  LemmaParams ver_params;
  std::string ver_json;
  bool ver_strict = false;
  verify_cmd->add_option("--lemma", ver_ids, "check ids among L1 L3 L5 L6 L7 L8 (default: all)");
  verify_cmd->add_option("--seeds", ver_params.seeds, "seeds per check, 0 = per-check default")
      ->capture_default_str();
  verify_cmd->add_option("--base-seed", ver_params.base_seed, "base seed")->capture_default_str();
  verify_cmd->add_option("--delta0", ver_params.delta0, "occupancy / traffic slack in (0, 1)")
      ->capture_default_str();
  verify_cmd->add_option("--epsilon1", ver_params.epsilon1, "distance-floor exponent margin")
      ->capture_default_str();
  verify_cmd->add_option("--threads", ver_params.threads, "worker cap, 0 = auto")
      ->capture_default_str();
  verify_cmd->add_option("--json", ver_json, "also write the reports as JSON to this path");
  verify_cmd->add_flag("--strict", ver_strict, "exit 2 if any check fails");

  // reconcile ----------------------------------------------------------------
  auto* rec_cmd = app.add_subcommand("reconcile", "fit measured exponents and compare with the analytic ones");
  ReconcileParams rec;
  std::string rec_out;
  bool rec_no_cutset = false;
  rec_cmd->add_option("--alpha", rec.alpha, "path-loss exponent, > 2")->required();
  rec_cmd->add_option("--beta", rec.beta, "infrastructure-count exponent")->required();
  rec_cmd->add_option("--gamma", rec.gamma, "antennas-per-station exponent")->required();
  rec_cmd->add_option("--epsilon0", rec.epsilon0, "antenna-disk ratio")->capture_default_str();
  rec_cmd->add_option("--n", rec.n_values, "node counts, strictly increasing")
      ->capture_default_str();
  rec_cmd->add_option("--trials", rec.trials_per_n, "trials per node count")->capture_default_str();
  rec_cmd->add_option("--base-seed", rec.base_seed, "base seed")->capture_default_str();
  rec_cmd->add_option("--symbols", rec.symbols, "fading draws to average")->capture_default_str();
  rec_cmd->add_option("--ish-noise", rec.presets.ish, "noise preset for the array-gain scheme")
      ->capture_default_str();
  rec_cmd->add_option("--imh-noise", rec.presets.imh, "noise preset for infrastructure multihop")
      ->capture_default_str();
  rec_cmd->add_option("--mh-noise", rec.presets.mh, "noise preset for pure multihop")
      ->capture_default_str();
  rec_cmd->add_option("--cutset-noise", rec.presets.cutset, "noise preset for the upper bound")
      ->capture_default_str();
  rec_cmd->add_option("--tol", rec.flag_tol, "|fitted - analytic| flag tolerance")
      ->capture_default_str();
  rec_cmd->add_option("--cut-slack", rec.cut_slack, "allowed bound shortfall under the best fit")
      ->capture_default_str();
  rec_cmd->add_flag("--no-cutset", rec_no_cutset, "skip the upper-bound sweep");
  rec_cmd->add_option("--threads", rec.threads, "worker cap, 0 = auto")->capture_default_str();
  rec_cmd->add_option("--out", rec_out, "also write the report as JSON to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(generate)) {
      const NetworkConfig cfg = gen_net.resolve();
      emit(gen_out, dump_json(instance_to_json(generate_network(cfg))));
      return 0;
    }

    if (app.got_subcommand(simulate)) {
      const NetworkConfig cfg = sim_net.resolve();
      const Scheme scheme = scheme_from_string(sim_scheme);
      const NetworkInstance net = generate_network(cfg);
      ProtocolResult result;
      const unsigned workers = sim_threads == 0 ? thread_budget() : sim_threads;
      switch (scheme) {
        case Scheme::ish: result = ish_throughput(net, sim_symbols, workers, sim_probes); break;
        case Scheme::imh: result = imh_throughput(net); break;
        case Scheme::mh: result = mh_throughput(net); break;
        default: throw std::invalid_argument("simulate: scheme must be ish, imh, or mh");
      }
      emit(sim_out, dump_json(protocol_result_to_json(cfg, result)));
      return 0;
    }

    if (app.got_subcommand(classify_cmd)) {
      emit(cls_out, dump_json(regime_report_to_json(classify(cls_alpha, cls_beta, cls_gamma))));
      return 0;
    }

    if (app.got_subcommand(atlas_cmd)) {
      std::ostringstream os;
      write_atlas_csv(os, build_atlas(atl_alpha, atl_grid));
      emit(atl_out, os.str());
      return 0;
    }

    if (app.got_subcommand(cutset_cmd)) {
      const NetworkConfig cfg = cut_net.resolve();
      const NetworkInstance net = generate_network(cfg);
      const CutPartition cut = build_cut(net);
      const CutsetResult res = cutset_total(net, cut_symbols, cut_eps);
      nlohmann::json j;
      j["config"] = cfg;
      j["cut_x"] = cut.cut_x;
      j["sources_left"] = cut.sources_left.size();
      j["d1"] = cut.d1.size();
      j["d2"] = cut.d2.size();
      j["d3"] = cut.d3.size();
      j["d3_far_right"] = cut.d3_far_right_count;
      j["t1"] = res.t1;
      j["t2"] = res.t2;
      j["t3"] = res.t3;
      j["d4_sum"] = res.d4_sum;
      j["d5_sum"] = res.d5_sum;
      j["epsilon"] = res.epsilon;
      j["total"] = res.total;
      if (cut_direct) j["direct"] = direct_cut_capacity(net, cut, cut_symbols);
      if (cut_f3_samples > 0) j["f3_norm"] = f3_norm_stat(net, cut, cut_f3_samples);
      emit(cut_out, dump_json(j));
      return 0;
    }

    if (app.got_subcommand(sweep_cmd)) {
      const SweepSpec spec =
          nlohmann::json::parse(read_text_file(swp_spec)).get<SweepSpec>();
      const std::vector<SweepRow> rows = run_sweep(spec, swp_threads);
      SweepTable table;
      table.metadata = sweep_metadata(spec);
      table.rows = rows;
      std::ostringstream os;
      write_sweep_csv(os, table);
      emit(swp_out, os.str());
      nlohmann::json summary;
      summary["spec"] = spec;
      summary["rows"] = rows.size();
      std::uint64_t failed = 0;
      for (const SweepRow& r : rows) failed += r.failed ? 1 : 0;
      summary["failed_rows"] = failed;
      nlohmann::json fits = nlohmann::json::object();
      for (const std::string& col : task_names(spec.tasks)) {
        try {
          fits[col] = fit_exponent(rows, col);
        } catch (const std::exception& e) {
          fits[col] = nlohmann::json{{"error", e.what()}};
        }
      }
      summary["fits"] = fits;
      const std::string summary_path =
          swp_summary.empty() ? swp_out + ".summary.json" : swp_summary;
      emit(summary_path, dump_json(summary));
      return 0;
    }

    if (app.got_subcommand(verify_cmd)) {
      std::vector<std::string> ids = ver_ids;
      if (ids.empty()) ids = {"L1", "L3", "L5", "L6", "L7", "L8"};
      nlohmann::json reports = nlohmann::json::array();
      bool all_pass = true;
      for (const std::string& id : ids) {
        const LemmaReport rep = verify_lemma(id, ver_params);
        all_pass = all_pass && rep.pass;
        std::cout << (rep.pass ? "[PASS] " : "[FAIL] ") << rep.id
                  << " statistic=" << rep.statistic << " vs " << rep.comparison << " "
                  << rep.threshold << " — " << rep.detail << "\n";
        reports.push_back(rep);
      }
      if (!ver_json.empty()) emit(ver_json, dump_json(reports));
      return all_pass || !ver_strict ? 0 : 2;
    }

    if (app.got_subcommand(rec_cmd)) {
      rec.with_cutset = !rec_no_cutset;
      const ReconcileReport rep = reconcile(rec);
      std::ostringstream os;
      os << "regime " << to_string(rep.regime) << "  best(analytic) "
         << scheme_label(rep.best_analytic) << "  best(fitted) " << scheme_label(rep.best_fitted)
         << "  match " << (rep.best_match ? "yes" : "NO") << "\n";
      os << "scheme  fitted      analytic    flag\n";
      for (const ReconcileEntry& e : rep.entries) {
        char line[96];
        std::snprintf(line, sizeof line, "%-7s %-11.4f %-11.4f %s\n",
                      scheme_label(e.scheme).c_str(), e.fitted, e.analytic,
                      e.flagged ? "DIVERGES" : "");
        os << line;
      }
      if (std::isfinite(rep.cutset_fitted)) {
        os << "bound fitted " << rep.cutset_fitted << " vs best fitted " << rep.best_fitted_value
           << " - " << rec.cut_slack << " -> "
           << (rep.cutset_consistent ? "consistent" : "INCONSISTENT") << "\n";
      }
      std::cout << os.str();
      if (!rec_out.empty()) emit(rec_out, dump_json(reconcile_report_to_json(rep)));
      return 0;
    }

    throw std::logic_error("no verb dispatched");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hybridnet::cli
