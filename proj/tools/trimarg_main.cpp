// Copyright 2026
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. JSON results go to stdout (or --out), diagnostics
// to stderr. Exit codes: 0 ok/feasible/biseparable, 2 parse or shape error,
// 3 infeasible/GME-only, 4 undecided, 5 inconsistent marginals, 1 internal.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trimarg/catalog.hpp"
#include "trimarg/compatibility.hpp"
#include "trimarg/correlations.hpp"
#include "trimarg/entanglement.hpp"
#include "trimarg/gme.hpp"
#include "trimarg/io.hpp"
#include "trimarg/triple.hpp"

namespace {

using namespace trimarg;

struct CliOpts {
  std::optional<uint64_t> seed;
  std::optional<long> max_iters;
  std::optional<int> restarts;
  std::optional<double> tol_psd;
  std::string out_path;
};

SolveConfig solve_config(const CliOpts& o) {
  SolveConfig c;
  if (o.seed) c.seed = *o.seed;
  if (o.max_iters) c.max_iters = *o.max_iters;
  if (o.restarts) c.restarts = *o.restarts;
  if (o.tol_psd) c.feas_tol = *o.tol_psd;
  return c;
}

GmeConfig gme_config(const CliOpts& o) {
  GmeConfig c;
  if (o.seed) c.seed = *o.seed;
  if (o.max_iters) c.max_iters = *o.max_iters;
  if (o.restarts) c.restarts = *o.restarts;
  if (o.tol_psd) c.feas_tol = *o.tol_psd;
  return c;
}

int emit(const CliOpts& o, const nlohmann::json& j) {
  const std::string text = dump_json(j) + "\n";
  if (!o.out_path.empty())
    write_text_file(o.out_path, text);
  else
    std::cout << text;
  return 0;
}

nlohmann::json params_from_kv(const std::vector<std::string>& kvs) {
  nlohmann::json p = nlohmann::json::object();
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("--param expects key=value");
    const std::string k = kv.substr(0, eq);
    const std::string v = kv.substr(eq + 1);
    nlohmann::json jv = nlohmann::json::parse(v, nullptr, false);
    if (!jv.is_discarded()) {
      p[k] = jv;
      continue;
    }
    // comma separated numbers make an array
    std::vector<double> nums;
    bool ok = !v.empty();
    std::size_t pos = 0;
    while (ok && pos < v.size()) {
      auto comma = v.find(',', pos);
      if (comma == std::string::npos) comma = v.size();
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(v.substr(pos, comma - pos), &used));
        ok = used == comma - pos;
      } catch (const std::exception&) {
        ok = false;
      }
      pos = comma + 1;
    }
    if (ok && nums.size() > 1)
      p[k] = nums;
    else
      p[k] = v;
  }
  return p;
}

MarginalTriple load_triple(const std::string& path) {
  return triple_or_state_from_json(read_json_file(path));
}

int cmd_analyze(const std::string& path, const CliOpts& o) {
  DensityMatrix rho = state_from_json(read_json_file(path));
  if (rho.dims().sites() != 3) throw ParseError("analyze: need a three-site state");
  CorrelationDecomposition dec = decompose(rho);
  MarginalTriple e = reductions_of(rho);
  nlohmann::json out;
  out["dims"] = rho.dims().dims;
  out["correlations"] = {{"chi_ab_norm", hs_norm(dec.pair_corr[0])},
                         {"chi_ac_norm", hs_norm(dec.pair_corr[1])},
                         {"chi_bc_norm", hs_norm(dec.pair_corr[2])},
                         {"chi_abc_norm", hs_norm(dec.triple_corr)}};
  out["classicality"] = triple_classicality_to_json(classical_triple_check(e));
  out["commutators"] = commutator_to_json(commutator_delta(e));
  const char* cut_names[3] = {"cut_a", "cut_b", "cut_c"};
  nlohmann::json ppt;
  for (int s = 0; s < 3; ++s) {
    PptResult pr = ppt_check(rho, s);
    ppt[cut_names[s]] = {{"is_ppt", pr.is_ppt}, {"min_eig", pr.min_eig}};
  }
  out["ppt"] = ppt;
  auto birank_json = [](const DensityMatrix& red) {
    Birank b = birank(red);
    return nlohmann::json{{"r", b.r}, {"r_gamma", b.r_gamma}};
  };
  out["biranks"] = {{"ab", birank_json(e.ab)},
                    {"ac", birank_json(e.ac)},
                    {"bc", birank_json(e.bc)}};
  return emit(o, out);
}

int cmd_compat(const std::string& path, const CliOpts& o) {
  MarginalTriple e = load_triple(path);
  ConsistencyReport cons = consistency_check(e);
  if (!cons.consistent) {
    emit(o, {{"consistency", consistency_to_json(cons)}});
    return 5;
  }
  FeasibilityOutcome r = solve_feasibility(e, solve_config(o));
  nlohmann::json out = feasibility_to_json(r);
  out["consistency"] = consistency_to_json(cons);
  emit(o, out);
  if (r.verdict == Feasibility::feasible) return 0;
  return r.verdict == Feasibility::infeasible ? 3 : 4;
}

int cmd_classical(const std::string& path, const CliOpts& o) {
  MarginalTriple e = load_triple(path);
  ConsistencyReport cons = consistency_check(e);
  if (!cons.consistent) {
    emit(o, {{"consistency", consistency_to_json(cons)}});
    return 5;
  }
  TripleClassicality tc = classical_triple_check(e);
  CommutatorReport cr = commutator_delta(e);
  nlohmann::json out;
  out["classicality"] = triple_classicality_to_json(tc);
  out["commutators"] = commutator_to_json(cr);
  int code = 0;
  if (!tc.all_cc) {
    out["note"] = "reductions are not all CC; no fully classical completion exists";
  } else if (cr.max_norm > Tol::commutator) {
    out["no_classical_global"] = no_classical_global_certificate(e);
  } else {
    out["no_classical_global"] = false;
    FeasibilityOutcome f = solve_feasibility(e, solve_config(o));
    if (f.verdict == Feasibility::feasible && f.state) {
      out["classical_completion"] = state_to_json(classical_global_completion(e, *f.state));
    } else {
      out["feasibility"] = feasibility_to_json(f);
      code = f.verdict == Feasibility::infeasible ? 3 : 4;
    }
  }
  emit(o, out);
  return code;
}

int cmd_gme(const std::string& path, const CliOpts& o) {
  MarginalTriple e = load_triple(path);
  ConsistencyReport cons = consistency_check(e);
  if (!cons.consistent) {
    emit(o, {{"consistency", consistency_to_json(cons)}});
    return 5;
  }
  FeasibilityOutcome f = solve_feasibility(e, solve_config(o));
  if (f.verdict == Feasibility::infeasible) {
    nlohmann::json out = feasibility_to_json(f);
    out["note"] = "triple admits no state at all";
    emit(o, out);
    return 5;
  }
  GmeCertification cert = certify_only_gme(e, gme_config(o));
  emit(o, certification_to_json(cert));
  switch (cert.outcome.verdict) {
    case GmeVerdict::biseparable_compatible: return 0;
    case GmeVerdict::only_gme: return 3;
    default: return 4;
  }
}

int cmd_scan(const std::string& path, const std::string& mixer_path, bool grid,
             double p_max, double resolution, double step, const std::string& csv_path,
             const CliOpts& o) {
  DensityMatrix sigma = state_from_json(read_json_file(path));
  if (sigma.dims().sites() != 3) throw ParseError("scan: need a three-site state");
  DensityMatrix mixer =
      mixer_path.empty()
          ? DensityMatrix::from(Operator(
                sigma.dims(), Matc(Matc::Identity(sigma.side(), sigma.side()) /
                                   static_cast<double>(sigma.side()))))
          : state_from_json(read_json_file(mixer_path));
  ScanConfig sc;
  sc.bisect = !grid;
  sc.p_max = p_max;
  sc.resolution = resolution;
  sc.grid_step = step;
  sc.gme = gme_config(o);
  RobustnessScanResult r = robustness_scan(sigma, mixer, sc);
  if (!csv_path.empty()) write_text_file(csv_path, scan_to_csv(r));
  emit(o, scan_to_json(r));
  return 0;
}

int cmd_catalog_list(const CliOpts& o) {
  nlohmann::json out;
  out["entries"] = catalog_names();
  return emit(o, out);
}

int cmd_catalog_emit(const std::string& name, const std::vector<std::string>& kvs,
                     const CliOpts& o) {
  CatalogEntry ent = make_by_name(name, params_from_kv(kvs));
  nlohmann::json out;
  out["name"] = ent.name;
  out["params"] = ent.params;
  out["expected"] = ent.expected;
  if (ent.state) out["state"] = state_to_json(*ent.state);
  if (ent.triple)
    out["triple"] = triple_to_json(*ent.triple);
  else if (ent.state)
    out["triple"] = triple_to_json(reductions_of(*ent.state));
  return emit(o, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-body marginal analysis for tripartite states"};
  app.require_subcommand(1);

  CliOpts opts;
  uint64_t seed = 0;
  long max_iters = 0;
  int restarts = 0;
  double tol_psd = 0;
  std::string config_path;
  app.add_option("--seed", seed, "RNG seed for all solvers");
  app.add_option("--max-iters", max_iters, "iteration budget per solve");
  app.add_option("--restarts", restarts, "number of seeded restarts");
  app.add_option("--tol-psd", tol_psd, "spectrum floor tolerance");
  app.add_option("--out", opts.out_path, "write the JSON result to this file");
  app.add_option("--config", config_path, "JSON file with default options");

  std::string in_path, mixer_path, csv_path, cat_name;
  std::vector<std::string> kvs;
  bool grid = false;
  double p_max = 0.5, resolution = 1e-3, step = 0.05;

  CLI::App* analyze = app.add_subcommand("analyze", "decompose a state and report");
  analyze->add_option("input", in_path, "state JSON file")->required();
  CLI::App* compat = app.add_subcommand("compat", "decide marginal compatibility");
  compat->add_option("input", in_path, "triple or state JSON file")->required();
  CLI::App* classical = app.add_subcommand("classical", "classicality and completion");
  classical->add_option("input", in_path, "triple or state JSON file")->required();
  CLI::App* gme = app.add_subcommand("gme-certify", "biseparable split or GME evidence");
  gme->add_option("input", in_path, "triple or state JSON file")->required();
  CLI::App* scan = app.add_subcommand("scan", "noise robustness of the GME verdict");
  scan->add_option("input", in_path, "state JSON file")->required();
  scan->add_option("--mixer", mixer_path, "mixer state JSON (default maximally mixed)");
  scan->add_flag("--grid", grid, "fixed grid instead of bisection");
  scan->add_option("--p-max", p_max, "largest mixing weight scanned");
  scan->add_option("--resolution", resolution, "bisection stopping width");
  scan->add_option("--step", step, "grid step");
  scan->add_option("--csv", csv_path, "also write CSV rows to this file");
  CLI::App* catalog = app.add_subcommand("catalog", "reference constructions");
  catalog->require_subcommand(1);
  CLI::App* cat_list = catalog->add_subcommand("list", "list entry names");
  CLI::App* cat_emit = catalog->add_subcommand("emit", "emit one entry as JSON");
  cat_emit->add_option("name", cat_name, "entry name")->required();
  cat_emit->add_option("--param", kvs, "entry parameter key=value");

  // Let the shared options land after the subcommand as well.
  for (CLI::App* sub : {analyze, compat, classical, gme, scan, catalog, cat_list, cat_emit})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }

  try {
    // config file fills unset options; explicit flags win
    if (!config_path.empty()) {
      nlohmann::json cfg = read_json_file(config_path);
      if (!app.count("--seed") && cfg.contains("seed"))
        opts.seed = cfg.at("seed").get<uint64_t>();
      if (!app.count("--max-iters") && cfg.contains("max_iters"))
        opts.max_iters = cfg.at("max_iters").get<long>();
      if (!app.count("--restarts") && cfg.contains("restarts"))
        opts.restarts = cfg.at("restarts").get<int>();
      if (!app.count("--tol-psd") && cfg.contains("tol_psd"))
        opts.tol_psd = cfg.at("tol_psd").get<double>();
    }
    if (app.count("--seed")) opts.seed = seed;
    if (app.count("--max-iters")) opts.max_iters = max_iters;
    if (app.count("--restarts")) opts.restarts = restarts;
    if (app.count("--tol-psd")) opts.tol_psd = tol_psd;

    if (analyze->parsed()) return cmd_analyze(in_path, opts);
    if (compat->parsed()) return cmd_compat(in_path, opts);
    if (classical->parsed()) return cmd_classical(in_path, opts);
    if (gme->parsed()) return cmd_gme(in_path, opts);
    if (scan->parsed())
      return cmd_scan(in_path, mixer_path, grid, p_max, resolution, step, csv_path, opts);
    if (cat_list->parsed()) return cmd_catalog_list(opts);
    if (cat_emit->parsed()) return cmd_catalog_emit(cat_name, kvs, opts);
    std::cerr << "error: no command\n";
    return 2;
  } catch (const ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return 1;
  }
}
