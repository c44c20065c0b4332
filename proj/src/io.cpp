// Copyright 2026
// SPDX-License-Identifier: Apache-2.0

#include "trimarg/io.hpp"

#include <fstream>
#include <utility>

namespace trimarg {

namespace {

double number_in(const nlohmann::json& j, const char* where) {
  if (!j.is_number()) throw ParseError(std::string(where) + ": expected a number");
  return j.get<double>();
}

std::vector<int> dims_in(const nlohmann::json& j, const char* where) {
  if (!j.is_array() || j.empty())
    throw ParseError(std::string(where) + ": dims must be a non-empty array");
  std::vector<int> dims;
  for (const auto& d : j) {
    if (!d.is_number_integer() || d.get<int>() < 1)
      throw ParseError(std::string(where) + ": dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  return dims;
}

}  // namespace

nlohmann::json matrix_to_json(const Matc& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (long i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (long j = 0; j < m.cols(); ++j)
      row.push_back(nlohmann::json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matc matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw ParseError("matrix: expected a non-empty array of rows");
  const long rows = static_cast<long>(j.size());
  if (!j[0].is_array() || j[0].empty())
    throw ParseError("matrix: rows must be non-empty arrays");
  const long cols = static_cast<long>(j[0].size());
  Matc m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<long>(row.size()) != cols)
      throw ParseError("matrix: ragged rows");
    for (long k = 0; k < cols; ++k) {
      const auto& entry = row[static_cast<std::size_t>(k)];
      if (!entry.is_array() || entry.size() != 2)
        throw ParseError("matrix: entries must be [re, im] pairs");
      m(i, k) = std::complex<double>(number_in(entry[0], "matrix entry"),
                                     number_in(entry[1], "matrix entry"));
    }
  }
  return m;
}

nlohmann::json operator_to_json(const Operator& x) {
  return {{"dims", x.dims.dims}, {"matrix", matrix_to_json(x.mat)}};
}

Operator operator_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("matrix"))
    throw ParseError("operator: expected an object with dims and matrix");
  std::vector<int> dims = dims_in(j["dims"], "operator");
  Matc m = matrix_from_json(j["matrix"]);
  try {
    return Operator(SystemDims(dims), std::move(m));
  } catch (const std::exception& ex) {
    throw ParseError(std::string("operator: ") + ex.what());
  }
}

nlohmann::json state_to_json(const DensityMatrix& rho) {
  return operator_to_json(rho.op);
}

DensityMatrix state_from_json(const nlohmann::json& j) {
  Operator x = operator_from_json(j);
  try {
    return DensityMatrix::from(x);
  } catch (const std::exception& ex) {
    throw ParseError(std::string("state: ") + ex.what());
  }
}

nlohmann::json triple_to_json(const MarginalTriple& e) {
  return {{"dims", e.dims3.dims},
          {"rho_ab", state_to_json(e.ab)},
          {"rho_ac", state_to_json(e.ac)},
          {"rho_bc", state_to_json(e.bc)}};
}

MarginalTriple triple_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rho_ab") || !j.contains("rho_ac") || !j.contains("rho_bc"))
    throw ParseError("triple: expected an object with rho_ab, rho_ac, rho_bc");
  DensityMatrix ab = state_from_json(j["rho_ab"]);
  DensityMatrix ac = state_from_json(j["rho_ac"]);
  DensityMatrix bc = state_from_json(j["rho_bc"]);
  MarginalTriple e = [&] {
    try {
      return MarginalTriple(std::move(ab), std::move(ac), std::move(bc));
    } catch (const std::exception& ex) {
      throw ParseError(std::string("triple: ") + ex.what());
    }
  }();
  if (j.contains("dims") && dims_in(j["dims"], "triple") != e.dims3.dims)
    throw ParseError("triple: declared dims disagree with the reductions");
  return e;
}

MarginalTriple triple_or_state_from_json(const nlohmann::json& j) {
  if (j.is_object() && j.contains("rho_ab")) return triple_from_json(j);
  DensityMatrix rho = state_from_json(j);
  if (rho.dims().sites() != 3)
    throw ParseError("state: expected three sites to reduce to a marginal triple");
  return reductions_of(rho);
}

nlohmann::json witness_to_json(const CompatibilityWitness& w) {
  return {{"W", operator_to_json(w.w)},
          {"affine_value", w.affine_value},
          {"psd_bound", w.psd_bound},
          {"margin", w.margin}};
}

CompatibilityWitness witness_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("W"))
    throw ParseError("witness: expected an object with W");
  CompatibilityWitness w{operator_from_json(j["W"]), 0.0, 0.0, 0.0};
  w.affine_value = number_in(j.value("affine_value", nlohmann::json()), "witness affine_value");
  w.psd_bound = number_in(j.value("psd_bound", nlohmann::json()), "witness psd_bound");
  w.margin = number_in(j.value("margin", nlohmann::json()), "witness margin");
  return w;
}

nlohmann::json consistency_to_json(const ConsistencyReport& r) {
  return {{"consistent", r.consistent},
          {"residuals", {r.residuals[0], r.residuals[1], r.residuals[2]}}};
}

nlohmann::json classicality_to_json(const ClassicalityReport& r) {
  nlohmann::json j{{"is_cq", r.is_cq}, {"is_cc", r.is_cc}, {"residual", r.residual}};
  if (r.bases) {
    nlohmann::json sites = nlohmann::json::array();
    for (const auto& u : r.bases->site_bases) sites.push_back(matrix_to_json(u));
    j["bases"] = std::move(sites);
  }
  return j;
}

nlohmann::json triple_classicality_to_json(const TripleClassicality& r) {
  return {{"ab", classicality_to_json(r.reports[0])},
          {"ac", classicality_to_json(r.reports[1])},
          {"bc", classicality_to_json(r.reports[2])},
          {"all_cc", r.all_cc}};
}

nlohmann::json commutator_to_json(const CommutatorReport& r) {
  return {{"delta_norms", {r.delta_norms[0], r.delta_norms[1], r.delta_norms[2]}},
          {"max_norm", r.max_norm}};
}

std::string feasibility_name(Feasibility v) {
  switch (v) {
    case Feasibility::feasible: return "feasible";
    case Feasibility::infeasible: return "infeasible";
    default: return "undecided";
  }
}

std::string gme_verdict_name(GmeVerdict v) {
  switch (v) {
    case GmeVerdict::biseparable_compatible: return "biseparable_compatible";
    case GmeVerdict::only_gme: return "only_gme";
    default: return "undecided";
  }
}

nlohmann::json feasibility_to_json(const FeasibilityOutcome& r) {
  nlohmann::json j{{"verdict", feasibility_name(r.verdict)},
                   {"gap", r.gap},
                   {"iterations", r.iterations}};
  if (r.state) j["state"] = state_to_json(*r.state);
  if (r.witness) j["witness"] = witness_to_json(*r.witness);
  return j;
}

nlohmann::json gme_outcome_to_json(const GMEOutcome& r) {
  nlohmann::json j{{"verdict", gme_verdict_name(r.verdict)},
                   {"gap", r.gap},
                   {"restarts_agreeing", r.restarts_agreeing},
                   {"iterations", r.iterations}};
  if (r.state) j["state"] = state_to_json(*r.state);
  if (r.parts) {
    j["parts"] = {{"a", operator_to_json(r.parts->a)},
                  {"b", operator_to_json(r.parts->b)},
                  {"c", operator_to_json(r.parts->c)}};
    // The parts witness feasibility of the split relaxation; they do not by
    // themselves certify biseparability of the assembled state.
    j["label"] = "relaxation-feasible";
  }
  return j;
}

nlohmann::json certification_to_json(const GmeCertification& r) {
  nlohmann::json fin = nlohmann::json::array();
  for (const auto& f : r.checks.finiteness)
    fin.push_back(nlohmann::json::array({f[0], f[1]}));
  return {{"only_gme", r.only_gme},
          {"outcome", gme_outcome_to_json(r.outcome)},
          {"checks",
           {{"finiteness", std::move(fin)},
            {"birank_ab", {{"r", r.checks.ab.r}, {"r_gamma", r.checks.ab.r_gamma}}},
            {"birank_bc", {{"r", r.checks.bc.r}, {"r_gamma", r.checks.bc.r_gamma}}},
            {"rank_b", r.checks.rank_b},
            {"bc_pattern", r.checks.bc_pattern},
            {"ab_asymmetric", r.checks.ab_asymmetric}}}};
}

nlohmann::json dbs_to_json(const DbsEstimate& r) {
  return {{"value", r.value}, {"stable", r.stable}, {"label", r.label}};
}

nlohmann::json scan_to_json(const RobustnessScanResult& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"p", p.p}, {"verdict", gme_verdict_name(p.verdict)}, {"gap", p.gap}});
  return {{"p_bar", r.p_bar}, {"points", std::move(pts)}};
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("short write to " + path);
}

std::string dump_json(const nlohmann::json& j) {
  // nlohmann objects keep keys sorted, so dump(2) is canonical byte for byte.
  return j.dump(2);
}

}  // namespace trimarg
