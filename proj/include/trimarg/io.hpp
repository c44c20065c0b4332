// Copyright 2026 The trimarg developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRIMARG_IO_HPP
#define TRIMARG_IO_HPP

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "trimarg/compatibility.hpp"
#include "trimarg/core.hpp"
#include "trimarg/correlations.hpp"
#include "trimarg/gme.hpp"
#include "trimarg/triple.hpp"

namespace trimarg {

/// Malformed or inconsistent input (bad JSON, wrong shapes, non-physical
/// matrices). CLI maps this to its own exit code, distinct from internal
/// errors.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrices serialize as row-major nested arrays of [re, im] pairs. States and
// plain operators share the layout {"dims": [...], "matrix": [...]}; a triple
// is {"dims": [dA, dB, dC], "rho_ab": ..., "rho_ac": ..., "rho_bc": ...}.

nlohmann::json matrix_to_json(const Matc& m);
Matc matrix_from_json(const nlohmann::json& j);

nlohmann::json operator_to_json(const Operator& op);
Operator operator_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const nlohmann::json& j);

nlohmann::json triple_to_json(const MarginalTriple& e);
MarginalTriple triple_from_json(const nlohmann::json& j);

/// Accepts either a triple document or a tripartite state document (reduced on
/// the spot). The presence of "rho_ab" selects the triple layout.
MarginalTriple triple_or_state_from_json(const nlohmann::json& j);

nlohmann::json witness_to_json(const CompatibilityWitness& w);
CompatibilityWitness witness_from_json(const nlohmann::json& j);

nlohmann::json consistency_to_json(const ConsistencyReport& r);
nlohmann::json classicality_to_json(const ClassicalityReport& r);
nlohmann::json triple_classicality_to_json(const TripleClassicality& r);
nlohmann::json commutator_to_json(const CommutatorReport& r);
nlohmann::json feasibility_to_json(const FeasibilityOutcome& r);
nlohmann::json gme_outcome_to_json(const GMEOutcome& r);
nlohmann::json certification_to_json(const GmeCertification& r);
nlohmann::json dbs_to_json(const DbsEstimate& r);
nlohmann::json scan_to_json(const RobustnessScanResult& r);

std::string feasibility_name(Feasibility v);
std::string gme_verdict_name(GmeVerdict v);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Serialize with a fixed layout (2-space indent, sorted keys) so equal
/// documents print byte-identically.
std::string dump_json(const nlohmann::json& j);

}  // namespace trimarg

#endif  // TRIMARG_IO_HPP
