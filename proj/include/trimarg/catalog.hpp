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

#ifndef TRIMARG_CATALOG_HPP
#define TRIMARG_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trimarg/core.hpp"
#include "trimarg/triple.hpp"

namespace trimarg {

/// A named reference construction. Triple-only entries leave `state` empty;
/// state entries can always derive their triple. `expected` records the
/// properties the construction is supposed to have, each with an origin tag
/// ("closed_form" when an exact expression pins it, "computed" when a
/// numerical oracle does); the test suite re-verifies every one of them.
struct CatalogEntry {
  std::string name;
  nlohmann::json params;
  std::optional<DensityMatrix> state;
  std::optional<MarginalTriple> triple;
  nlohmann::json expected;
};

/// (|000> + |111>)/sqrt(2) as a projector.
CatalogEntry make_ghz();

/// Three-qubit mixture of two-local Pauli words:
/// (1/8)(1 + q 1 s1 s1 + q s2 1 s2 + q s3 s3 1), |q| <= 1/sqrt(3).
/// All two-body reductions are classical, each in a different product basis.
CatalogEntry make_pauli_mix(double q);

/// Rank-two three-qubit state (2/3)|xi><xi| + (1/3)|111><111| with
/// xi = |010>/2 + |100>/2 + |001>/sqrt(2). Its reductions force genuine
/// multipartite entanglement on every compatible state.
CatalogEntry make_rank2_gme();

/// Qudit extension on (d+1)^3: weights[0] times the rank-two state embedded in
/// the qubit block plus weights[m-1] |mmm><mmm| for m = 2..d.
CatalogEntry make_gme_family(int d, const std::vector<double>& weights);

/// All three reductions equal p|00><00| + (1-p)|aa><aa| with
/// |a> = (|0> + |1>)/sqrt(2); the only compatible state is
/// p|000><000| + (1-p)|aaa><aaa|.
CatalogEntry make_unique_separable(double p);

/// Symmetric classical two-qubit triple: AB computational with weights
/// (p, 1/2-p) on (equal, different), BC in basis {b_i} (x) computational with
/// weights (q, 1/2-q), AC in bases {a_i} (x) {c_i} with weights (r, 1/2-r).
/// All bases must be real. Ships the zero-three-body candidate whose
/// positivity decides compatibility for this family.
CatalogEntry make_cc_symmetric(double p, double q, double r,
                               const Eigen::Matrix2d& basis_a,
                               const Eigen::Matrix2d& basis_b,
                               const Eigen::Matrix2d& basis_c);

/// The parameter point and bases whose candidate reproduces the q = -1/sqrt(3)
/// member of the Pauli mixture family up to the stored local unitaries.
CatalogEntry make_cc_symmetric_default();

/// weights[0] times the rank-two state plus weights[i] |a_i a_i b_i><...| for
/// product pairs |a_i, b_i> inside both the range of the BC reduction and the
/// range of its partial transpose, a_i real. Defaults to the pair
/// (1,1)/sqrt(2) (x) (sqrt(1/3), sqrt(2/3)). Reductions still force GME.
CatalogEntry make_gme_mixture(const std::vector<double>& weights,
                              const std::vector<std::pair<Vecc, Vecc>>& pairs = {});

/// (1-p) sigma + p mixer.
CatalogEntry make_noisy_mix(const DensityMatrix& sigma, const DensityMatrix& mixer,
                            double p);

std::vector<std::string> catalog_names();

/// Build an entry by name with JSON params (missing keys get the defaults the
/// functions above use). Throws on unknown names or bad params.
CatalogEntry make_by_name(const std::string& name, const nlohmann::json& params);

}  // namespace trimarg

#endif  // TRIMARG_CATALOG_HPP
