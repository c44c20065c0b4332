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

#ifndef TRIMARG_ENTANGLEMENT_HPP
#define TRIMARG_ENTANGLEMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "trimarg/compatibility.hpp"
#include "trimarg/core.hpp"
#include "trimarg/triple.hpp"

namespace trimarg {

struct PptResult {
  bool is_ppt = false;
  double min_eig = 0;
};

/// Partial transpose across the cut that isolates `cut_site`, then check the
/// spectrum floor.
PptResult ppt_check(const DensityMatrix& rho, int cut_site, double tol = Tol::psd);

/// (rank rho, rank rho^Gamma) of a bipartite state. The same for either
/// transposed side.
struct Birank {
  int r = 0;
  int r_gamma = 0;
};

Birank birank(const DensityMatrix& rho);

/// PPT decides separability only when the product of the two dims is <= 6;
/// throws outside that regime.
bool separable_small(const DensityMatrix& rho);

struct ProductSearchResult {
  double best_residual = 1;
  std::vector<Vecc> best_vectors;  // one per site
  bool found = false;              // best_residual below threshold
  int restarts = 0;
};

/// Seeded alternating search for a product vector inside the range of rho.
/// Residual is <v|(1 - P_range)|v> for the best unit product vector found.
ProductSearchResult product_in_range(const DensityMatrix& rho, int restarts,
                                     uint64_t seed, double found_tol = 1e-10);

/// True when no two-dimensional subspace H of the `side` factor admits |x> on
/// the other factor with H (x) |x> inside the range of rho. Exact
/// linear-algebra test when the `side` factor is a qubit; seeded heuristic
/// otherwise (minimizing the two smallest eigenvalues of the contracted range
/// complement).
bool a_finite_check(const DensityMatrix& rho, int side, int restarts = 20,
                    uint64_t seed = 42);

/// Invariance of a three-site state under every single-site partial transpose.
/// For such states PSD means separability across every bipartition.
bool pt_invariant_biseparable(const DensityMatrix& rho, double tol = 1e-10);

/// Dephase a compatible state on the pivot site in the shared classical basis
/// of the two pivot-adjacent reductions. Output is classical on the pivot
/// (hence biseparable) and keeps all three reductions. Throws when the two
/// reductions have no common pivot basis.
DensityMatrix cq_dephase_completion(const MarginalTriple& e, const DensityMatrix& rho,
                                    int pivot);

/// For a triple whose AB reduction is maximally correlated
/// (sum_i r_i |a_i b_i><a_i b_i| with orthonormal a's and b's): pinch a
/// compatible state with the |a_i b_i> projectors. Output is fully separable
/// and keeps all three reductions. Throws when AB is not of that form.
DensityMatrix maxcorr_dephase_completion(const MarginalTriple& e,
                                         const DensityMatrix& rho);

struct CompletionResult {
  bool success = false;
  std::string route;  // which construction fired
  std::optional<DensityMatrix> state;
  std::string message;
};

/// For a compatible all-classical two-qubit triple, construct a biseparable
/// state with those reductions. Dispatches between the pivot-dephasing route,
/// the maximally-correlated route and the symmetric-family candidate route
/// after a local-unitary normal form search. Never returns a wrong state: on
/// any mismatch the result reports failure instead.
CompletionResult biseparable_completion_cc_qubits(const MarginalTriple& e,
                                                  const SolveConfig& cfg = {});

}  // namespace trimarg

#endif  // TRIMARG_ENTANGLEMENT_HPP
