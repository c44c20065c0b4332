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

#ifndef TRIMARG_CORRELATIONS_HPP
#define TRIMARG_CORRELATIONS_HPP

#include <array>
#include <optional>

#include "trimarg/core.hpp"
#include "trimarg/triple.hpp"

namespace trimarg {

/// Split of a three-site state into product part, two-body correlation terms
/// and the irreducible three-body remainder:
///   rho = rA (x) rB (x) rC
///       + chi_AB (x) 1/dC + chi_AC (x) 1/dB + chi_BC (x) 1/dA + chi_ABC
/// with chi_jk = rho_jk - rho_j (x) rho_k. Every chi term is traceless over
/// each of its sites.
struct CorrelationDecomposition {
  std::array<Operator, 3> singles;    // A, B, C
  std::array<Operator, 3> pair_corr;  // chi_AB, chi_AC, chi_BC (bipartite)
  Operator triple_corr;               // chi_ABC (three-site)
  SystemDims dims3;
};

CorrelationDecomposition decompose(const DensityMatrix& rho);

/// Exact inverse of decompose.
Operator recompose(const CorrelationDecomposition& d);

/// Recompose with the three-body term replaced by zero.
Operator recompose_zero3(const std::array<Operator, 3>& singles,
                         const std::array<Operator, 3>& pair_corr,
                         const SystemDims& dims3);

/// Orthogonal projection onto operators supported on at most two sites
/// (identity padding on the rest), and its complement.
Operator lower_order_projection(const Operator& x);
Operator three_body_component(const Operator& x);

// ---------------------------------------------------------------------------
// Classicality.

struct ClassicalityReport {
  bool is_cq = false;  // diagonal blocks along the first site
  bool is_cc = false;  // diagonal in a full product basis
  std::optional<ProductBasis> bases;  // populated when is_cc
  double residual = 0;  // off-diagonal mass in the best basis found
};

/// Decide whether a bipartite state is classical on its first site (CQ) or on
/// both (CC). Works by checking that the conditional operators commute, then
/// dephasing in their joint eigenbasis and measuring what is left.
ClassicalityReport classicality_bipartite(const DensityMatrix& rho);

struct TripleClassicality {
  std::array<ClassicalityReport, 3> reports;  // AB, AC, BC
  bool all_cc = false;
};

TripleClassicality classical_triple_check(const MarginalTriple& e);

/// The three pairwise commutators of embedded reductions sharing one site:
/// pivot A pairs AB with AC, pivot B pairs AB with BC, pivot C pairs AC with BC.
struct CommutatorReport {
  std::array<double, 3> delta_norms{};  // pivots A, B, C
  double max_norm = 0;
};

CommutatorReport commutator_delta(const MarginalTriple& e);

/// For an all-CC triple: true when the commutators certify that no fully
/// classical global state can have these reductions. Throws unless all three
/// reductions are CC.
bool no_classical_global_certificate(const MarginalTriple& e);

/// Jointly diagonalize the per-site conditional operators of both reductions
/// touching each site. For an all-CC triple with vanishing commutators this is
/// a product basis that makes all three reductions diagonal at once.
ProductBasis common_classical_basis(const MarginalTriple& e);

/// Dephase a compatible state in the common classical basis. The result is
/// fully classical and keeps the marginals. Throws when the commutators do not
/// vanish or when the dephased state fails to reproduce the marginals.
DensityMatrix classical_global_completion(const MarginalTriple& e,
                                          const DensityMatrix& rho);

/// Conditional operators of a bipartite state on the kept side, one per
/// element of a Hermitian operator basis of the other side.
std::vector<Matc> conditional_operators(const DensityMatrix& rho, int keep_side);

/// Orthonormal Hermitian basis of d x d operators.
std::vector<Matc> hermitian_basis(int d);

}  // namespace trimarg

#endif  // TRIMARG_CORRELATIONS_HPP
