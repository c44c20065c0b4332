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

#ifndef TRIMARG_COMPATIBILITY_HPP
#define TRIMARG_COMPATIBILITY_HPP

#include <optional>
#include <vector>

#include "trimarg/core.hpp"
#include "trimarg/triple.hpp"

namespace trimarg {

/// The unique three-site operator with the given reductions and zero
/// three-body correlation term. Unit trace and correct marginals by
/// construction; positivity is exactly what it does not promise.
Operator candidate_zero3body(const MarginalTriple& e);

/// Orthogonal projection onto the affine set {X Hermitian : reductions = e}:
/// keeps the three-body component of X, replaces everything below by what the
/// marginals dictate.
Operator project_affine(const Operator& x, const MarginalTriple& e);

/// Hyperplane certificate for an empty compatibility set: <W, .> equals
/// affine_value on the whole marginal-matching affine set while every density
/// matrix scores at least psd_bound = lmin(W). margin > 0 separates the sets.
struct CompatibilityWitness {
  Operator w;  // unit Hilbert-Schmidt norm, three-body component removed
  double affine_value = 0;
  double psd_bound = 0;
  double margin = 0;
};

struct SolveConfig {
  long max_iters = 50000;
  int restarts = 20;
  uint64_t seed = 42;
  double feas_tol = Tol::psd;        // eigenvalue floor for "this iterate is a state"
  int stag_window = 500;             // gap stagnation window (iterations)
  double stag_rtol = 1e-12;          // relative gap change treated as stagnant
  double witness_min_margin = 1e-10;
};

enum class Feasibility { feasible, infeasible, undecided };

struct FeasibilityOutcome {
  Feasibility verdict = Feasibility::undecided;
  std::optional<DensityMatrix> state;          // feasible only
  std::optional<CompatibilityWitness> witness; // infeasible only
  double gap = 0;      // Hilbert-Schmidt distance between the two projection tracks
  long iterations = 0;
};

/// Alternating projections with Dykstra correction between the affine
/// marginal set and the density-matrix set. Starts from the zero-three-body
/// candidate, then from seeded random starts if the first pass stays undecided.
FeasibilityOutcome solve_feasibility(const MarginalTriple& e,
                                     const SolveConfig& cfg = {});

/// Same loop from one explicit starting operator (no restart sweep).
FeasibilityOutcome solve_feasibility_from(const Operator& start,
                                          const MarginalTriple& e,
                                          const SolveConfig& cfg = {});

/// Build a witness from the two converged projection tracks. Empty when the
/// direction degenerates or the margin does not verify.
std::optional<CompatibilityWitness> witness_from_gap(const Operator& psd_point,
                                                     const Operator& affine_point,
                                                     const MarginalTriple& e,
                                                     double min_margin = 1e-10);

/// Recompute every witness invariant from scratch; true is a proof that no
/// state has the reductions e.
bool verify_witness(const CompatibilityWitness& w, const MarginalTriple& e);

/// Summed squared Hilbert-Schmidt distances between the reductions of rho and
/// the triple.
double distance_D(const DensityMatrix& rho, const MarginalTriple& e);

struct UniquenessProbe {
  std::vector<DensityMatrix> states;  // converged feasible limits
  double max_pairwise = 0;
  int n_starts = 0;
};

/// Run the feasibility solver from n random starts and report how far the
/// limits spread. Evidence about uniqueness, not a certificate.
UniquenessProbe uniqueness_probe(const MarginalTriple& e, int n_starts,
                                 uint64_t seed, const SolveConfig& cfg = {});

}  // namespace trimarg

#endif  // TRIMARG_COMPATIBILITY_HPP
