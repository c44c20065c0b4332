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

#ifndef TRIMARG_GME_HPP
#define TRIMARG_GME_HPP

#include <optional>
#include <string>
#include <vector>

#include "trimarg/core.hpp"
#include "trimarg/entanglement.hpp"
#include "trimarg/triple.hpp"

namespace trimarg {

struct GmeConfig {
  long max_iters = 20000;
  int restarts = 10;
  uint64_t seed = 42;
  double feas_tol = Tol::psd;
  int stag_window = 300;    // iterations per displacement window
  double stag_rtol = 1e-2;  // window spread under which the displacement counts as frozen
  double gap_floor = 1e-6;  // smallest stagnant defect counted as a real gap
};

enum class GmeVerdict { biseparable_compatible, only_gme, undecided };

/// One candidate split rho = P_a + P_b + P_c with each part PSD and PPT
/// across its own cut. Every biseparable state admits such a split, so the
/// split set is an outer relaxation of biseparability.
struct PptMixtureParts {
  Operator a, b, c;
};

struct GMEOutcome {
  GmeVerdict verdict = GmeVerdict::undecided;
  std::optional<DensityMatrix> state;      // biseparable_compatible only
  std::optional<PptMixtureParts> parts;    // biseparable_compatible only
  double gap = 0;  // marginal defect D(best split point | e); 0 when feasible
  int restarts_agreeing = 0;
  long iterations = 0;
};

/// Cyclic Dykstra projections over (P_a, P_b, P_c): PSD cones, PPT cones,
/// and the affine constraint that the parts sum to the given reductions.
/// only_gme is evidence (a persistent gap across every seeded restart), not a
/// certificate; feasible points are verified before they are reported.
GMEOutcome solve_pptmix_marginals(const MarginalTriple& e, const GmeConfig& cfg = {});

/// Range/rank structure checks that accompany a GME-only report: which
/// reductions pin their side factors (no embeddable two-dimensional slab) and
/// how the biranks line up.
struct RangeRankChecks {
  // finiteness[k] = {left side pinned, right side pinned} for AB, AC, BC.
  std::array<std::array<bool, 2>, 3> finiteness{};
  Birank ab, bc;
  int rank_b = 0;
  bool bc_pattern = false;   // birank(BC) == (rank_b + 1, rank_b + 1)
  bool ab_asymmetric = false; // birank(AB) has r != s
};

struct GmeCertification {
  bool only_gme = false;
  GMEOutcome outcome;
  RangeRankChecks checks;
};

/// Bundle of the split-relaxation verdict and the structural checks. Requires
/// a compatible triple; throws on an inconsistent one.
GmeCertification certify_only_gme(const MarginalTriple& e, const GmeConfig& cfg = {});

struct DbsEstimate {
  double value = 0;        // D evaluated at the best split point found
  bool stable = false;     // restarts agreed within tolerance
  std::string label;       // "evidence" or "stable"
};

/// Evaluate the marginal distance D at the best PPT-split point the solver
/// reaches. An upper bound on the relaxation minimum; evidence for a lower
/// bound on the biseparable distance, labeled accordingly.
DbsEstimate d_bs_lower_bound(const MarginalTriple& e, const GmeConfig& cfg = {},
                             bool exhaustive = false);

struct ScanConfig {
  bool bisect = true;       // false: fixed grid of step grid_step
  double p_max = 0.5;
  double resolution = 1e-3; // bisection stops at this width
  double grid_step = 0.05;
  GmeConfig gme;
};

struct ScanPoint {
  double p = 0;
  GmeVerdict verdict = GmeVerdict::undecided;
  double gap = 0;
};

struct RobustnessScanResult {
  double p_bar = 0;  // largest sampled p that is only-GME along with everything below it
  std::vector<ScanPoint> points;  // sorted by p
};

/// Mix sigma with the mixer state and track where the GME-only verdict stops.
RobustnessScanResult robustness_scan(const DensityMatrix& sigma,
                                     const DensityMatrix& mixer,
                                     const ScanConfig& cfg = {});

/// CSV rows "p,verdict,gap" for a scan result (header included).
std::string scan_to_csv(const RobustnessScanResult& r);

}  // namespace trimarg

#endif  // TRIMARG_GME_HPP
