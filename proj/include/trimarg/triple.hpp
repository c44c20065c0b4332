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

#ifndef TRIMARG_TRIPLE_HPP
#define TRIMARG_TRIPLE_HPP

#include <array>

#include "trimarg/core.hpp"

namespace trimarg {

/// The three two-body reductions of a (hypothetical) three-site state,
/// in the fixed order AB, AC, BC.
struct MarginalTriple {
  DensityMatrix ab, ac, bc;
  SystemDims dims3;

  MarginalTriple() = default;
  MarginalTriple(DensityMatrix rab, DensityMatrix rac, DensityMatrix rbc)
      : ab(std::move(rab)), ac(std::move(rac)), bc(std::move(rbc)) {
    if (ab.dims().sites() != 2 || ac.dims().sites() != 2 || bc.dims().sites() != 2)
      throw std::invalid_argument("marginal triple: every entry must be bipartite");
    if (ab.dims()[0] != ac.dims()[0] || ab.dims()[1] != bc.dims()[0] ||
        ac.dims()[1] != bc.dims()[1])
      throw std::invalid_argument("marginal triple: subsystem dims disagree");
    dims3 = SystemDims{ab.dims()[0], ab.dims()[1], ac.dims()[1]};
  }

  int d(int site) const { return dims3[site]; }
};

/// Extract the triple of a three-site state.
inline MarginalTriple reductions_of(const DensityMatrix& rho) {
  if (rho.dims().sites() != 3)
    throw std::invalid_argument("reductions_of: need a three-site state");
  return MarginalTriple(partial_trace(rho, 2), partial_trace(rho, 1),
                        partial_trace(rho, 0));
}

struct ConsistencyReport {
  bool consistent = false;
  std::array<double, 3> residuals{};  // per single site A, B, C
};

/// Each single-site state can be reached from two different pair reductions;
/// consistent means the two routes agree in Hilbert-Schmidt norm.
inline ConsistencyReport consistency_check(const MarginalTriple& e,
                                           double tol = Tol::marginal) {
  Operator a1 = partial_trace(e.ab.op, 1), a2 = partial_trace(e.ac.op, 1);
  Operator b1 = partial_trace(e.ab.op, 0), b2 = partial_trace(e.bc.op, 1);
  Operator c1 = partial_trace(e.ac.op, 0), c2 = partial_trace(e.bc.op, 0);
  ConsistencyReport r;
  r.residuals[0] = hs_norm<double>((a1.mat - a2.mat).eval());
  r.residuals[1] = hs_norm<double>((b1.mat - b2.mat).eval());
  r.residuals[2] = hs_norm<double>((c1.mat - c2.mat).eval());
  r.consistent = r.residuals[0] <= tol && r.residuals[1] <= tol && r.residuals[2] <= tol;
  return r;
}

/// The three single-site reductions (averaging the two routes for each).
inline std::array<Operator, 3> singles_of(const MarginalTriple& e) {
  Operator a1 = partial_trace(e.ab.op, 1), a2 = partial_trace(e.ac.op, 1);
  Operator b1 = partial_trace(e.ab.op, 0), b2 = partial_trace(e.bc.op, 1);
  Operator c1 = partial_trace(e.ac.op, 0), c2 = partial_trace(e.bc.op, 0);
  auto avg = [](const Operator& x, const Operator& y) {
    return Operator(x.dims, ((x.mat + y.mat) / 2.0).eval());
  };
  return {avg(a1, a2), avg(b1, b2), avg(c1, c2)};
}

}  // namespace trimarg

#endif  // TRIMARG_TRIPLE_HPP
