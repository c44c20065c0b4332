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

#ifndef TRIMARG_JOINT_DIAG_HPP
#define TRIMARG_JOINT_DIAG_HPP

#include <vector>

#include "trimarg/core.hpp"

namespace trimarg {

struct JointDiagResult {
  Matc basis;       // columns: the common (approximate) eigenvectors
  double off_mass;  // sqrt of the summed squared off-diagonal entries left over
  int sweeps;
};

/// Simultaneously diagonalize a family of Hermitian matrices by Jacobi-style
/// 2x2 rotations (Cardoso-Souloumiac). For a commuting family the leftover
/// off-diagonal mass is numerically zero; otherwise the returned basis is the
/// local minimizer of the summed off-diagonal mass that the sweeps reach.
/// Rotations that would not improve anything are skipped, so blocks that come
/// in diagonal keep their incoming orientation.
JointDiagResult joint_diagonalize(const std::vector<Matc>& mats,
                                  int max_sweeps = 100, double rel_tol = 1e-14);

/// Summed squared off-diagonal mass of the family conjugated into `basis`.
double off_diag_mass_in(const std::vector<Matc>& mats, const Matc& basis);

}  // namespace trimarg

#endif  // TRIMARG_JOINT_DIAG_HPP
