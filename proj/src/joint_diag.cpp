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

#include "trimarg/joint_diag.hpp"

namespace trimarg {

namespace {

double off_mass_sq(const std::vector<Matc>& mats) {
  double s = 0;
  for (const auto& m : mats) {
    s += m.squaredNorm();
    s -= m.diagonal().squaredNorm();
  }
  return s;
}

}  // namespace

double off_diag_mass_in(const std::vector<Matc>& mats, const Matc& basis) {
  std::vector<Matc> rot;
  rot.reserve(mats.size());
  for (const auto& m : mats) rot.push_back(basis.adjoint() * m * basis);
  return off_mass_sq(rot);
}

JointDiagResult joint_diagonalize(const std::vector<Matc>& mats, int max_sweeps,
                                  double rel_tol) {
  if (mats.empty()) throw std::invalid_argument("joint_diagonalize: empty family");
  const long n = mats.front().rows();
  for (const auto& m : mats)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("joint_diagonalize: size mismatch in family");

  std::vector<Matc> a = mats;
  Matc w = Matc::Identity(n, n);  // accumulated rotations; basis is w^dag

  double scale = 0;
  for (const auto& m : a) scale += m.squaredNorm();
  if (scale == 0) return {Matc::Identity(n, n), 0.0, 0};

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (long p = 0; p < n - 1; ++p) {
      for (long q = p + 1; q < n; ++q) {
        // 3x3 Cardoso-Souloumiac surrogate built from the (p,q) entries.
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        for (const auto& m : a) {
          Eigen::Vector3d h;
          h[0] = (m(p, p) - m(q, q)).real();
          h[1] = 2.0 * m(p, q).real();
          h[2] = 2.0 * m(p, q).imag();
          g += h * h.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
        // Rotating this pair can move at most lmax - g(0,0) of off-diagonal
        // mass onto the diagonal; skip when there is nothing to gain, which
        // also pins the orientation of blocks that arrive diagonal.
        if (es.eigenvalues()[2] - g(0, 0) <= 1e-26 * scale) continue;
        Eigen::Vector3d v = es.eigenvectors().col(2);
        if (v[0] < 0) v = -v;

        double x = v[0], y = v[1], z = v[2];
        double denom = std::sqrt(2.0 * (1.0 + x));
        if (denom < 1e-12) continue;  // 180-degree case: no useful rotation
        double c = std::sqrt((1.0 + x) / 2.0);
        std::complex<double> s(y / denom, -z / denom);
        if (std::abs(s) < 1e-14) continue;  // already there, keep orientation

        // Apply J = [[c, conj(s)], [-s, c]] on rows/cols (p, q) of everything.
        using RowV = Eigen::Matrix<std::complex<double>, 1, Eigen::Dynamic>;
        for (auto& m : a) {
          RowV rp = m.row(p), rq = m.row(q);
          m.row(p) = c * rp + std::conj(s) * rq;
          m.row(q) = -s * rp + c * rq;
          Vecc cp = m.col(p), cq = m.col(q);
          m.col(p) = c * cp + s * cq;
          m.col(q) = std::conj(-s) * cp + c * cq;
        }
        RowV wp = w.row(p), wq = w.row(q);
        w.row(p) = c * wp + std::conj(s) * wq;
        w.row(q) = -s * wp + c * wq;
        rotated = true;
      }
    }
    if (!rotated) break;
    if (off_mass_sq(a) <= rel_tol * rel_tol * scale) break;
  }

  JointDiagResult r;
  r.basis = w.adjoint();
  r.off_mass = std::sqrt(std::max(0.0, off_mass_sq(a)));
  r.sweeps = sweep;
  return r;
}

}  // namespace trimarg
