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

#ifndef TRIMARG_RANDOM_HPP
#define TRIMARG_RANDOM_HPP

#include <random>

#include "trimarg/core.hpp"

namespace trimarg {

using Rng = std::mt19937_64;

/// Ginibre matrix: independent N(0,1) entries, real and imaginary parts.
template <typename Real>
CMat<Real> randn_cmat(Rng& rng, long rows, long cols) {
  std::normal_distribution<Real> n(Real(0), Real(1));
  CMat<Real> m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      Real re = n(rng);
      Real im = n(rng);
      m(i, j) = std::complex<Real>(re, im);
    }
  return m;
}

template <typename Real>
CMat<Real> random_hermitian(Rng& rng, long n) {
  CMat<Real> g = randn_cmat<Real>(rng, n, n);
  return ((g + g.adjoint()) / Real(2)).eval();
}

/// Haar-ish unitary from the QR of a Ginibre matrix, phases of R made positive
/// so the result is a deterministic function of the draw.
template <typename Real>
CMat<Real> random_unitary(Rng& rng, long n) {
  CMat<Real> g = randn_cmat<Real>(rng, n, n);
  Eigen::HouseholderQR<CMat<Real>> qr(g);
  CMat<Real> q = qr.householderQ();
  CMat<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (long i = 0; i < n; ++i) {
    std::complex<Real> d = r(i, i);
    Real a = std::abs(d);
    std::complex<Real> ph = a > Real(0) ? d / a : std::complex<Real>(1, 0);
    q.col(i) *= ph;
  }
  return q;
}

/// Induced-measure mixed state of the requested rank.
template <typename Real>
BasicDensityMatrix<Real> random_density(const SystemDims& dims, int rank, uint64_t seed) {
  const long n = dims.total();
  if (rank < 1 || rank > n) throw std::invalid_argument("random_density: bad rank");
  Rng rng(seed);
  CMat<Real> g = randn_cmat<Real>(rng, n, rank);
  CMat<Real> m = g * g.adjoint();
  m /= m.trace().real();
  return BasicDensityMatrix<Real>::from(BasicOperator<Real>(dims, hermitize<Real>(m)));
}

template <typename Real>
BasicDensityMatrix<Real> random_pure(const SystemDims& dims, uint64_t seed) {
  return random_density<Real>(dims, 1, seed);
}

inline DensityMatrix random_density(const SystemDims& dims, int rank, uint64_t seed) {
  return random_density<double>(dims, rank, seed);
}

inline DensityMatrix random_pure(const SystemDims& dims, uint64_t seed) {
  return random_pure<double>(dims, seed);
}

/// Random probability vector (flat Dirichlet via normalized exponentials).
inline Vecd random_pmf(Rng& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  Vecd p(n);
  for (int i = 0; i < n; ++i) p[i] = e(rng);
  p /= p.sum();
  return p;
}

}  // namespace trimarg

#endif  // TRIMARG_RANDOM_HPP
