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

#ifndef TRIMARG_CORE_HPP
#define TRIMARG_CORE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace trimarg {

template <typename Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Matc = CMat<double>;
using Vecc = CVec<double>;
using Vecd = Eigen::VectorXd;

/// Shared numerical tolerances. Every module and every test reads these.
struct Tol {
  static constexpr double herm = 1e-12;      // max-abs entry of M - M^dag
  static constexpr double psd = 1e-9;        // eigenvalue floor for "PSD"
  static constexpr double rank_rel = 1e-8;   // relative cutoff for numerical rank
  static constexpr double classical = 1e-9;  // off-diagonal mass for classicality
  static constexpr double commutator = 1e-8; // "these marginals do not commute"
  static constexpr double marginal = 1e-9;   // marginal reproduction residual
};

// ---------------------------------------------------------------------------
// Subsystem bookkeeping. Site 0 is the most significant index (row-major),
// so |i_A i_B i_C> sits at i_A*d_B*d_C + i_B*d_C + i_C.

struct SystemDims {
  std::vector<int> dims;

  SystemDims() = default;
  SystemDims(std::initializer_list<int> d) : dims(d) { validate(); }
  explicit SystemDims(std::vector<int> d) : dims(std::move(d)) { validate(); }

  int sites() const { return static_cast<int>(dims.size()); }
  int operator[](int i) const { return dims.at(static_cast<size_t>(i)); }
  long total() const {
    long t = 1;
    for (int d : dims) t *= d;
    return t;
  }
  bool operator==(const SystemDims& o) const { return dims == o.dims; }
  bool operator!=(const SystemDims& o) const { return !(*this == o); }

  SystemDims without(int site) const {
    check_site(site);
    std::vector<int> d = dims;
    d.erase(d.begin() + site);
    return SystemDims(d);
  }

  void check_site(int site) const {
    if (site < 0 || site >= sites())
      throw std::invalid_argument("site index " + std::to_string(site) +
                                  " out of range for " + std::to_string(sites()) +
                                  " sites");
  }

 private:
  void validate() const {
    if (dims.empty()) throw std::invalid_argument("empty dimension list");
    for (int d : dims)
      if (d < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
  }
};

inline std::vector<long> strides_of(const SystemDims& d) {
  std::vector<long> s(d.dims.size());
  long acc = 1;
  for (int i = d.sites() - 1; i >= 0; --i) {
    s[static_cast<size_t>(i)] = acc;
    acc *= d[i];
  }
  return s;
}

inline int digit_at(long index, long stride, int dim) {
  return static_cast<int>((index / stride) % dim);
}

// ---------------------------------------------------------------------------
// Operator carriers. Construction checks the dims/matrix agreement and
// Hermiticity, then stores the exactly symmetrized (M + M^dag)/2 so later
// algebra never drifts across the tolerance.

template <typename Real>
bool is_hermitian(const CMat<Real>& m, Real tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Real>
CMat<Real> hermitize(const CMat<Real>& m) {
  return ((m + m.adjoint()) / Real(2)).eval();
}

template <typename Real>
struct BasicOperator {
  SystemDims dims;
  CMat<Real> mat;

  BasicOperator() = default;
  BasicOperator(SystemDims d, CMat<Real> m) : dims(std::move(d)), mat(std::move(m)) {
    if (mat.rows() != mat.cols() || mat.rows() != dims.total())
      throw std::invalid_argument("matrix side does not match product of dims");
    if (!is_hermitian<Real>(mat, Real(Tol::herm)))
      throw std::invalid_argument("operator is not Hermitian within tolerance");
    mat = hermitize<Real>(mat);
  }

  long side() const { return mat.rows(); }
};

using Operator = BasicOperator<double>;

template <typename Real>
struct BasicDensityMatrix;

template <typename Real>
struct EighResult {
  RVec<Real> values;  // ascending
  CMat<Real> vectors; // columns match values
};

/// Hermitian eigendecomposition. Throws on non-Hermitian input.
template <typename Real>
EighResult<Real> eigh(const CMat<Real>& m) {
  if (!is_hermitian<Real>(m, Real(1e-10)))
    throw std::invalid_argument("eigh: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat<Real>> es(hermitize<Real>(m));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

template <typename Real>
EighResult<Real> eigh(const BasicOperator<Real>& x) {
  return eigh<Real>(x.mat);
}

template <typename Real>
Real hs_norm(const CMat<Real>& m) {
  return m.norm();
}

/// Real Hilbert-Schmidt inner product Re tr(X^dag Y).
template <typename DerA, typename DerB>
auto hs_inner(const Eigen::MatrixBase<DerA>& x, const Eigen::MatrixBase<DerB>& y) {
  return x.cwiseProduct(y.conjugate()).sum().real();
}

template <typename Real>
Real hs_norm(const BasicOperator<Real>& x) {
  return x.mat.norm();
}

template <typename Real>
Real hs_inner(const BasicOperator<Real>& x, const BasicOperator<Real>& y) {
  if (x.dims != y.dims) throw std::invalid_argument("hs_inner: dims mismatch");
  return hs_inner(y.mat, x.mat);
}

/// Numerical rank: eigenvalues with |l| > eps. eps < 0 picks the default
/// rank_rel * max(1, ||X||_2) rule.
template <typename Real>
int rank_eps(const CMat<Real>& m, Real eps = Real(-1)) {
  if (eps < Real(0)) eps = Real(Tol::rank_rel) * std::max(Real(1), hs_norm<Real>(m));
  auto ev = eigh<Real>(m).values;
  int r = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) > eps) ++r;
  return r;
}

template <typename Real>
int rank_eps(const BasicOperator<Real>& x, Real eps = Real(-1)) {
  return rank_eps<Real>(x.mat, eps);
}

// ---------------------------------------------------------------------------
// Tensor algebra over the dims-aware carriers.

/// Kronecker product of raw matrices (row-major site order).
template <typename DerA, typename DerB>
CMat<typename Eigen::MatrixBase<DerA>::RealScalar> kron(
    const Eigen::MatrixBase<DerA>& a, const Eigen::MatrixBase<DerB>& b) {
  using Real = typename Eigen::MatrixBase<DerA>::RealScalar;
  CMat<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Real>
BasicOperator<Real> tensor(const BasicOperator<Real>& a, const BasicOperator<Real>& b) {
  std::vector<int> d = a.dims.dims;
  d.insert(d.end(), b.dims.dims.begin(), b.dims.dims.end());
  return BasicOperator<Real>(SystemDims(d), kron(a.mat, b.mat));
}

/// Trace out one site; the remaining sites keep their order.
template <typename Real>
BasicOperator<Real> partial_trace(const BasicOperator<Real>& x, int site) {
  x.dims.check_site(site);
  const SystemDims out_dims = x.dims.without(site);
  const auto st = strides_of(x.dims);
  const long s_t = st[static_cast<size_t>(site)];
  const int d_t = x.dims[site];
  const long d_rest = out_dims.total();

  // Map a reduced index to the full index with the traced digit set to zero.
  std::vector<long> lift(static_cast<size_t>(d_rest));
  {
    const auto out_st = strides_of(out_dims);
    for (long r = 0; r < d_rest; ++r) {
      long full = 0;
      int oi = 0;
      for (int ssite = 0; ssite < x.dims.sites(); ++ssite) {
        if (ssite == site) continue;
        int g = digit_at(r, out_st[static_cast<size_t>(oi)], out_dims[oi]);
        full += g * st[static_cast<size_t>(ssite)];
        ++oi;
      }
      lift[static_cast<size_t>(r)] = full;
    }
  }

  CMat<Real> out = CMat<Real>::Zero(d_rest, d_rest);
  for (long i = 0; i < d_rest; ++i)
    for (long j = 0; j < d_rest; ++j) {
      std::complex<Real> acc(0, 0);
      for (int k = 0; k < d_t; ++k)
        acc += x.mat(lift[static_cast<size_t>(i)] + k * s_t,
                     lift[static_cast<size_t>(j)] + k * s_t);
      out(i, j) = acc;
    }
  return BasicOperator<Real>(out_dims, std::move(out));
}

/// Transpose the indices of one site, identity on the rest.
template <typename Real>
BasicOperator<Real> partial_transpose(const BasicOperator<Real>& x, int site) {
  x.dims.check_site(site);
  const auto st = strides_of(x.dims);
  const long s_t = st[static_cast<size_t>(site)];
  const int d_t = x.dims[site];
  const long n = x.side();

  CMat<Real> out(n, n);
  for (long i = 0; i < n; ++i) {
    const int a = digit_at(i, s_t, d_t);
    for (long j = 0; j < n; ++j) {
      const int b = digit_at(j, s_t, d_t);
      out(i, j) = x.mat(i + (b - a) * s_t, j + (a - b) * s_t);
    }
  }
  return BasicOperator<Real>(x.dims, std::move(out));
}

/// Reorder sites: output site p carries input site perm[p].
template <typename Real>
BasicOperator<Real> permute_sites(const BasicOperator<Real>& x,
                                  const std::vector<int>& perm) {
  const int n = x.dims.sites();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute_sites: permutation length mismatch");
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (int p : perm) {
    x.dims.check_site(p);
    if (seen[static_cast<size_t>(p)])
      throw std::invalid_argument("permute_sites: not a permutation");
    seen[static_cast<size_t>(p)] = true;
  }

  std::vector<int> od(static_cast<size_t>(n));
  for (int p = 0; p < n; ++p) od[static_cast<size_t>(p)] = x.dims[perm[static_cast<size_t>(p)]];
  const SystemDims out_dims{od};
  const auto in_st = strides_of(x.dims);
  const auto out_st = strides_of(out_dims);
  const long total = out_dims.total();

  std::vector<long> map(static_cast<size_t>(total));
  for (long i = 0; i < total; ++i) {
    long full = 0;
    for (int p = 0; p < n; ++p) {
      int g = digit_at(i, out_st[static_cast<size_t>(p)], out_dims[p]);
      full += g * in_st[static_cast<size_t>(perm[static_cast<size_t>(p)])];
    }
    map[static_cast<size_t>(i)] = full;
  }

  CMat<Real> out(total, total);
  for (long i = 0; i < total; ++i)
    for (long j = 0; j < total; ++j)
      out(i, j) = x.mat(map[static_cast<size_t>(i)], map[static_cast<size_t>(j)]);
  return BasicOperator<Real>(out_dims, std::move(out));
}

/// Place a bipartite operator on the ordered site pair (s1 < s2) of a
/// three-site layout, identity on the remaining site.
template <typename Real>
BasicOperator<Real> embed_pair(const BasicOperator<Real>& x, int s1, int s2,
                               const SystemDims& full) {
  if (full.sites() != 3) throw std::invalid_argument("embed_pair: need 3 sites");
  if (x.dims.sites() != 2) throw std::invalid_argument("embed_pair: need bipartite input");
  if (s1 >= s2) throw std::invalid_argument("embed_pair: sites must be ordered");
  full.check_site(s1);
  full.check_site(s2);
  if (x.dims[0] != full[s1] || x.dims[1] != full[s2])
    throw std::invalid_argument("embed_pair: dims do not match the named sites");

  int other = 3 - s1 - s2;
  BasicOperator<Real> eye(SystemDims{full[other]},
                          CMat<Real>::Identity(full[other], full[other]));
  BasicOperator<Real> y = tensor(x, eye); // site order (s1, s2, other)
  std::vector<int> order = {s1, s2, other};
  std::vector<int> perm(3);
  for (int p = 0; p < 3; ++p)
    perm[static_cast<size_t>(p)] =
        static_cast<int>(std::find(order.begin(), order.end(), p) - order.begin());
  return permute_sites(y, perm);
}

// ---------------------------------------------------------------------------
// Product bases and dephasing.

template <typename Real>
struct BasicProductBasis {
  std::vector<CMat<Real>> site_bases; // columns are the basis kets

  BasicProductBasis() = default;
  explicit BasicProductBasis(std::vector<CMat<Real>> b) : site_bases(std::move(b)) {
    for (const auto& u : site_bases) {
      if (u.rows() != u.cols()) throw std::invalid_argument("basis matrix not square");
      CMat<Real> g = u.adjoint() * u;
      if ((g - CMat<Real>::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > Real(1e-10))
        throw std::invalid_argument("basis matrix not unitary within tolerance");
    }
  }

  static BasicProductBasis computational(const SystemDims& d) {
    std::vector<CMat<Real>> b;
    for (int i = 0; i < d.sites(); ++i) b.push_back(CMat<Real>::Identity(d[i], d[i]));
    return BasicProductBasis(std::move(b));
  }

  CMat<Real> full_unitary() const {
    CMat<Real> u = site_bases.front();
    for (size_t i = 1; i < site_bases.size(); ++i) u = kron(u, site_bases[i]);
    return u;
  }

  SystemDims dims() const {
    std::vector<int> d;
    for (const auto& u : site_bases) d.push_back(static_cast<int>(u.rows()));
    return SystemDims(d);
  }
};

using ProductBasis = BasicProductBasis<double>;

/// Kill all off-diagonal entries in the given product basis.
template <typename Real>
BasicOperator<Real> dephase(const BasicOperator<Real>& x,
                            const BasicProductBasis<Real>& basis) {
  if (basis.dims() != x.dims) throw std::invalid_argument("dephase: dims mismatch");
  CMat<Real> u = basis.full_unitary();
  CMat<Real> d = u.adjoint() * x.mat * u;
  CMat<Real> diag = d.diagonal().asDiagonal();
  return BasicOperator<Real>(x.dims, u * diag * u.adjoint());
}

/// Dephase a single site in the given on-site basis, leaving the rest alone.
template <typename Real>
BasicOperator<Real> dephase_site(const BasicOperator<Real>& x, int site,
                                 const CMat<Real>& u_site) {
  x.dims.check_site(site);
  if (u_site.rows() != x.dims[site])
    throw std::invalid_argument("dephase_site: basis size mismatch");
  std::vector<CMat<Real>> ops;
  for (int i = 0; i < x.dims.sites(); ++i)
    ops.push_back(i == site ? u_site : CMat<Real>::Identity(x.dims[i], x.dims[i]).eval());
  CMat<Real> w = ops.front();
  for (size_t i = 1; i < ops.size(); ++i) w = kron(w, ops[i]);

  CMat<Real> y = w.adjoint() * x.mat * w;
  const auto st = strides_of(x.dims);
  const long s_t = st[static_cast<size_t>(site)];
  const int d_t = x.dims[site];
  for (long i = 0; i < y.rows(); ++i)
    for (long j = 0; j < y.cols(); ++j)
      if (digit_at(i, s_t, d_t) != digit_at(j, s_t, d_t)) y(i, j) = std::complex<Real>(0, 0);
  return BasicOperator<Real>(x.dims, w * y * w.adjoint());
}

// ---------------------------------------------------------------------------
// PSD/trace-one projection (spectral clip onto the probability simplex).

template <typename Real>
RVec<Real> project_to_simplex(const RVec<Real>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<Real> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<Real>());
  Real cum = 0;
  Real tau = 0;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    cum += u[static_cast<size_t>(i)];
    Real t = (cum - Real(1)) / Real(i + 1);
    if (u[static_cast<size_t>(i)] - t > Real(0)) {
      tau = t;
      k = i + 1;
    }
  }
  (void)k;
  RVec<Real> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::max(v[i] - tau, Real(0));
  return out;
}

template <typename Real>
BasicDensityMatrix<Real> project_psd_trace1(const BasicOperator<Real>& x);

// ---------------------------------------------------------------------------
// Density matrices: trace one within 1e-12 and spectrum above -Tol::psd.

template <typename Real>
struct BasicDensityMatrix {
  BasicOperator<Real> op;

  BasicDensityMatrix() = default;

  static BasicDensityMatrix from(BasicOperator<Real> o) {
    if (std::abs(o.mat.trace().real() - Real(1)) > Real(1e-12) ||
        std::abs(o.mat.trace().imag()) > Real(1e-12))
      throw std::invalid_argument("density matrix trace is not 1");
    auto ev = eigh<Real>(o.mat).values;
    if (ev[0] < -Real(Tol::psd))
      throw std::invalid_argument("density matrix has eigenvalue below -tol");
    BasicDensityMatrix d;
    d.op = std::move(o);
    return d;
  }

  static BasicDensityMatrix from(const SystemDims& dims, const CMat<Real>& m) {
    return from(BasicOperator<Real>(dims, m));
  }

  const CMat<Real>& mat() const { return op.mat; }
  const SystemDims& dims() const { return op.dims; }
  long side() const { return op.side(); }
};

using DensityMatrix = BasicDensityMatrix<double>;

template <typename Real>
BasicDensityMatrix<Real> project_psd_trace1(const BasicOperator<Real>& x) {
  auto es = eigh<Real>(x.mat);
  RVec<Real> lam = project_to_simplex<Real>(es.values);
  CMat<Real> m = es.vectors * lam.asDiagonal() * es.vectors.adjoint();
  // Clipped spectrum is exactly nonnegative, so validation cannot fail.
  return BasicDensityMatrix<Real>::from(BasicOperator<Real>(x.dims, std::move(m)));
}

template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& x, int site) {
  return BasicDensityMatrix<Real>::from(partial_trace(x.op, site));
}

// ---------------------------------------------------------------------------
// Small constructors used all over the catalog and the tests.

template <typename Real>
CMat<Real> pauli(int k) {
  using C = std::complex<Real>;
  CMat<Real> m(2, 2);
  switch (k) {
    case 0: m << C(1, 0), C(0, 0), C(0, 0), C(1, 0); break;
    case 1: m << C(0, 0), C(1, 0), C(1, 0), C(0, 0); break;
    case 2: m << C(0, 0), C(0, -1), C(0, 1), C(0, 0); break;
    case 3: m << C(1, 0), C(0, 0), C(0, 0), C(-1, 0); break;
    default: throw std::invalid_argument("pauli index must be 0..3");
  }
  return m;
}

inline Matc pauli_d(int k) { return pauli<double>(k); }

template <typename Real>
CVec<Real> basis_ket(int dim, int i) {
  if (i < 0 || i >= dim) throw std::invalid_argument("basis_ket index out of range");
  CVec<Real> v = CVec<Real>::Zero(dim);
  v[i] = std::complex<Real>(1, 0);
  return v;
}

inline Vecc ket(int dim, int i) { return basis_ket<double>(dim, i); }

/// |abc> on given dims, one digit per site.
inline Vecc product_ket(const SystemDims& dims, const std::vector<int>& digits) {
  if (static_cast<int>(digits.size()) != dims.sites())
    throw std::invalid_argument("product_ket: digit count mismatch");
  Vecc v = ket(dims[0], digits[0]);
  for (int i = 1; i < dims.sites(); ++i) {
    Vecc next = ket(dims[i], digits[static_cast<size_t>(i)]);
    Vecc out(v.size() * next.size());
    for (long a = 0; a < v.size(); ++a)
      for (long b = 0; b < next.size(); ++b) out[a * next.size() + b] = v[a] * next[b];
    v = out;
  }
  return v;
}

inline Matc projector(const Vecc& v) { return v * v.adjoint(); }

}  // namespace trimarg

#endif  // TRIMARG_CORE_HPP
