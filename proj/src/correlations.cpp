// Copyright 2026
// SPDX-License-Identifier: Apache-2.0

#include "trimarg/correlations.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "trimarg/joint_diag.hpp"

namespace trimarg {

namespace {

// Reduce a three-site operator to one site (keep in {0, 1, 2}).
Operator single_site(const Operator& x, int keep) {
  switch (keep) {
    case 0: return partial_trace(partial_trace(x, 2), 1);
    case 1: return partial_trace(partial_trace(x, 2), 0);
    default: return partial_trace(partial_trace(x, 1), 0);
  }
}

constexpr int kPairSites[3][2] = {{0, 1}, {0, 2}, {1, 2}};

double comm_norm(const Matc& x, const Matc& y) {
  return hs_norm<double>((x * y - y * x).eval());
}

double max_pairwise_comm(const std::vector<Matc>& fam) {
  double worst = 0;
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = i + 1; j < fam.size(); ++j)
      worst = std::max(worst, comm_norm(fam[i], fam[j]));
  return worst;
}

// Blocks of a bipartite state conditioned on the basis kets of one side:
// side 0 gives <u_i| rho |u_i> acting on the second factor, side 1 the mirror.
std::vector<Matc> conditioned_blocks(const DensityMatrix& rho, int side, const Matc& u) {
  const int d0 = rho.dims()[0];
  const int d1 = rho.dims()[1];
  const int dc = side == 0 ? d0 : d1;
  const int dk = side == 0 ? d1 : d0;
  std::vector<Matc> blocks;
  for (int i = 0; i < dc; ++i) {
    Matc blk = Matc::Zero(dk, dk);
    for (int a = 0; a < dc; ++a)
      for (int b = 0; b < dc; ++b) {
        const std::complex<double> w = std::conj(u(a, i)) * u(b, i);
        if (side == 0)
          blk += w * rho.mat().block(a * d1, b * d1, d1, d1);
        else
          for (int r = 0; r < d0; ++r)
            for (int c = 0; c < d0; ++c) blk(r, c) += w * rho.mat()(r * d1 + a, c * d1 + b);
      }
    blocks.push_back(hermitize(blk));
  }
  return blocks;
}

}  // namespace

CorrelationDecomposition decompose(const DensityMatrix& rho) {
  if (rho.dims().sites() != 3)
    throw std::invalid_argument("decompose: need a three-site state");
  CorrelationDecomposition d;
  d.dims3 = rho.dims();
  d.singles = {single_site(rho.op, 0), single_site(rho.op, 1), single_site(rho.op, 2)};
  const std::array<Operator, 3> pairs = {partial_trace(rho.op, 2), partial_trace(rho.op, 1),
                                         partial_trace(rho.op, 0)};
  for (int p = 0; p < 3; ++p) {
    const Operator& lhs = d.singles[static_cast<std::size_t>(kPairSites[p][0])];
    const Operator& rhs = d.singles[static_cast<std::size_t>(kPairSites[p][1])];
    d.pair_corr[static_cast<std::size_t>(p)] =
        Operator(pairs[static_cast<std::size_t>(p)].dims,
                 pairs[static_cast<std::size_t>(p)].mat - kron(lhs.mat, rhs.mat));
  }
  Operator low = recompose_zero3(d.singles, d.pair_corr, d.dims3);
  d.triple_corr = Operator(d.dims3, rho.mat() - low.mat);
  return d;
}

Operator recompose(const CorrelationDecomposition& d) {
  Operator low = recompose_zero3(d.singles, d.pair_corr, d.dims3);
  return Operator(d.dims3, low.mat + d.triple_corr.mat);
}

Operator recompose_zero3(const std::array<Operator, 3>& singles,
                         const std::array<Operator, 3>& pair_corr,
                         const SystemDims& dims3) {
  if (dims3.sites() != 3) throw std::invalid_argument("recompose_zero3: need 3 sites");
  for (int i = 0; i < 3; ++i)
    if (singles[static_cast<std::size_t>(i)].dims != SystemDims{dims3[i]})
      throw std::invalid_argument("recompose_zero3: single-site dims mismatch");
  Matc acc = kron(kron(singles[0].mat, singles[1].mat), singles[2].mat);
  for (int p = 0; p < 3; ++p) {
    const int s1 = kPairSites[p][0];
    const int s2 = kPairSites[p][1];
    const int other = 3 - s1 - s2;
    acc += embed_pair(pair_corr[static_cast<std::size_t>(p)], s1, s2, dims3).mat /
           static_cast<double>(dims3[other]);
  }
  return Operator(dims3, std::move(acc));
}

Operator lower_order_projection(const Operator& x) {
  if (x.dims.sites() != 3)
    throw std::invalid_argument("lower_order_projection: need a three-site operator");
  const SystemDims& d3 = x.dims;
  const long n = d3.total();

  // Conditional expectations onto the pair, single and trivial supports
  // commute, so the projector onto their joint span is inclusion-exclusion.
  Matc acc = Matc::Zero(n, n);
  for (int p = 0; p < 3; ++p) {
    const int s1 = kPairSites[p][0];
    const int s2 = kPairSites[p][1];
    const int other = 3 - s1 - s2;
    Operator red = partial_trace(x, other);
    acc += embed_pair(red, s1, s2, d3).mat / static_cast<double>(d3[other]);
  }
  for (int keep = 0; keep < 3; ++keep) {
    Operator red = single_site(x, keep);
    Matc m = Matc::Identity(1, 1);
    for (int s = 0; s < 3; ++s) {
      if (s == keep)
        m = kron(m, red.mat).eval();
      else
        m = kron(m, (Matc::Identity(d3[s], d3[s]) / static_cast<double>(d3[s])).eval()).eval();
    }
    acc -= m;
  }
  acc += x.mat.trace().real() / static_cast<double>(n) * Matc::Identity(n, n);
  return Operator(d3, std::move(acc));
}

Operator three_body_component(const Operator& x) {
  Operator low = lower_order_projection(x);
  return Operator(x.dims, x.mat - low.mat);
}

ClassicalityReport classicality_bipartite(const DensityMatrix& rho) {
  if (rho.dims().sites() != 2)
    throw std::invalid_argument("classicality_bipartite: need a bipartite state");
  ClassicalityReport rep;

  std::vector<Matc> first = conditional_operators(rho, 0);
  const bool first_commute = max_pairwise_comm(first) <= Tol::commutator;
  Matc va = joint_diagonalize(first).basis;
  Operator pinched_first = dephase_site(rho.op, 0, va);
  const double cq_residual = hs_norm<double>((rho.mat() - pinched_first.mat).eval());
  rep.is_cq = first_commute && cq_residual <= Tol::classical;

  std::vector<Matc> blocks = conditioned_blocks(rho, 0, va);
  const bool blocks_commute = max_pairwise_comm(blocks) <= Tol::commutator;
  Matc vb = joint_diagonalize(blocks).basis;
  ProductBasis basis({va, vb});
  Operator pinched = dephase(rho.op, basis);
  rep.residual = hs_norm<double>((rho.mat() - pinched.mat).eval());
  rep.is_cc = rep.is_cq && blocks_commute && rep.residual <= Tol::classical;
  if (rep.is_cc) rep.bases = std::move(basis);
  return rep;
}

TripleClassicality classical_triple_check(const MarginalTriple& e) {
  TripleClassicality t;
  t.reports = {classicality_bipartite(e.ab), classicality_bipartite(e.ac),
               classicality_bipartite(e.bc)};
  t.all_cc = t.reports[0].is_cc && t.reports[1].is_cc && t.reports[2].is_cc;
  return t;
}

CommutatorReport commutator_delta(const MarginalTriple& e) {
  Matc mab = embed_pair(e.ab.op, 0, 1, e.dims3).mat;
  Matc mac = embed_pair(e.ac.op, 0, 2, e.dims3).mat;
  Matc mbc = embed_pair(e.bc.op, 1, 2, e.dims3).mat;
  CommutatorReport r;
  r.delta_norms = {comm_norm(mab, mac), comm_norm(mab, mbc), comm_norm(mac, mbc)};
  r.max_norm = std::max({r.delta_norms[0], r.delta_norms[1], r.delta_norms[2]});
  return r;
}

bool no_classical_global_certificate(const MarginalTriple& e) {
  TripleClassicality t = classical_triple_check(e);
  if (!t.all_cc)
    throw std::invalid_argument(
        "no_classical_global_certificate: all three reductions must be CC");
  return commutator_delta(e).max_norm > Tol::commutator;
}

ProductBasis common_classical_basis(const MarginalTriple& e) {
  // Per site, pool the conditional families of both reductions touching it.
  std::vector<Matc> fam_a = conditional_operators(e.ab, 0);
  {
    std::vector<Matc> more = conditional_operators(e.ac, 0);
    fam_a.insert(fam_a.end(), more.begin(), more.end());
  }
  std::vector<Matc> fam_b = conditional_operators(e.ab, 1);
  {
    std::vector<Matc> more = conditional_operators(e.bc, 0);
    fam_b.insert(fam_b.end(), more.begin(), more.end());
  }
  std::vector<Matc> fam_c = conditional_operators(e.ac, 1);
  {
    std::vector<Matc> more = conditional_operators(e.bc, 1);
    fam_c.insert(fam_c.end(), more.begin(), more.end());
  }
  return ProductBasis({joint_diagonalize(fam_a).basis, joint_diagonalize(fam_b).basis,
                       joint_diagonalize(fam_c).basis});
}

DensityMatrix classical_global_completion(const MarginalTriple& e,
                                          const DensityMatrix& rho) {
  if (rho.dims() != e.dims3)
    throw std::invalid_argument("classical_global_completion: dims mismatch");
  TripleClassicality t = classical_triple_check(e);
  if (!t.all_cc)
    throw std::invalid_argument(
        "classical_global_completion: all three reductions must be CC");
  CommutatorReport cr = commutator_delta(e);
  if (cr.max_norm > Tol::commutator)
    throw std::invalid_argument(
        "classical_global_completion: embedded reductions do not commute");
  {
    MarginalTriple back = reductions_of(rho);
    const double in_res = std::max({hs_norm<double>((back.ab.mat() - e.ab.mat()).eval()),
                                    hs_norm<double>((back.ac.mat() - e.ac.mat()).eval()),
                                    hs_norm<double>((back.bc.mat() - e.bc.mat()).eval())});
    if (in_res > Tol::marginal)
      throw std::invalid_argument(
          "classical_global_completion: rho does not have the given marginals");
  }

  ProductBasis basis = common_classical_basis(e);
  DensityMatrix out = DensityMatrix::from(dephase(rho.op, basis));
  MarginalTriple back = reductions_of(out);
  const double res = std::max({hs_norm<double>((back.ab.mat() - e.ab.mat()).eval()),
                               hs_norm<double>((back.ac.mat() - e.ac.mat()).eval()),
                               hs_norm<double>((back.bc.mat() - e.bc.mat()).eval())});
  if (res > Tol::marginal)
    throw std::invalid_argument(
        "classical_global_completion: dephased state fails to keep the marginals");
  return out;
}

std::vector<Matc> conditional_operators(const DensityMatrix& rho, int keep_side) {
  if (rho.dims().sites() != 2)
    throw std::invalid_argument("conditional_operators: need a bipartite state");
  if (keep_side != 0 && keep_side != 1)
    throw std::invalid_argument("conditional_operators: keep_side must be 0 or 1");
  const int dk = rho.dims()[keep_side];
  const int dt = rho.dims()[1 - keep_side];
  std::vector<Matc> fam;
  for (const Matc& f : hermitian_basis(dt)) {
    Matc m = Matc::Zero(dk, dk);
    for (int i = 0; i < dk; ++i)
      for (int j = 0; j < dk; ++j) {
        std::complex<double> acc(0, 0);
        for (int a = 0; a < dt; ++a)
          for (int b = 0; b < dt; ++b)
            acc += keep_side == 0 ? rho.mat()(i * dt + a, j * dt + b) * f(b, a)
                                  : rho.mat()(a * dk + i, b * dk + j) * f(b, a);
        m(i, j) = acc;
      }
    fam.push_back(hermitize(m));
  }
  return fam;
}

std::vector<Matc> hermitian_basis(int d) {
  if (d < 1) throw std::invalid_argument("hermitian_basis: dimension must be >= 1");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Matc> out;
  for (int i = 0; i < d; ++i) {
    Matc m = Matc::Zero(d, d);
    m(i, i) = 1.0;
    out.push_back(std::move(m));
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Matc s = Matc::Zero(d, d);
      s(i, j) = inv_sqrt2;
      s(j, i) = inv_sqrt2;
      out.push_back(std::move(s));
      Matc a = Matc::Zero(d, d);
      a(i, j) = std::complex<double>(0, -inv_sqrt2);
      a(j, i) = std::complex<double>(0, inv_sqrt2);
      out.push_back(std::move(a));
    }
  return out;
}

}  // namespace trimarg
