// Tests for the correlation split, classicality checks and the classical
// completion route.

#include <doctest.h>

#include <cmath>
#include <complex>

#include "trimarg/correlations.hpp"
#include "trimarg/random.hpp"
#include "trimarg/triple.hpp"

using namespace trimarg;

namespace {

const std::complex<double> kI(0, 1);

DensityMatrix ghz_state() {
  SystemDims d{2, 2, 2};
  Vecc v = (product_ket(d, {0, 0, 0}) + product_ket(d, {1, 1, 1})) / std::sqrt(2.0);
  return DensityMatrix::from(d, projector(v));
}

// 1/8 (1 + q 1 s1 s1 + q s2 1 s2 + q s3 s3 1); a state for |q| <= 1/sqrt(3).
DensityMatrix three_pauli_mix(double q) {
  Matc i2 = Matc::Identity(2, 2);
  Matc m = kron(kron(i2, i2), i2);
  m += q * kron(kron(i2, pauli_d(1)), pauli_d(1));
  m += q * kron(kron(pauli_d(2), i2), pauli_d(2));
  m += q * kron(kron(pauli_d(3), pauli_d(3)), i2);
  return DensityMatrix::from(SystemDims{2, 2, 2}, (m / 8.0).eval());
}

DensityMatrix classical_product_basis_state(uint64_t seed) {
  Rng rng(seed);
  Vecd p = random_pmf(rng, 8);
  Matc u = kron(kron(random_unitary<double>(rng, 2), random_unitary<double>(rng, 2)),
                random_unitary<double>(rng, 2));
  Matc m = u * p.cast<std::complex<double>>().asDiagonal().toDenseMatrix() * u.adjoint();
  return DensityMatrix::from(SystemDims{2, 2, 2}, hermitize(m));
}

}  // namespace

TEST_CASE("decompose and recompose round trip") {
  for (uint64_t seed : {3u, 4u}) {
    DensityMatrix rho = random_density(SystemDims{2, 2, 2}, 4, seed);
    CorrelationDecomposition d = decompose(rho);
    CHECK(hs_norm<double>((recompose(d).mat - rho.mat()).eval()) < 1e-12);
  }
  DensityMatrix rho = random_density(SystemDims{2, 3, 2}, 5, 9);
  CorrelationDecomposition d = decompose(rho);
  CHECK(hs_norm<double>((recompose(d).mat - rho.mat()).eval()) < 1e-12);

  // every chi term is traceless over each of its sites
  for (int p = 0; p < 3; ++p) {
    CHECK(hs_norm<double>(partial_trace(d.pair_corr[static_cast<size_t>(p)], 0)) < 1e-12);
    CHECK(hs_norm<double>(partial_trace(d.pair_corr[static_cast<size_t>(p)], 1)) < 1e-12);
  }
  for (int s = 0; s < 3; ++s)
    CHECK(hs_norm<double>(partial_trace(d.triple_corr, s)) < 1e-12);

  CHECK_THROWS_AS(decompose(random_density(SystemDims{2, 2}, 2, 1)), std::invalid_argument);
}

TEST_CASE("product states carry no correlation terms") {
  DensityMatrix a = random_density(SystemDims{2}, 2, 21);
  DensityMatrix b = random_density(SystemDims{3}, 2, 22);
  DensityMatrix c = random_density(SystemDims{2}, 1, 23);
  Operator prod = tensor(tensor(a.op, b.op), c.op);
  CorrelationDecomposition d = decompose(DensityMatrix::from(prod));
  for (const Operator& chi : d.pair_corr) CHECK(hs_norm<double>(chi) < 1e-12);
  CHECK(hs_norm<double>(d.triple_corr) < 1e-12);
}

TEST_CASE("ghz three body correlation norm") {
  CorrelationDecomposition d = decompose(ghz_state());
  // pair reductions are the classical mix (|00><00| + |11><11|)/2
  Matc mix = 0.5 * (projector(product_ket(SystemDims{2, 2}, {0, 0})) +
                    projector(product_ket(SystemDims{2, 2}, {1, 1})));
  for (int p = 0; p < 3; ++p) {
    Matc chi = d.pair_corr[static_cast<size_t>(p)].mat;
    CHECK(hs_norm<double>((chi - (mix - Matc::Identity(4, 4) / 4.0)).eval()) < 1e-12);
  }
  CHECK(hs_norm<double>(d.triple_corr) == doctest::Approx(0.70710678118654746).epsilon(1e-12));
}

TEST_CASE("lower order projection is the orthogonal projector onto the span") {
  SystemDims d3{2, 2, 2};
  Rng rng(31);
  Operator x(d3, random_hermitian<double>(rng, 8));
  Operator y(d3, random_hermitian<double>(rng, 8));

  Operator px = lower_order_projection(x);
  CHECK(hs_norm<double>((lower_order_projection(px).mat - px.mat).eval()) < 1e-12);
  CHECK(hs_inner(px, y) == doctest::Approx(hs_inner(x, lower_order_projection(y))).epsilon(1e-10));

  // members of the span are fixed
  Operator pair(SystemDims{2, 2}, random_hermitian<double>(rng, 4));
  Operator z = embed_pair(pair, 0, 2, d3);
  CHECK(hs_norm<double>((lower_order_projection(z).mat - z.mat).eval()) < 1e-12);

  // a genuinely three-body word is killed
  Operator w(d3, kron(kron(pauli_d(3), pauli_d(3)), pauli_d(3)));
  CHECK(hs_norm<double>(lower_order_projection(w)) < 1e-12);

  // complement is orthogonal
  Operator hx = three_body_component(x);
  CHECK(hs_norm<double>((px.mat + hx.mat - x.mat).eval()) < 1e-13);
  CHECK(std::abs(hs_inner(px, hx)) < 1e-10);
}

TEST_CASE("classicality of bipartite states") {
  SystemDims d2{2, 2};

  // a maximally entangled ket is not even CQ
  Vecc bell = (product_ket(d2, {0, 1}) + product_ket(d2, {1, 0})) / std::sqrt(2.0);
  ClassicalityReport re = classicality_bipartite(DensityMatrix::from(d2, projector(bell)));
  CHECK_FALSE(re.is_cq);
  CHECK_FALSE(re.is_cc);

  // a diagonal state is CC and the reported basis dephases it to itself
  Rng rng(5);
  Vecd p = random_pmf(rng, 6);
  DensityMatrix diag = DensityMatrix::from(
      SystemDims{2, 3}, Matc(p.cast<std::complex<double>>().asDiagonal()));
  ClassicalityReport rd = classicality_bipartite(diag);
  CHECK(rd.is_cq);
  CHECK(rd.is_cc);
  CHECK(rd.residual < 1e-9);
  REQUIRE(rd.bases.has_value());
  Operator deph = dephase(diag.op, *rd.bases);
  CHECK(hs_norm<double>((deph.mat - diag.mat()).eval()) < 1e-9);

  // CC in a rotated product basis
  double s = 1.0 / std::sqrt(2.0);
  Matc had(2, 2);
  had << s, s, s, -s;
  Vecc pp = kron(had.col(0), had.col(0));
  Vecc mm = kron(had.col(1), had.col(1));
  DensityMatrix rot =
      DensityMatrix::from(d2, (0.7 * projector(pp) + 0.3 * projector(mm)).eval());
  CHECK(classicality_bipartite(rot).is_cc);

  // classical on the first site only
  Matc plus = projector(had.col(0));
  Matc zero = projector(Vecc(ket(2, 0)));
  Matc cq = 0.5 * kron(zero, plus) + 0.5 * kron(projector(Vecc(ket(2, 1))), zero);
  ClassicalityReport rq = classicality_bipartite(DensityMatrix::from(d2, cq));
  CHECK(rq.is_cq);
  CHECK_FALSE(rq.is_cc);

  // the maximally mixed state is classical in any basis
  DensityMatrix mm4 = DensityMatrix::from(d2, (Matc::Identity(4, 4) / 4.0).eval());
  CHECK(classicality_bipartite(mm4).is_cc);
}

TEST_CASE("conditional operators of a product state") {
  DensityMatrix x = random_density(SystemDims{2}, 2, 41);
  DensityMatrix y = random_density(SystemDims{3}, 3, 42);
  DensityMatrix rho = DensityMatrix::from(tensor(x.op, y.op));

  std::vector<Matc> fam = conditional_operators(rho, 0);
  std::vector<Matc> basis = hermitian_basis(3);
  REQUIRE(fam.size() == basis.size());
  for (size_t k = 0; k < fam.size(); ++k) {
    std::complex<double> w = (y.mat() * basis[k]).trace();
    CHECK(hs_norm<double>((fam[k] - x.mat() * w).eval()) < 1e-12);
  }

  std::vector<Matc> fam1 = conditional_operators(rho, 1);
  std::vector<Matc> basis2 = hermitian_basis(2);
  REQUIRE(fam1.size() == basis2.size());
  for (size_t k = 0; k < fam1.size(); ++k) {
    std::complex<double> w = (x.mat() * basis2[k]).trace();
    CHECK(hs_norm<double>((fam1[k] - y.mat() * w).eval()) < 1e-12);
  }
}

TEST_CASE("hermitian basis is orthonormal") {
  for (int d : {2, 3}) {
    std::vector<Matc> basis = hermitian_basis(d);
    REQUIRE(static_cast<int>(basis.size()) == d * d);
    for (size_t i = 0; i < basis.size(); ++i) {
      CHECK(hs_norm<double>((basis[i] - basis[i].adjoint().eval()).eval()) < 1e-15);
      for (size_t j = 0; j < basis.size(); ++j) {
        double want = i == j ? 1.0 : 0.0;
        CHECK(hs_inner(basis[i], basis[j]) == doctest::Approx(want).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("commutators of embedded reductions") {
  CommutatorReport zero = commutator_delta(reductions_of(ghz_state()));
  CHECK(zero.max_norm < 1e-12);

  double q = 1.0 / std::sqrt(3.0);
  CommutatorReport cr = commutator_delta(reductions_of(three_pauli_mix(q)));
  for (double dn : cr.delta_norms)
    CHECK(dn == doctest::Approx(0.1178511301977579).epsilon(1e-9));
  CHECK(cr.max_norm == doctest::Approx(std::sqrt(2.0) / 12.0).epsilon(1e-9));

  // the norm scales as q^2 sqrt(2)/4
  CommutatorReport ch = commutator_delta(reductions_of(three_pauli_mix(0.5)));
  CHECK(ch.max_norm == doctest::Approx(0.25 * std::sqrt(2.0) / 4.0).epsilon(1e-9));
}

TEST_CASE("certificate that no classical global state exists") {
  CHECK(no_classical_global_certificate(reductions_of(three_pauli_mix(1.0 / std::sqrt(3.0)))));
  CHECK_FALSE(no_classical_global_certificate(reductions_of(ghz_state())));

  // reductions of a generic pure state are not CC, so the check refuses
  MarginalTriple e = reductions_of(random_pure(SystemDims{2, 2, 2}, 77));
  CHECK_THROWS_AS(no_classical_global_certificate(e), std::invalid_argument);
}

TEST_CASE("classical completion of the ghz reductions") {
  DensityMatrix ghz = ghz_state();
  MarginalTriple e = reductions_of(ghz);
  DensityMatrix done = classical_global_completion(e, ghz);
  SystemDims d3{2, 2, 2};
  Matc want = 0.5 * (projector(product_ket(d3, {0, 0, 0})) +
                     projector(product_ket(d3, {1, 1, 1})));
  CHECK(hs_norm<double>((done.mat() - want).eval()) < 1e-9);
}

TEST_CASE("classical completion on random classical triples") {
  for (uint64_t seed = 100; seed < 110; ++seed) {
    DensityMatrix rho = classical_product_basis_state(seed);
    MarginalTriple e = reductions_of(rho);

    TripleClassicality t = classical_triple_check(e);
    CHECK(t.all_cc);
    CHECK(commutator_delta(e).max_norm < 1e-10);

    DensityMatrix done = classical_global_completion(e, rho);
    MarginalTriple back = reductions_of(done);
    double res = std::max({hs_norm<double>((back.ab.mat() - e.ab.mat()).eval()),
                           hs_norm<double>((back.ac.mat() - e.ac.mat()).eval()),
                           hs_norm<double>((back.bc.mat() - e.bc.mat()).eval())});
    CHECK(res < 1e-9);

    // the completion is diagonal in the common classical basis
    ProductBasis basis = common_classical_basis(e);
    CHECK(hs_norm<double>((dephase(done.op, basis).mat - done.mat()).eval()) < 1e-9);
  }
}

TEST_CASE("completion guards") {
  // commutators must vanish
  DensityMatrix pm = three_pauli_mix(1.0 / std::sqrt(3.0));
  CHECK_THROWS_AS(classical_global_completion(reductions_of(pm), pm), std::invalid_argument);

  // the provided state must carry the requested marginals
  DensityMatrix ghz = ghz_state();
  DensityMatrix other = random_density(SystemDims{2, 2, 2}, 8, 55);
  CHECK_THROWS_AS(classical_global_completion(reductions_of(ghz), other),
                  std::invalid_argument);
}
