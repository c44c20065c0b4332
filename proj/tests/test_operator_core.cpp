// Tests for the dense operator layer: indexing, partial traces, projections.

#include <doctest.h>

#include <cmath>
#include <complex>

#include "trimarg/core.hpp"
#include "trimarg/random.hpp"

using namespace trimarg;

namespace {

const std::complex<double> kI(0, 1);

Matc random_herm(uint64_t seed, long n) {
  Rng rng(seed);
  return random_hermitian<double>(rng, n);
}

}  // namespace

TEST_CASE("system dims bookkeeping") {
  SystemDims d{2, 3, 2};
  CHECK(d.total() == 12);
  CHECK(d.sites() == 3);
  CHECK(d[1] == 3);
  CHECK(d.without(1) == SystemDims{2, 2});
  CHECK_THROWS_AS(d.check_site(3), std::invalid_argument);
  CHECK_THROWS_AS(SystemDims{std::vector<int>{}}, std::invalid_argument);
  CHECK_THROWS_AS((SystemDims{2, 0}), std::invalid_argument);

  // site 0 is most significant: |011> for qubits sits at index 3
  Vecc v = product_ket(SystemDims{2, 2, 2}, {0, 1, 1});
  CHECK(std::abs(v[3] - 1.0) < 1e-15);
  CHECK(v.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("operator construction validates") {
  Matc m(2, 2);
  m << 1, kI, kI, 1;  // not Hermitian
  CHECK_THROWS_AS(Operator(SystemDims{2}, m), std::invalid_argument);
  Matc h(2, 2);
  h << 1, kI, -kI, 1;
  CHECK_NOTHROW(Operator(SystemDims{2}, h));
  CHECK_THROWS_AS(Operator(SystemDims{3}, h), std::invalid_argument);
}

TEST_CASE("pauli algebra") {
  CHECK(hs_norm<double>((pauli_d(1) * pauli_d(2) - kI * pauli_d(3)).eval()) < 1e-15);
  CHECK(hs_norm<double>((pauli_d(2) * pauli_d(3) - kI * pauli_d(1)).eval()) < 1e-15);
  for (int k = 1; k <= 3; ++k) {
    CHECK(std::abs(pauli_d(k).trace()) < 1e-15);
    CHECK(hs_norm<double>((pauli_d(k) * pauli_d(k) - Matc::Identity(2, 2)).eval()) < 1e-15);
  }
  CHECK_THROWS_AS(pauli_d(4), std::invalid_argument);
}

TEST_CASE("kron agrees with an index loop") {
  Rng rng(7);
  Matc a = randn_cmat<double>(rng, 2, 2);
  Matc b = randn_cmat<double>(rng, 3, 3);
  Matc k = kron(a, b);
  REQUIRE(k.rows() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
          CHECK(std::abs(k(i * 3 + p, j * 3 + q) - a(i, j) * b(p, q)) < 1e-14);
}

TEST_CASE("partial trace against a manual digit sum") {
  SystemDims d{2, 3, 2};
  Rng rng(11);
  Matc g = randn_cmat<double>(rng, d.total(), d.total());
  Matc m = hermitize((g + Matc::Identity(d.total(), d.total()) * 5.0).eval());
  Operator x(d, m);
  Operator t1 = partial_trace(x, 1);
  REQUIRE(t1.dims == SystemDims{2, 2});
  // manual sum over the middle digit
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int ap = 0; ap < 2; ++ap)
        for (int cp = 0; cp < 2; ++cp) {
          std::complex<double> s = 0;
          for (int b = 0; b < 3; ++b) s += m(a * 6 + b * 2 + c, ap * 6 + b * 2 + cp);
          CHECK(std::abs(t1.mat(a * 2 + c, ap * 2 + cp) - s) < 1e-13);
        }
}

TEST_CASE("partial trace of a product splits into traces") {
  Matc a = hermitize(random_herm(3, 2));
  Matc b = hermitize(random_herm(4, 3));
  Operator x(SystemDims{2, 3}, kron(a, b));
  Operator ta = partial_trace(x, 1);
  CHECK(hs_norm<double>((ta.mat - a * b.trace()).eval()) < 1e-12);
  Operator tb = partial_trace(x, 0);
  CHECK(hs_norm<double>((tb.mat - b * a.trace()).eval()) < 1e-12);
}

TEST_CASE("permute sites moves product factors") {
  Matc a = random_herm(1, 2), b = random_herm(2, 3), c = random_herm(5, 2);
  Operator x(SystemDims{2, 3, 2}, kron(kron(a, b), c));
  Operator y = permute_sites(x, {2, 0, 1});  // output site p carries input perm[p]
  Operator want(SystemDims{2, 2, 3}, kron(kron(c, a), b));
  REQUIRE(y.dims == want.dims);
  CHECK(hs_norm<double>((y.mat - want.mat).eval()) < 1e-12);
  // inverse permutation round trip
  Operator back = permute_sites(y, {1, 2, 0});
  CHECK(hs_norm<double>((back.mat - x.mat).eval()) < 1e-12);
}

TEST_CASE("embed pair pads the remaining site") {
  Matc a = random_herm(1, 2), b = random_herm(2, 2);
  SystemDims d3{2, 2, 2};
  Operator pair(SystemDims{2, 2}, kron(a, b));
  Operator e02 = embed_pair(pair, 0, 2, d3);
  Operator want(d3, kron(kron(a, Matc::Identity(2, 2)), b));
  CHECK(hs_norm<double>((e02.mat - want.mat).eval()) < 1e-12);
  Operator e12 = embed_pair(pair, 1, 2, d3);
  Operator want12(d3, kron(kron(Matc::Identity(2, 2), a), b));
  CHECK(hs_norm<double>((e12.mat - want12.mat).eval()) < 1e-12);
}

TEST_CASE("partial transpose is an involution with known spectrum") {
  SystemDims d{2, 2};
  Vecc phi = ((product_ket(d, {0, 1}) + product_ket(d, {1, 0})) / std::sqrt(2.0)).eval();
  Operator p(d, projector(phi));
  Operator g = partial_transpose(p, 0);
  auto ev = eigh(g).values;
  CHECK(ev[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ev[3] == doctest::Approx(0.5).epsilon(1e-12));
  Operator gg = partial_transpose(g, 0);
  CHECK(hs_norm<double>((gg.mat - p.mat).eval()) < 1e-14);
  // transposing both sites is the full transpose
  Operator g01 = partial_transpose(partial_transpose(p, 0), 1);
  CHECK(hs_norm<double>((g01.mat - p.mat.transpose()).eval()) < 1e-14);
}

TEST_CASE("eigh orders ascending and reconstructs") {
  Matc m = random_herm(9, 5);
  auto es = eigh<double>(m);
  for (int i = 0; i + 1 < 5; ++i) CHECK(es.values[i] <= es.values[i + 1]);
  Matc rec = es.vectors * es.values.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
             es.vectors.adjoint();
  CHECK(hs_norm<double>((rec - m).eval()) < 1e-10);
  Matc bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(eigh<double>(bad), std::invalid_argument);
}

TEST_CASE("simplex projection frozen example") {
  Vecd v(3);
  v << 0.9, 0.3, -0.2;
  Vecd p = project_to_simplex<double>(v);
  CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("psd trace-one projection is the nearest state") {
  SystemDims d{4};
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Matc x = random_hermitian<double>(rng, 4);
    DensityMatrix p = project_psd_trace1(Operator(d, x));
    const double dp = hs_norm<double>((x - p.mat()).eval());
    for (int other = 0; other < 5; ++other) {
      DensityMatrix y = random_density<double>(d, 4, rng());
      CHECK(dp <= hs_norm<double>((x - y.mat()).eval()) + 1e-10);
    }
    CHECK(std::abs(p.mat().trace().real() - 1.0) < 1e-12);
    CHECK(eigh(p.op).values[0] >= -1e-14);
  }
}

TEST_CASE("density matrix validation") {
  SystemDims d{2};
  Matc ok = Matc::Identity(2, 2) / 2.0;
  CHECK_NOTHROW(DensityMatrix::from(Operator(d, ok)));
  Matc off(2, 2);
  off << 0.9, 0, 0, 0.2;  // trace 1.1
  CHECK_THROWS_AS(DensityMatrix::from(Operator(d, off)), std::invalid_argument);
  Matc neg(2, 2);
  neg << 1.2, 0, 0, -0.2;
  CHECK_THROWS_AS(DensityMatrix::from(Operator(d, neg)), std::invalid_argument);
}

TEST_CASE("dephasing in a product basis keeps the diagonal") {
  SystemDims d{2, 2};
  Vecc phi = ((product_ket(d, {0, 1}) + product_ket(d, {1, 0})) / std::sqrt(2.0)).eval();
  Operator p(d, projector(phi));
  Operator dep = dephase(p, ProductBasis::computational(d));
  Matc want = Matc::Zero(4, 4);
  want(1, 1) = 0.5;
  want(2, 2) = 0.5;
  CHECK(hs_norm<double>((dep.mat - want).eval()) < 1e-14);
}

TEST_CASE("single-site dephasing only kills cross terms of that site") {
  SystemDims d{2, 2};
  Vecc phi = ((product_ket(d, {0, 1}) + product_ket(d, {1, 0})) / std::sqrt(2.0)).eval();
  Operator p(d, projector(phi));
  Matc u = Matc::Identity(2, 2);
  Operator dep = dephase_site(p, 0, u);
  // site-0 off-diagonal blocks vanish, the diagonal blocks stay
  Matc want = Matc::Zero(4, 4);
  want(1, 1) = 0.5;
  want(2, 2) = 0.5;
  CHECK(hs_norm<double>((dep.mat - want).eval()) < 1e-14);
  // dephasing a product-diagonal state changes nothing
  Matc diag = Matc::Zero(4, 4);
  diag(0, 0) = 0.3;
  diag(3, 3) = 0.7;
  Operator q(d, diag);
  CHECK(hs_norm<double>((dephase_site(q, 1, u).mat - diag).eval()) < 1e-15);
}

TEST_CASE("product basis validates unitarity") {
  Matc u(2, 2);
  u << 1, 1, 0, 1;
  CHECK_THROWS_AS(ProductBasis({u}), std::invalid_argument);
  ProductBasis cb = ProductBasis::computational(SystemDims{2, 3});
  CHECK(cb.full_unitary().isApprox(Matc::Identity(6, 6)));
}

TEST_CASE("hs inner product and rank") {
  Matc a = random_herm(31, 3);
  Matc b = random_herm(32, 3);
  // Re tr(a b) for Hermitian pairs
  const double direct = (a * b).trace().real();
  CHECK(hs_inner(Operator(SystemDims{3}, a), Operator(SystemDims{3}, b)) ==
        doctest::Approx(direct).epsilon(1e-10));
  Vecc v = ket(3, 1);
  CHECK(rank_eps<double>(projector(v)) == 1);
  CHECK(rank_eps<double>(Matc(Matc::Identity(3, 3))) == 3);
}

TEST_CASE("two-local real symmetric pauli combinations flip sign under y-conjugation") {
  // For chi real symmetric in the span of the 27 non-identity product words,
  // conjugating every site with the second Pauli matrix negates chi.
  Matc y3 = kron(kron(pauli_d(2), pauli_d(2)), pauli_d(2));
  Rng rng(77);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    Matc chi = Matc::Zero(8, 8);
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k)
          chi += gauss(rng) * kron(kron(pauli_d(i), pauli_d(j)), pauli_d(k));
    chi = ((chi + chi.transpose()) / 2.0).eval();
    CHECK((chi + y3 * chi * y3).cwiseAbs().maxCoeff() < 1e-12);
  }
}
