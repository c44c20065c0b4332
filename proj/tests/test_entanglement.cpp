// Tests for PPT checks, range searches, slab detection and the biseparable
// completion routes.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "trimarg/catalog.hpp"
#include "trimarg/compatibility.hpp"
#include "trimarg/correlations.hpp"
#include "trimarg/entanglement.hpp"
#include "trimarg/random.hpp"
#include "trimarg/triple.hpp"

using namespace trimarg;

namespace {

DensityMatrix ghz_state() {
  SystemDims d{2, 2, 2};
  Vecc v = (product_ket(d, {0, 0, 0}) + product_ket(d, {1, 1, 1})) / std::sqrt(2.0);
  return DensityMatrix::from(d, projector(v));
}

DensityMatrix three_pauli_mix(double q) {
  Matc i2 = Matc::Identity(2, 2);
  Matc m = kron(kron(i2, i2), i2);
  m += q * kron(kron(i2, pauli_d(1)), pauli_d(1));
  m += q * kron(kron(pauli_d(2), i2), pauli_d(2));
  m += q * kron(kron(pauli_d(3), pauli_d(3)), i2);
  return DensityMatrix::from(SystemDims{2, 2, 2}, (m / 8.0).eval());
}

DensityMatrix bell_state() {
  SystemDims d{2, 2};
  Vecc v = (product_ket(d, {0, 1}) + product_ket(d, {1, 0})) / std::sqrt(2.0);
  return DensityMatrix::from(d, projector(v));
}

DensityMatrix classical_mix_pair() {
  SystemDims d{2, 2};
  Matc m = 0.5 * (projector(product_ket(d, {0, 0})) + projector(product_ket(d, {1, 1})));
  return DensityMatrix::from(d, m);
}

// Rank three state on 2x2 whose kernel is exactly span{v}.
DensityMatrix rank3_with_kernel(const Vecc& v) {
  Matc m = (Matc::Identity(4, 4) - projector(v)) / 3.0;
  return DensityMatrix::from(SystemDims{2, 2}, hermitize(m));
}

DensityMatrix maximally_mixed(const SystemDims& d) {
  const long n = d.total();
  return DensityMatrix::from(d, (Matc::Identity(n, n) / static_cast<double>(n)).eval());
}

Eigen::Matrix2d rotation2(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

double triple_residual(const DensityMatrix& rho, const MarginalTriple& e) {
  MarginalTriple back = reductions_of(rho);
  return std::max({hs_norm<double>((back.ab.mat() - e.ab.mat()).eval()),
                   hs_norm<double>((back.ac.mat() - e.ac.mat()).eval()),
                   hs_norm<double>((back.bc.mat() - e.bc.mat()).eval())});
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

TEST_CASE("ppt check across every cut") {
  DensityMatrix ghz = ghz_state();
  for (int s = 0; s < 3; ++s) {
    PptResult r = ppt_check(ghz, s);
    CHECK_FALSE(r.is_ppt);
    CHECK(r.min_eig == doctest::Approx(-0.5).epsilon(1e-12));
  }
  DensityMatrix pm = three_pauli_mix(1.0 / std::sqrt(3.0));
  for (int s = 0; s < 3; ++s) CHECK(ppt_check(pm, s).is_ppt);
}

TEST_CASE("birank of standard pairs") {
  Birank bell = birank(bell_state());
  CHECK(bell.r == 1);
  CHECK(bell.r_gamma == 4);
  Birank mix = birank(classical_mix_pair());
  CHECK(mix.r == 2);
  CHECK(mix.r_gamma == 2);
}

TEST_CASE("separability in the small regime") {
  CHECK(separable_small(maximally_mixed(SystemDims{2, 2})));
  CHECK(separable_small(maximally_mixed(SystemDims{2, 3})));
  CHECK_FALSE(separable_small(bell_state()));
  CHECK_THROWS_AS(separable_small(maximally_mixed(SystemDims{3, 3})), std::invalid_argument);
  CHECK_THROWS_AS(separable_small(maximally_mixed(SystemDims{2, 2, 2})),
                  std::invalid_argument);
}

TEST_CASE("product vector search in the range") {
  ProductSearchResult full = product_in_range(maximally_mixed(SystemDims{2, 2}), 5, 3);
  CHECK(full.found);
  CHECK(full.best_residual == 0);

  ProductSearchResult bell = product_in_range(bell_state(), 50, 3);
  CHECK_FALSE(bell.found);
  CHECK(bell.best_residual == doctest::Approx(0.5).epsilon(1e-9));

  ProductSearchResult mix = product_in_range(classical_mix_pair(), 20, 3);
  CHECK(mix.found);
  CHECK(mix.best_residual < 1e-10);
}

TEST_CASE("slab detection with a qubit slab side is exact") {
  // classical mix: range span{|00>, |11>} holds no 2d slab on either side
  CHECK(a_finite_check(classical_mix_pair(), 0));
  CHECK(a_finite_check(classical_mix_pair(), 1));

  // full range holds every slab
  CHECK_FALSE(a_finite_check(maximally_mixed(SystemDims{2, 2}), 0));

  // entangled kernel vector blocks slabs
  SystemDims d{2, 2};
  Vecc singlet = (product_ket(d, {0, 1}) - product_ket(d, {1, 0})) / std::sqrt(2.0);
  CHECK(a_finite_check(rank3_with_kernel(singlet), 0));
  CHECK(a_finite_check(rank3_with_kernel(singlet), 1));

  // product kernel vector leaves a slab through the orthogonal ket
  CHECK_FALSE(a_finite_check(rank3_with_kernel(product_ket(d, {0, 0})), 0));
  CHECK_FALSE(a_finite_check(rank3_with_kernel(product_ket(d, {0, 0})), 1));
}

TEST_CASE("slab detection heuristic on a wider side") {
  // kernel |00> on 3x2: any 2d subspace times |1> fits in the range
  SystemDims d{3, 2};
  Matc m = (Matc::Identity(6, 6) - projector(product_ket(d, {0, 0}))) / 5.0;
  DensityMatrix rho = DensityMatrix::from(d, hermitize(m));
  CHECK_FALSE(a_finite_check(rho, 0));

  // a random rank four state has a generic two dimensional kernel: the three
  // minor equations on the partner ket have no common root
  DensityMatrix generic = random_density(SystemDims{3, 2}, 4, 19);
  CHECK(a_finite_check(generic, 0));
  CHECK(a_finite_check(generic, 1));
}

TEST_CASE("partial transpose invariance") {
  Rng rng(23);
  Vecd p = random_pmf(rng, 8);
  DensityMatrix diag = DensityMatrix::from(
      SystemDims{2, 2, 2}, Matc(p.cast<std::complex<double>>().asDiagonal()));
  CHECK(pt_invariant_biseparable(diag));
  CHECK_FALSE(pt_invariant_biseparable(ghz_state()));

  DensityMatrix pm = three_pauli_mix(1.0 / std::sqrt(3.0));
  CHECK_FALSE(pt_invariant_biseparable(pm));

  // its site A transpose is instead a local sigma3 conjugation
  Matc flip = kron(kron(pauli_d(3), Matc::Identity(2, 2)), Matc::Identity(2, 2));
  Matc got = partial_transpose(pm.op, 0).mat;
  CHECK(hs_norm<double>((got - flip * pm.mat() * flip).eval()) < 1e-12);

  CHECK_THROWS_AS(pt_invariant_biseparable(bell_state()), std::invalid_argument);
}

TEST_CASE("pivot dephasing preserves the triple") {
  DensityMatrix ghz = ghz_state();
  MarginalTriple e = reductions_of(ghz);
  DensityMatrix done = cq_dephase_completion(e, ghz, 0);
  SystemDims d3{2, 2, 2};
  Matc want = 0.5 * (projector(product_ket(d3, {0, 0, 0})) +
                     projector(product_ket(d3, {1, 1, 1})));
  CHECK(hs_norm<double>((done.mat() - want).eval()) < 1e-9);

  for (uint64_t seed : {61u, 62u}) {
    DensityMatrix rho = classical_product_basis_state(seed);
    MarginalTriple ec = reductions_of(rho);
    for (int pivot = 0; pivot < 3; ++pivot) {
      DensityMatrix out = cq_dephase_completion(ec, rho, pivot);
      CHECK(triple_residual(out, ec) < 1e-9);
    }
  }
}

TEST_CASE("pivot dephasing refuses clashing bases") {
  double s = 1.0 / std::sqrt(2.0);
  Matc had(2, 2);
  had << s, s, s, -s;
  SystemDims d2{2, 2};
  Matc mpp = 0.5 * (projector(Vecc(kron(Matc(had.col(0)), Matc(had.col(0))))) +
                    projector(Vecc(kron(Matc(had.col(1)), Matc(had.col(1))))));
  DensityMatrix ac = DensityMatrix::from(d2, hermitize(mpp));
  MarginalTriple e(classical_mix_pair(), ac, maximally_mixed(d2));
  REQUIRE(consistency_check(e).consistent);
  CHECK_THROWS_AS(cq_dephase_completion(e, maximally_mixed(SystemDims{2, 2, 2}), 0),
                  std::invalid_argument);
}

TEST_CASE("maximally correlated pinching") {
  DensityMatrix ghz = ghz_state();
  MarginalTriple e = reductions_of(ghz);
  DensityMatrix done = maxcorr_dephase_completion(e, ghz);
  SystemDims d3{2, 2, 2};
  Matc want = 0.5 * (projector(product_ket(d3, {0, 0, 0})) +
                     projector(product_ket(d3, {1, 1, 1})));
  CHECK(hs_norm<double>((done.mat() - want).eval()) < 1e-12);
  CHECK(triple_residual(done, e) < 1e-12);

  // a reduction with all four weights alive is not maximally correlated
  DensityMatrix pm = three_pauli_mix(0.5);
  CHECK_THROWS_AS(maxcorr_dephase_completion(reductions_of(pm), pm), std::invalid_argument);
}

TEST_CASE("completion dispatcher picks the pinching routes") {
  CompletionResult ghz_done = biseparable_completion_cc_qubits(reductions_of(ghz_state()));
  CHECK(ghz_done.success);
  CHECK(ghz_done.route == "maxcorr_dephase");
  REQUIRE(ghz_done.state.has_value());
  CHECK(triple_residual(*ghz_done.state, reductions_of(ghz_state())) < 1e-8);

  DensityMatrix rho = classical_product_basis_state(71);
  MarginalTriple ec = reductions_of(rho);
  CompletionResult cls = biseparable_completion_cc_qubits(ec);
  CHECK(cls.success);
  CHECK(cls.route == "pivot_dephase");
  REQUIRE(cls.state.has_value());
  CHECK(triple_residual(*cls.state, ec) < 1e-8);
}

TEST_CASE("completion dispatcher reports honest failures") {
  MarginalTriple pure = reductions_of(random_pure(SystemDims{2, 2, 2}, 77));
  CompletionResult r1 = biseparable_completion_cc_qubits(pure);
  CHECK_FALSE(r1.success);
  CHECK(r1.message == "reductions are not all CC");

  MarginalTriple wide = reductions_of(maximally_mixed(SystemDims{2, 2, 3}));
  CompletionResult r2 = biseparable_completion_cc_qubits(wide);
  CHECK_FALSE(r2.success);
  CHECK(r2.message == "needs three qubits");
}

TEST_CASE("symmetric family triples resolve through the candidate route") {
  // interior weights with computational bases: candidate positivity decides
  Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  CatalogEntry good = make_cc_symmetric(0.2, 0.2, 0.2, eye, eye, eye);
  REQUIRE(good.triple.has_value());
  CompletionResult ok = biseparable_completion_cc_qubits(*good.triple);
  CHECK(ok.success);
  CHECK(ok.route == "candidate");
  REQUIRE(ok.state.has_value());
  CHECK(triple_residual(*ok.state, *good.triple) < 1e-8);

  CatalogEntry bad = make_cc_symmetric(0.05, 0.05, 0.05, eye, eye, eye);
  REQUIRE(bad.triple.has_value());
  CompletionResult no = biseparable_completion_cc_qubits(*bad.triple);
  CHECK_FALSE(no.success);
  CHECK(no.route == "candidate");
  CHECK(no.message.find("not positive") != std::string::npos);

  // random rotated instances: success iff the candidate is positive
  Rng rng(83);
  std::uniform_real_distribution<double> uw(0.02, 0.23);
  std::uniform_real_distribution<double> ut(0.0, 3.141592653589793);
  int done = 0;
  int attempts = 0;
  while (done < 8 && attempts < 200) {
    ++attempts;
    CatalogEntry ent = make_cc_symmetric(uw(rng), uw(rng), uw(rng), rotation2(ut(rng)),
                                         rotation2(ut(rng)), rotation2(ut(rng)));
    REQUIRE(ent.triple.has_value());
    const double lam = eigh(candidate_zero3body(*ent.triple)).values[0];
    if (std::abs(lam) <= 1e-6) continue;  // keep away from the family boundary
    ++done;
    CompletionResult res = biseparable_completion_cc_qubits(*ent.triple);
    CHECK(res.route == "candidate");
    if (lam >= 0) {
      CHECK(res.success);
      REQUIRE(res.state.has_value());
      CHECK(triple_residual(*res.state, *ent.triple) < 1e-8);
    } else {
      CHECK_FALSE(res.success);
    }
  }
  CHECK(done == 8);
}
