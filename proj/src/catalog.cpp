// Copyright 2026
// SPDX-License-Identifier: Apache-2.0

#include "trimarg/catalog.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "trimarg/compatibility.hpp"
#include "trimarg/io.hpp"

namespace trimarg {

namespace {

nlohmann::json expect(nlohmann::json value, const char* origin) {
  return nlohmann::json{{"value", std::move(value)}, {"origin", origin}};
}

Matc range_projector(const Matc& m) {
  auto es = eigh<double>(m);
  const double eps = Tol::rank_rel * std::max(1.0, m.norm());
  Matc pr = Matc::Zero(m.rows(), m.cols());
  for (long i = 0; i < es.values.size(); ++i)
    if (std::abs(es.values[i]) > eps) pr += es.vectors.col(i) * es.vectors.col(i).adjoint();
  return pr;
}

}  // namespace

CatalogEntry make_ghz() {
  CatalogEntry ent;
  ent.name = "ghz";
  ent.params = nlohmann::json::object();
  SystemDims d{{2, 2, 2}};
  Vecc v = ((product_ket(d, {0, 0, 0}) + product_ket(d, {1, 1, 1})) / std::sqrt(2.0)).eval();
  ent.state = DensityMatrix::from(Operator(d, projector(v)));
  ent.expected = {
      {"rank", expect(1, "closed_form")},
      {"pair_reductions_half_classical_mix", expect(true, "closed_form")},
      {"chi3_norm", expect(0.5 * std::sqrt(2.0), "computed")},
      {"all_cc", expect(true, "closed_form")},
      {"commutators_vanish", expect(true, "closed_form")},
      {"candidate_is_classical_mix", expect(true, "computed")},
      {"npt_every_cut", expect(true, "computed")},
  };
  return ent;
}

CatalogEntry make_pauli_mix(double q) {
  const double qmax = 1.0 / std::sqrt(3.0);
  if (!(std::abs(q) <= qmax + 1e-12))
    throw std::invalid_argument("pauli_mix: |q| must not exceed 1/sqrt(3)");
  CatalogEntry ent;
  ent.name = "pauli_mix";
  ent.params = {{"q", q}};
  SystemDims d{{2, 2, 2}};
  const Matc one = Matc::Identity(2, 2);
  Matc m = kron(kron(one, one), one);
  m += q * kron(kron(one, pauli_d(1)), pauli_d(1));
  m += q * kron(kron(pauli_d(2), one), pauli_d(2));
  m += q * kron(kron(pauli_d(3), pauli_d(3)), one);
  m /= 8.0;
  ent.state = DensityMatrix::from(Operator(d, hermitize(m)));
  const double dmax = q * q * std::sqrt(2.0) / 4.0;
  ent.expected = {
      {"spectrum_low", expect((1.0 - std::sqrt(3.0) * std::abs(q)) / 8.0, "closed_form")},
      {"spectrum_high", expect((1.0 + std::sqrt(3.0) * std::abs(q)) / 8.0, "closed_form")},
      {"chi3_zero", expect(true, "closed_form")},
      {"all_cc", expect(true, "closed_form")},
      {"distinct_pair_bases", expect(std::abs(q) > 1e-9, "closed_form")},
      {"delta_max", expect(dmax, "computed")},
      {"no_classical_global", expect(dmax > Tol::commutator, "computed")},
      {"candidate_is_state", expect(true, "computed")},
      {"ppt_every_cut", expect(true, "computed")},
  };
  return ent;
}

CatalogEntry make_rank2_gme() {
  CatalogEntry ent;
  ent.name = "rank2_gme";
  ent.params = nlohmann::json::object();
  SystemDims d{{2, 2, 2}};
  Vecc xi = (0.5 * product_ket(d, {0, 1, 0}) + 0.5 * product_ket(d, {1, 0, 0}) +
             (1.0 / std::sqrt(2.0)) * product_ket(d, {0, 0, 1}))
                .eval();
  Matc m = (2.0 / 3.0) * projector(xi) +
           (1.0 / 3.0) * projector(product_ket(d, {1, 1, 1}));
  ent.state = DensityMatrix::from(Operator(d, hermitize(m)));
  ent.expected = {
      {"rank", expect(2, "closed_form")},
      {"birank_ab", expect(nlohmann::json{3, 4}, "closed_form")},
      {"birank_ac", expect(nlohmann::json{3, 3}, "closed_form")},
      {"birank_bc", expect(nlohmann::json{3, 3}, "closed_form")},
      {"reductions_ppt", expect(true, "computed")},
      {"unique_compatible", expect(true, "closed_form")},
      {"only_gme", expect(true, "closed_form")},
  };
  return ent;
}

CatalogEntry make_gme_family(int d, const std::vector<double>& weights) {
  if (d < 1) throw std::invalid_argument("gme_family: d must be at least 1");
  if (static_cast<int>(weights.size()) != d)
    throw std::invalid_argument("gme_family: need exactly d weights");
  if (!(weights[0] > 0))
    throw std::invalid_argument("gme_family: the first weight must be positive");
  double sum = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("gme_family: weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("gme_family: weights must sum to 1");

  CatalogEntry ent;
  ent.name = "gme_family";
  ent.params = {{"d", d}, {"weights", weights}};
  const int dd = d + 1;
  SystemDims big{{dd, dd, dd}};
  CatalogEntry base = make_rank2_gme();
  const Matc& s8 = base.state->mat();
  Matc m = Matc::Zero(big.total(), big.total());
  auto lift = [&](long idx8) {
    const long a = idx8 / 4, b = (idx8 / 2) % 2, c = idx8 % 2;
    return (a * dd + b) * dd + c;
  };
  for (long i = 0; i < 8; ++i)
    for (long j = 0; j < 8; ++j) m(lift(i), lift(j)) = weights[0] * s8(i, j);
  for (int mm = 2; mm <= d; ++mm)
    m += weights[static_cast<size_t>(mm - 1)] * projector(product_ket(big, {mm, mm, mm}));
  ent.state = DensityMatrix::from(Operator(big, hermitize(m)));
  ent.expected = {
      {"rank", expect(d + 1, "closed_form")},
      {"birank_ab", expect(nlohmann::json{d + 2, d + 3}, "closed_form")},
      {"birank_bc", expect(nlohmann::json{d + 2, d + 2}, "closed_form")},
      {"rank_b", expect(d + 1, "closed_form")},
      {"only_gme", expect(true, "closed_form")},
  };
  return ent;
}

CatalogEntry make_unique_separable(double p) {
  if (!(p > 0 && p < 1))
    throw std::invalid_argument("unique_separable: p must lie strictly between 0 and 1");
  CatalogEntry ent;
  ent.name = "unique_separable";
  ent.params = {{"p", p}};
  Vecc a(2);
  a << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  SystemDims d2{{2, 2}};
  Vecc v00 = kron(Matc(ket(2, 0)), Matc(ket(2, 0)));
  Vecc vaa = kron(Matc(a), Matc(a));
  Matc pair = p * projector(v00) + (1 - p) * projector(vaa);
  DensityMatrix rab = DensityMatrix::from(Operator(d2, hermitize(pair)));
  ent.triple = MarginalTriple(rab, rab, rab);
  SystemDims d3{{2, 2, 2}};
  Vecc t0 = product_ket(d3, {0, 0, 0});
  Vecc ta = kron(kron(Matc(a), Matc(a)), Matc(a));
  Matc m = p * projector(t0) + (1 - p) * projector(ta);
  ent.state = DensityMatrix::from(Operator(d3, hermitize(m)));
  ent.expected = {
      {"unique_compatible", expect(true, "closed_form")},
      {"state_separable", expect(true, "closed_form")},
      {"pairs_cc", expect(false, "computed")},
  };
  return ent;
}

CatalogEntry make_cc_symmetric(double p, double q, double r,
                               const Eigen::Matrix2d& basis_a,
                               const Eigen::Matrix2d& basis_b,
                               const Eigen::Matrix2d& basis_c) {
  for (double v : {p, q, r})
    if (!(v > 0 && v < 0.25))
      throw std::invalid_argument("cc_symmetric: parameters must lie in (0, 1/4)");
  for (const Eigen::Matrix2d* b : {&basis_a, &basis_b, &basis_c})
    if (((*b).transpose() * (*b) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("cc_symmetric: bases must be real orthonormal");

  SystemDims d2{{2, 2}};
  auto pair_state = [&](double w, const Matc& u, const Matc& v) {
    Matc m = Matc::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double wt = (i == j) ? w : 0.5 - w;
        Vecc k2 = kron(Matc(u.col(i)), Matc(v.col(j)));
        m += wt * projector(k2);
      }
    return DensityMatrix::from(Operator(d2, hermitize(m)));
  };
  const Matc eye = Matc::Identity(2, 2);
  const Matc ma = basis_a.cast<std::complex<double>>();
  const Matc mb = basis_b.cast<std::complex<double>>();
  const Matc mc = basis_c.cast<std::complex<double>>();

  CatalogEntry ent;
  ent.name = "cc_symmetric";
  ent.params = {{"p", p},
                {"q", q},
                {"r", r},
                {"basis_a", matrix_to_json(ma)},
                {"basis_b", matrix_to_json(mb)},
                {"basis_c", matrix_to_json(mc)}};
  DensityMatrix rab = pair_state(p, eye, eye);
  DensityMatrix rbc = pair_state(q, mb, eye);
  DensityMatrix rac = pair_state(r, ma, mc);
  ent.triple = MarginalTriple(rab, rac, rbc);
  const double cand_min = eigh(candidate_zero3body(*ent.triple)).values[0];
  ent.expected = {
      {"all_cc", expect(true, "closed_form")},
      {"singles_maximally_mixed", expect(true, "closed_form")},
      {"candidate_min_eig", expect(cand_min, "computed")},
      {"compatible", expect(cand_min >= -Tol::psd, "computed")},
  };
  return ent;
}

CatalogEntry make_cc_symmetric_default() {
  const double v = (1.0 - 1.0 / std::sqrt(3.0)) / 4.0;
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2d plus_minus;
  plus_minus << s, s, s, -s;
  Eigen::Matrix2d minus_plus;
  minus_plus << s, s, -s, s;
  CatalogEntry ent = make_cc_symmetric(v, v, v, plus_minus, plus_minus, minus_plus);

  // Local unitaries mapping the candidate onto the q = -1/sqrt(3) Pauli
  // mixture member.
  const std::complex<double> i1(0, 1);
  Matc ua(2, 2), ub(2, 2), uc(2, 2), had(2, 2);
  ua << 1, 0, 0, i1;
  ub = Matc::Identity(2, 2);
  had << s, s, s, -s;
  Matc phase(2, 2);
  phase << 1, 0, 0, i1;
  uc = had * phase;
  ent.expected["parameter"] = expect(v, "closed_form");
  ent.expected["pauli_mix_q"] = expect(-1.0 / std::sqrt(3.0), "computed");
  ent.expected["u_a"] = expect(matrix_to_json(ua), "computed");
  ent.expected["u_b"] = expect(matrix_to_json(ub), "computed");
  ent.expected["u_c"] = expect(matrix_to_json(uc), "computed");
  ent.expected["candidate_spectrum"] =
      expect(nlohmann::json{0.0, 0.0, 0.0, 0.0, 0.25, 0.25, 0.25, 0.25}, "computed");
  return ent;
}

CatalogEntry make_gme_mixture(const std::vector<double>& weights,
                              const std::vector<std::pair<Vecc, Vecc>>& pairs) {
  if (weights.empty()) throw std::invalid_argument("gme_mixture: need weights");
  if (!(weights[0] > 0))
    throw std::invalid_argument("gme_mixture: the rank-two weight must be positive");
  double sum = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("gme_mixture: weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("gme_mixture: weights must sum to 1");

  std::vector<std::pair<Vecc, Vecc>> prs = pairs;
  if (prs.empty() && weights.size() == 2) {
    Vecc a(2), b(2);
    a << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    b << std::sqrt(1.0 / 3.0), std::sqrt(2.0 / 3.0);
    prs.push_back({a, b});
  }
  if (prs.size() != weights.size() - 1)
    throw std::invalid_argument("gme_mixture: need one product pair per extra weight");

  CatalogEntry base = make_rank2_gme();
  const DensityMatrix& sig = *base.state;
  DensityMatrix sbc = partial_trace(sig, 0);
  const Matc pr = range_projector(sbc.mat());
  const Matc prg = range_projector(partial_transpose(sbc.op, 0).mat);
  const Matc eye4 = Matc::Identity(4, 4);

  SystemDims d3{{2, 2, 2}};
  Matc m = weights[0] * sig.mat();
  double worst_res = 0;
  for (std::size_t i = 0; i < prs.size(); ++i) {
    const Vecc& a = prs[i].first;
    const Vecc& b = prs[i].second;
    if (a.size() != 2 || b.size() != 2)
      throw std::invalid_argument("gme_mixture: pair vectors must be qubit kets");
    if (std::abs(a.norm() - 1) > 1e-9 || std::abs(b.norm() - 1) > 1e-9)
      throw std::invalid_argument("gme_mixture: pair vectors must be unit");
    if (a.imag().cwiseAbs().maxCoeff() > 1e-9)
      throw std::invalid_argument("gme_mixture: the a vectors must be real");
    Vecc v = kron(Matc(a), Matc(b));
    const double r1 = std::real((v.adjoint() * (eye4 - pr) * v)(0, 0));
    const double r2 = std::real((v.adjoint() * (eye4 - prg) * v)(0, 0));
    if (r1 > 1e-9 || r2 > 1e-9)
      throw std::invalid_argument("gme_mixture: pair lies outside the required ranges");
    worst_res = std::max({worst_res, r1, r2});
    Vecc trip = kron(kron(Matc(a), Matc(a)), Matc(b));
    m += weights[i + 1] * projector(trip);
  }

  CatalogEntry ent;
  ent.name = "gme_mixture";
  ent.params = {{"weights", weights}};
  ent.state = DensityMatrix::from(Operator(d3, hermitize(m)));
  ent.expected = {
      {"only_gme", expect(true, "closed_form")},
      {"range_residual_max", expect(worst_res, "computed")},
      {"reductions_ppt", expect(true, "computed")},
  };
  return ent;
}

CatalogEntry make_noisy_mix(const DensityMatrix& sigma, const DensityMatrix& mixer,
                            double p) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("noisy_mix: p must be in [0, 1]");
  if (sigma.dims() != mixer.dims())
    throw std::invalid_argument("noisy_mix: dims mismatch");
  CatalogEntry ent;
  ent.name = "noisy_mix";
  ent.params = {{"p", p}};
  Matc m = ((1 - p) * sigma.mat() + p * mixer.mat()).eval();
  ent.state = DensityMatrix::from(Operator(sigma.dims(), hermitize(m)));
  ent.expected = {
      {"marginal_linearity", expect(true, "closed_form")},
  };
  return ent;
}

std::vector<std::string> catalog_names() {
  return {"ghz",         "pauli_mix",        "rank2_gme",   "gme_family",
          "unique_separable", "cc_symmetric", "gme_mixture", "noisy_mix"};
}

CatalogEntry make_by_name(const std::string& name, const nlohmann::json& params) {
  auto get_d = [&](const char* k, double dflt) {
    return params.contains(k) ? params.at(k).get<double>() : dflt;
  };
  if (name == "ghz") return make_ghz();
  if (name == "pauli_mix") return make_pauli_mix(get_d("q", 1.0 / std::sqrt(3.0)));
  if (name == "rank2_gme") return make_rank2_gme();
  if (name == "gme_family") {
    const int d = params.contains("d") ? params.at("d").get<int>() : 2;
    std::vector<double> w;
    if (params.contains("weights")) {
      w = params.at("weights").get<std::vector<double>>();
    } else if (d == 1) {
      w = {1.0};
    } else {
      w.assign(static_cast<size_t>(d), 0.2 / (d - 1));
      w[0] = 0.8;
    }
    return make_gme_family(d, w);
  }
  if (name == "unique_separable") return make_unique_separable(get_d("p", 0.5));
  if (name == "cc_symmetric") {
    if (params.empty()) return make_cc_symmetric_default();
    const double vdef = (1.0 - 1.0 / std::sqrt(3.0)) / 4.0;
    auto basis = [&](const char* k) {
      if (!params.contains(k)) return Eigen::Matrix2d(Eigen::Matrix2d::Identity());
      Matc m = matrix_from_json(params.at(k));
      if (m.rows() != 2 || m.cols() != 2 || m.imag().cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("cc_symmetric: bases must be real 2x2");
      return Eigen::Matrix2d(m.real());
    };
    return make_cc_symmetric(get_d("p", vdef), get_d("q", vdef), get_d("r", vdef),
                             basis("basis_a"), basis("basis_b"), basis("basis_c"));
  }
  if (name == "gme_mixture") {
    std::vector<double> w = params.contains("weights")
                                ? params.at("weights").get<std::vector<double>>()
                                : std::vector<double>{0.7, 0.3};
    std::vector<std::pair<Vecc, Vecc>> prs;
    if (params.contains("pairs")) {
      for (const auto& pj : params.at("pairs")) {
        auto read_vec = [&](const char* k) {
          std::vector<double> c = pj.at(k).get<std::vector<double>>();
          Vecc v(static_cast<long>(c.size()));
          for (std::size_t i = 0; i < c.size(); ++i) v[static_cast<long>(i)] = c[i];
          return v;
        };
        prs.push_back({read_vec("a"), read_vec("b")});
      }
    }
    return make_gme_mixture(w, prs);
  }
  if (name == "noisy_mix") {
    const double p = get_d("p", 0.1);
    DensityMatrix sig = params.contains("sigma") ? state_from_json(params.at("sigma"))
                                                 : *make_rank2_gme().state;
    DensityMatrix mix =
        params.contains("mixer")
            ? state_from_json(params.at("mixer"))
            : DensityMatrix::from(Operator(SystemDims{{2, 2, 2}},
                                           Matc(Matc::Identity(8, 8) / 8.0)));
    return make_noisy_mix(sig, mix, p);
  }
  throw std::invalid_argument("unknown catalog entry: " + name);
}

}  // namespace trimarg
