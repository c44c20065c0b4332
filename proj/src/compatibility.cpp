// Copyright 2026
// SPDX-License-Identifier: Apache-2.0

#include "trimarg/compatibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trimarg/correlations.hpp"
#include "trimarg/random.hpp"

namespace trimarg {

namespace {

// Residual of the three pair reductions of g g^dagger against the targets,
// flattened to a real vector.
Eigen::VectorXd reduction_residual(const Matc& g, const MarginalTriple& e,
                                   const std::array<const Matc*, 3>& targets) {
  const SystemDims dims = e.dims3;
  Matc x = (g * g.adjoint()).eval();
  std::array<Matc, 3> red = {partial_trace(Operator(dims, x), 2).mat,
                             partial_trace(Operator(dims, x), 1).mat,
                             partial_trace(Operator(dims, x), 0).mat};
  long len = 0;
  for (const Matc* t : targets) len += 2 * t->size();
  Eigen::VectorXd out(len);
  long at = 0;
  for (int b = 0; b < 3; ++b) {
    Matc d = (red[static_cast<size_t>(b)] - *targets[static_cast<size_t>(b)]).eval();
    for (long j = 0; j < d.size(); ++j) {
      out[at++] = d.data()[j].real();
      out[at++] = d.data()[j].imag();
    }
  }
  return out;
}

// A pinned triple meets the PSD cone tangentially, so the plain alternating
// scheme slows to a crawl. Its unique completion is low rank, which makes
// the reductions a quadratic system in a rank-r factor; a damped least
// squares iteration on that factor lands on the limit at machine precision.
std::optional<DensityMatrix> refine_pinned(const Matc& warm, const MarginalTriple& e,
                                           double feas_tol) {
  const SystemDims dims = e.dims3;
  const long n = dims.total();
  const std::array<const Matc*, 3> targets = {&e.ab.mat(), &e.ac.mat(), &e.bc.mat()};
  auto es = eigh(Operator(dims, hermitize(warm)));
  std::vector<std::pair<double, int>> order;  // cliff size, rank
  for (int r = 1; r < n; ++r) {
    const double kept = std::max(es.values[n - r], 0.0);
    if (kept <= 0) continue;
    const double dropped = std::max(es.values[n - r - 1], 0.0);
    order.emplace_back(kept / (dropped + 1e-300), r);
  }
  std::sort(order.begin(), order.end(),
            [](const auto& u, const auto& v) { return u.first > v.first; });

  for (const auto& [score, r] : order) {
    Matc g(n, r);
    for (int j = 0; j < r; ++j)
      g.col(j) =
          es.vectors.col(n - r + j) * std::sqrt(std::max(es.values[n - r + j], 1e-8));
    const long np = 2 * n * r;
    Eigen::VectorXd f = reduction_residual(g, e, targets);
    double mu = 1e-3;
    for (int it = 0; it < 150 && f.lpNorm<Eigen::Infinity>() > 1e-13; ++it) {
      // The reduction map is linear, so each column is its value on the
      // rank-one perturbation of x induced by one real parameter of g.
      Eigen::MatrixXd jac(f.size(), np);
      for (long q = 0; q < np; ++q) {
        Matc dir = Matc::Zero(n, r);
        dir.data()[q / 2] =
            (q % 2 == 0) ? std::complex<double>(1, 0) : std::complex<double>(0, 1);
        Matc d = (dir * g.adjoint() + g * dir.adjoint()).eval();
        std::array<Matc, 3> red = {partial_trace(Operator(dims, d), 2).mat,
                                   partial_trace(Operator(dims, d), 1).mat,
                                   partial_trace(Operator(dims, d), 0).mat};
        long at = 0;
        for (int b = 0; b < 3; ++b)
          for (long jj = 0; jj < red[static_cast<size_t>(b)].size(); ++jj) {
            jac(at++, q) = red[static_cast<size_t>(b)].data()[jj].real();
            jac(at++, q) = red[static_cast<size_t>(b)].data()[jj].imag();
          }
      }
      Eigen::MatrixXd gram = jac.transpose() * jac;
      Eigen::VectorXd rhs = -jac.transpose() * f;
      bool stepped = false;
      for (int tries = 0; tries < 8 && !stepped; ++tries) {
        Eigen::MatrixXd damped = gram;
        damped.diagonal().array() += mu;
        Eigen::VectorXd delta = damped.ldlt().solve(rhs);
        Matc gt = g;
        for (long q = 0; q < np; ++q)
          gt.data()[q / 2] += (q % 2 == 0) ? std::complex<double>(delta[q], 0)
                                           : std::complex<double>(0, delta[q]);
        Eigen::VectorXd ft = reduction_residual(gt, e, targets);
        if (ft.squaredNorm() < f.squaredNorm()) {
          g = gt;
          f = ft;
          mu = std::max(mu * 0.4, 1e-12);
          stepped = true;
        } else {
          mu *= 4;
        }
      }
      if (!stepped) break;
    }
    if (f.lpNorm<Eigen::Infinity>() <= 1e-13) {
      Operator a = project_affine(Operator(dims, (g * g.adjoint()).eval()), e);
      if (eigh(a).values[0] >= -feas_tol) {
        try {
          return DensityMatrix::from(a);
        } catch (const std::invalid_argument&) {
          return project_psd_trace1(a);
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Operator candidate_zero3body(const MarginalTriple& e) {
  if (!consistency_check(e).consistent)
    throw std::invalid_argument("candidate_zero3body: inconsistent single-site marginals");
  std::array<Operator, 3> singles = singles_of(e);
  std::array<Operator, 3> chi = {
      Operator(e.ab.dims(), e.ab.mat() - kron(singles[0].mat, singles[1].mat)),
      Operator(e.ac.dims(), e.ac.mat() - kron(singles[0].mat, singles[2].mat)),
      Operator(e.bc.dims(), e.bc.mat() - kron(singles[1].mat, singles[2].mat))};
  return recompose_zero3(singles, chi, e.dims3);
}

Operator project_affine(const Operator& x, const MarginalTriple& e) {
  if (x.dims != e.dims3) throw std::invalid_argument("project_affine: dims mismatch");
  // The candidate has a genuine three-site component whenever every single
  // marginal is non-uniform, so anchor the affine set at its lower-order part.
  Operator anchor = lower_order_projection(candidate_zero3body(e));
  Operator low = lower_order_projection(x);
  return Operator(x.dims, anchor.mat + x.mat - low.mat);
}

FeasibilityOutcome solve_feasibility_from(const Operator& start, const MarginalTriple& e,
                                          const SolveConfig& cfg) {
  if (start.dims != e.dims3)
    throw std::invalid_argument("solve_feasibility_from: dims mismatch");
  if (!consistency_check(e).consistent)
    throw std::invalid_argument("solve_feasibility_from: inconsistent single-site marginals");

  const SystemDims dims = e.dims3;
  const long n = dims.total();
  const Operator cand = candidate_zero3body(e);
  const Matc anchor = lower_order_projection(cand).mat;
  auto to_affine = [&](const Matc& m) {
    Operator low = lower_order_projection(Operator(dims, m));
    return Operator(dims, anchor + m - low.mat);
  };
  auto as_state = [&](const Operator& a) {
    // The affine track has exact marginals; only clip if the configured floor
    // is looser than what the state type accepts.
    try {
      return DensityMatrix::from(a);
    } catch (const std::invalid_argument&) {
      return project_psd_trace1(a);
    }
  };

  FeasibilityOutcome out;
  Operator a = to_affine(start.mat);
  if (eigh(a).values[0] >= -cfg.feas_tol) {
    out.verdict = Feasibility::feasible;
    out.state = as_state(a);
    return out;
  }

  Matc p = Matc::Zero(n, n);
  Operator s_op = a;
  double gap = std::numeric_limits<double>::infinity();
  double window_gap = gap;
  for (long k = 1; k <= cfg.max_iters; ++k) {
    Matc ap = hermitize((a.mat + p).eval());
    DensityMatrix s = project_psd_trace1(Operator(dims, ap));
    p = ap - s.mat();
    a = to_affine(s.mat());
    s_op = s.op;
    gap = hs_norm<double>((s.mat() - a.mat).eval());
    out.gap = gap;
    out.iterations = k;

    if (gap <= 1e-7 || k % 100 == 0) {
      if (eigh(a).values[0] >= -cfg.feas_tol) {
        out.verdict = Feasibility::feasible;
        out.state = as_state(a);
        return out;
      }
    }
    if (k % cfg.stag_window == 0) {
      const double improve = (window_gap - gap) / std::max(gap, 1e-300);
      if (std::isfinite(window_gap) && improve < cfg.stag_rtol && gap > 0) {
        auto w = witness_from_gap(s_op, a, e, cfg.witness_min_margin);
        if (w) {
          out.verdict = Feasibility::infeasible;
          out.witness = w;
          return out;
        }
      }
      window_gap = gap;
    }
  }

  auto w = witness_from_gap(s_op, a, e, cfg.witness_min_margin);
  if (w) {
    out.verdict = Feasibility::infeasible;
    out.witness = w;
    return out;
  }
  out.verdict = Feasibility::undecided;
  return out;
}

FeasibilityOutcome solve_feasibility(const MarginalTriple& e, const SolveConfig& cfg) {
  if (!consistency_check(e).consistent)
    throw std::invalid_argument("solve_feasibility: inconsistent single-site marginals");
  const Operator cand = candidate_zero3body(e);
  FeasibilityOutcome best = solve_feasibility_from(cand, e, cfg);
  long total = best.iterations;
  if (best.verdict != Feasibility::undecided) return best;

  Rng rng(cfg.seed);
  const long n = e.dims3.total();
  for (int r = 1; r < cfg.restarts; ++r) {
    Matc h = random_hermitian<double>(rng, n);
    Operator start(e.dims3, hermitize((cand.mat + h).eval()));
    FeasibilityOutcome res = solve_feasibility_from(start, e, cfg);
    total += res.iterations;
    if (res.verdict != Feasibility::undecided) {
      res.iterations = total;
      return res;
    }
    if (res.gap < best.gap) best = res;
  }
  best.iterations = total;
  return best;
}

std::optional<CompatibilityWitness> witness_from_gap(const Operator& psd_point,
                                                     const Operator& affine_point,
                                                     const MarginalTriple& e,
                                                     double min_margin) {
  if (psd_point.dims != e.dims3 || affine_point.dims != e.dims3)
    throw std::invalid_argument("witness_from_gap: dims mismatch");
  Operator diff(e.dims3, (psd_point.mat - affine_point.mat).eval());
  Operator low = lower_order_projection(diff);
  const double nn = hs_norm<double>(low);
  if (nn <= 1e-12) return std::nullopt;
  CompatibilityWitness w;
  w.w = Operator(e.dims3, (low.mat / nn).eval());
  w.affine_value = hs_inner(w.w, candidate_zero3body(e));
  w.psd_bound = eigh(w.w).values[0];
  w.margin = w.psd_bound - w.affine_value;
  if (w.margin < min_margin) return std::nullopt;
  if (!verify_witness(w, e)) return std::nullopt;
  return w;
}

bool verify_witness(const CompatibilityWitness& w, const MarginalTriple& e) {
  try {
    if (w.w.dims != e.dims3) return false;
    if (std::abs(hs_norm<double>(w.w) - 1.0) > 1e-9) return false;
    if (hs_norm<double>(three_body_component(w.w)) > 1e-10) return false;
    const double c = hs_inner(w.w, candidate_zero3body(e));
    if (std::abs(c - w.affine_value) > 1e-9) return false;
    const double lam = eigh(w.w).values[0];
    if (std::abs(lam - w.psd_bound) > 1e-9) return false;
    if (std::abs(w.margin - (w.psd_bound - w.affine_value)) > 1e-9) return false;
    return w.margin > 1e-10;
  } catch (const std::exception&) {
    return false;
  }
}

double distance_D(const DensityMatrix& rho, const MarginalTriple& e) {
  if (rho.dims() != e.dims3) throw std::invalid_argument("distance_D: dims mismatch");
  MarginalTriple r = reductions_of(rho);
  auto sq = [](const Matc& x, const Matc& y) {
    const double d = hs_norm<double>((x - y).eval());
    return d * d;
  };
  return sq(r.ab.mat(), e.ab.mat()) + sq(r.ac.mat(), e.ac.mat()) +
         sq(r.bc.mat(), e.bc.mat());
}

UniquenessProbe uniqueness_probe(const MarginalTriple& e, int n_starts, uint64_t seed,
                                 const SolveConfig& cfg) {
  if (n_starts < 1) throw std::invalid_argument("uniqueness_probe: need at least one start");
  UniquenessProbe probe;
  probe.n_starts = n_starts;
  // The probe compares limit points, so the feasible exit has to be sharp.
  const double sharp = std::min(cfg.feas_tol, 1e-12);
  const SystemDims dims = e.dims3;
  const Operator cand = candidate_zero3body(e);
  const Matc anchor = lower_order_projection(cand).mat;
  const long n = dims.total();
  Rng rng(seed);
  for (int i = 0; i < n_starts; ++i) {
    Matc h = random_hermitian<double>(rng, n);
    Matc s = hermitize((cand.mat + h).eval());
    Matc a = (anchor + s - lower_order_projection(Operator(dims, s)).mat).eval();
    Matc p = Matc::Zero(n, n);
    std::optional<DensityMatrix> hit;
    long plain = 0;
    for (long stage : {2000L, 10000L, 40000L}) {
      stage = std::min(stage, cfg.max_iters);
      for (; plain < stage && !hit; ++plain) {
        Matc ap = hermitize((a + p).eval());
        DensityMatrix st = project_psd_trace1(Operator(dims, ap));
        p = ap - st.mat();
        s = st.mat();
        a = (anchor + s - lower_order_projection(Operator(dims, s)).mat).eval();
        if (plain % 100 == 0 && eigh(Operator(dims, a)).values[0] >= -sharp) {
          try {
            hit = DensityMatrix::from(Operator(dims, a));
          } catch (const std::invalid_argument&) {
            hit = project_psd_trace1(Operator(dims, a));
          }
        }
      }
      if (hit) break;
      hit = refine_pinned(s, e, sharp);
      if (hit || plain >= cfg.max_iters) break;
    }
    if (hit) probe.states.push_back(*hit);
  }
  if (probe.states.empty())
    throw std::invalid_argument("uniqueness_probe: no start converged to a feasible state");
  for (std::size_t i = 0; i < probe.states.size(); ++i)
    for (std::size_t j = i + 1; j < probe.states.size(); ++j)
      probe.max_pairwise =
          std::max(probe.max_pairwise,
                   hs_norm<double>((probe.states[i].mat() - probe.states[j].mat()).eval()));
  return probe;
}

}  // namespace trimarg
