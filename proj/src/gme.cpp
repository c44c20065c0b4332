// Copyright 2026
// SPDX-License-Identifier: Apache-2.0

#include "trimarg/gme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "trimarg/compatibility.hpp"
#include "trimarg/correlations.hpp"
#include "trimarg/random.hpp"

namespace trimarg {

namespace {

Matc psd_clip(const Matc& m) {
  auto es = eigh<double>(hermitize(m));
  Vecd lam = es.values.cwiseMax(0.0);
  return (es.vectors * lam.asDiagonal() * es.vectors.adjoint()).eval();
}

Matc pt_site(const Matc& m, const SystemDims& dims, int site) {
  return partial_transpose(Operator(dims, hermitize(m)), site).mat;
}

const char* verdict_label(GmeVerdict v) {
  switch (v) {
    case GmeVerdict::biseparable_compatible: return "biseparable_compatible";
    case GmeVerdict::only_gme: return "only_gme";
    default: return "undecided";
  }
}

struct PptmixDetail {
  GMEOutcome out;
  std::vector<double> restart_d;  // best split defect per restart
};

PptmixDetail run_pptmix(const MarginalTriple& e, const GmeConfig& cfg,
                        bool stop_on_feasible) {
  if (!consistency_check(e).consistent)
    throw std::invalid_argument("solve_pptmix_marginals: inconsistent single-site marginals");

  const SystemDims dims = e.dims3;
  const long n = dims.total();
  PptmixDetail det;
  GMEOutcome& out = det.out;
  const Operator cand = candidate_zero3body(e);
  // Anchor for the affine step: the candidate itself can carry a three-site
  // component, so compare lower-order parts on both sides.
  const Matc anchor = lower_order_projection(cand).mat;

  // Shortcut: a PSD candidate that stays PPT across every cut is its own
  // equal-thirds split.
  if (eigh(cand).values[0] >= -cfg.feas_tol) {
    DensityMatrix c;
    try {
      c = DensityMatrix::from(cand);
    } catch (const std::invalid_argument&) {
      c = project_psd_trace1(cand);
    }
    bool all_ppt = true;
    for (int s = 0; s < 3 && all_ppt; ++s) all_ppt = ppt_check(c, s, cfg.feas_tol).is_ppt;
    if (all_ppt) {
      out.verdict = GmeVerdict::biseparable_compatible;
      Operator third(dims, (c.mat() / 3.0).eval());
      out.parts = PptMixtureParts{third, third, third};
      out.state = c;
      det.restart_d = {0.0};
      return det;
    }
  }

  Rng rng(cfg.seed);
  long total_iters = 0;
  int gme_votes = 0;
  bool any_undecided = false;
  double min_gap = std::numeric_limits<double>::infinity();

  for (int r = 0; r < cfg.restarts; ++r) {
    std::array<Matc, 3> parts;
    if (r == 0) {
      parts.fill((cand.mat / 3.0).eval());
    } else {
      for (int x = 0; x < 3; ++x)
        parts[static_cast<size_t>(x)] =
            (random_density<double>(dims, static_cast<int>(n), rng()).mat() / 3.0).eval();
    }
    std::array<Matc, 3> p1, p2;
    p1.fill(Matc::Zero(n, n));
    p2.fill(Matc::Zero(n, n));

    double best_d = std::numeric_limits<double>::infinity();
    double corr_min = std::numeric_limits<double>::infinity();
    double corr_max = 0;
    bool stagnated = false;
    bool feasible = false;
    long k = 0;
    for (k = 1; k <= cfg.max_iters; ++k) {
      // PSD cones
      for (int x = 0; x < 3; ++x) {
        auto xi = static_cast<size_t>(x);
        Matc t = parts[xi] + p1[xi];
        Matc s = psd_clip(t);
        p1[xi] = t - s;
        parts[xi] = s;
      }
      // PPT cones, each part across its own cut
      for (int x = 0; x < 3; ++x) {
        auto xi = static_cast<size_t>(x);
        Matc t = parts[xi] + p2[xi];
        Matc s = pt_site(psd_clip(pt_site(t, dims, x)), dims, x);
        p2[xi] = t - s;
        parts[xi] = s;
      }
      const bool probe = (k % 10 == 0) || (k == cfg.max_iters);
      if (probe) {
        // Split point assembled from the cone-feasible parts.
        Matc split = psd_clip(parts[0]) + psd_clip(parts[1]) + psd_clip(parts[2]);
        const double tr = split.trace().real();
        if (tr > 0.25) {
          DensityMatrix sp = DensityMatrix::from(Operator(dims, hermitize((split / tr).eval())));
          best_d = std::min(best_d, distance_D(sp, e));
        }
      }
      // Affine step: least-norm correction toward the prescribed reductions.
      Matc sum = parts[0] + parts[1] + parts[2];
      Matc corr =
          ((anchor - lower_order_projection(Operator(dims, hermitize(sum))).mat) / 3.0)
              .eval();
      for (int x = 0; x < 3; ++x) parts[static_cast<size_t>(x)] += corr;
      if (probe) {
        const double cn = hs_norm<double>(Operator(dims, corr));
        corr_min = std::min(corr_min, cn);
        corr_max = std::max(corr_max, cn);
      }

      if (probe) {
        double floor = std::numeric_limits<double>::infinity();
        for (int x = 0; x < 3; ++x) {
          auto xi = static_cast<size_t>(x);
          Matc h = hermitize(parts[xi]);
          floor = std::min(floor, eigh<double>(h).values[0]);
          floor = std::min(floor, eigh<double>(pt_site(h, dims, x)).values[0]);
        }
        if (floor >= -cfg.feas_tol) {
          Matc total = hermitize((parts[0] + parts[1] + parts[2]).eval());
          DensityMatrix st;
          try {
            st = DensityMatrix::from(Operator(dims, total));
          } catch (const std::invalid_argument&) {
            st = project_psd_trace1(Operator(dims, total));
          }
          out.verdict = GmeVerdict::biseparable_compatible;
          out.state = st;
          out.parts = PptMixtureParts{Operator(dims, hermitize(parts[0])),
                                      Operator(dims, hermitize(parts[1])),
                                      Operator(dims, hermitize(parts[2]))};
          feasible = true;
          best_d = 0;
          break;
        }
        if (k % cfg.stag_window == 0) {
          // The per-iteration affine displacement converges to the gap vector
          // between the cone product and the marginal subspace; a window where
          // it is pinned at a clearly nonzero norm certifies a positive gap.
          const bool frozen = (corr_max - corr_min) <= cfg.stag_rtol * corr_max &&
                              corr_min > 10.0 * cfg.feas_tol;
          if (frozen) {
            stagnated = true;
            break;
          }
          corr_min = std::numeric_limits<double>::infinity();
          corr_max = 0;
        }
      }
    }
    total_iters += std::min(k, cfg.max_iters);
    det.restart_d.push_back(best_d);
    min_gap = std::min(min_gap, best_d);
    if (feasible) {
      out.gap = 0;
      out.restarts_agreeing = 1;
      out.iterations = total_iters;
      if (stop_on_feasible) return det;
      continue;
    }
    if (stagnated && best_d > cfg.gap_floor)
      ++gme_votes;
    else
      any_undecided = true;
  }

  if (out.verdict == GmeVerdict::biseparable_compatible) {
    out.iterations = total_iters;
    return det;
  }
  out.iterations = total_iters;
  out.gap = std::isfinite(min_gap) ? min_gap : 0;
  out.restarts_agreeing = gme_votes;
  out.verdict = (!any_undecided && gme_votes == cfg.restarts) ? GmeVerdict::only_gme
                                                              : GmeVerdict::undecided;
  return det;
}

}  // namespace

GMEOutcome solve_pptmix_marginals(const MarginalTriple& e, const GmeConfig& cfg) {
  return run_pptmix(e, cfg, true).out;
}

GmeCertification certify_only_gme(const MarginalTriple& e, const GmeConfig& cfg) {
  if (!consistency_check(e).consistent)
    throw std::invalid_argument("certify_only_gme: inconsistent single-site marginals");
  GmeCertification cert;
  cert.outcome = solve_pptmix_marginals(e, cfg);

  RangeRankChecks& c = cert.checks;
  const std::array<const DensityMatrix*, 3> reds = {&e.ab, &e.ac, &e.bc};
  for (int k = 0; k < 3; ++k) {
    auto ki = static_cast<size_t>(k);
    c.finiteness[ki] = {a_finite_check(*reds[ki], 0, 20, cfg.seed),
                        a_finite_check(*reds[ki], 1, 20, cfg.seed + 1)};
  }
  c.ab = birank(e.ab);
  c.bc = birank(e.bc);
  c.rank_b = rank_eps(singles_of(e)[1]);
  c.bc_pattern = (c.bc.r == c.rank_b + 1) && (c.bc.r_gamma == c.rank_b + 1);
  c.ab_asymmetric = c.ab.r != c.ab.r_gamma;
  cert.only_gme = cert.outcome.verdict == GmeVerdict::only_gme;
  return cert;
}

DbsEstimate d_bs_lower_bound(const MarginalTriple& e, const GmeConfig& cfg,
                             bool exhaustive) {
  PptmixDetail det = run_pptmix(e, cfg, !exhaustive);
  DbsEstimate est;
  if (det.out.verdict == GmeVerdict::biseparable_compatible) {
    est.value = det.out.state ? distance_D(*det.out.state, e) : 0;
    est.stable = true;
  } else {
    double mn = std::numeric_limits<double>::infinity();
    double mx = 0;
    for (double d : det.restart_d) {
      mn = std::min(mn, d);
      mx = std::max(mx, d);
    }
    est.value = std::isfinite(mn) ? mn : 0;
    est.stable = !det.restart_d.empty() && (mx - mn) <= 0.25 * std::max(mx, 1e-300);
  }
  est.label = (exhaustive && est.stable) ? "stable" : "evidence";
  return est;
}

RobustnessScanResult robustness_scan(const DensityMatrix& sigma,
                                     const DensityMatrix& mixer,
                                     const ScanConfig& cfg) {
  if (sigma.dims() != mixer.dims())
    throw std::invalid_argument("robustness_scan: dims mismatch");
  if (sigma.dims().sites() != 3)
    throw std::invalid_argument("robustness_scan: need three-site states");
  if (!(cfg.p_max > 0 && cfg.p_max <= 1))
    throw std::invalid_argument("robustness_scan: p_max must be in (0, 1]");

  auto tau = [&](double p) {
    Matc m = ((1.0 - p) * sigma.mat() + p * mixer.mat()).eval();
    return DensityMatrix::from(Operator(sigma.dims(), hermitize(m)));
  };
  auto eval = [&](double p) {
    GmeCertification cert = certify_only_gme(reductions_of(tau(p)), cfg.gme);
    ScanPoint pt;
    pt.p = p;
    pt.verdict = cert.outcome.verdict;
    pt.gap = cert.outcome.gap;
    return pt;
  };

  RobustnessScanResult res;
  std::vector<ScanPoint>& pts = res.points;
  if (cfg.bisect) {
    ScanPoint lo = eval(0.0);
    pts.push_back(lo);
    if (lo.verdict != GmeVerdict::only_gme) {
      res.p_bar = 0;
    } else {
      ScanPoint hi = eval(cfg.p_max);
      pts.push_back(hi);
      if (hi.verdict == GmeVerdict::only_gme) {
        res.p_bar = cfg.p_max;
      } else {
        double plo = 0, phi = cfg.p_max;
        while (phi - plo > cfg.resolution) {
          const double mid = (plo + phi) / 2;
          ScanPoint m = eval(mid);
          pts.push_back(m);
          if (m.verdict == GmeVerdict::only_gme)
            plo = mid;
          else
            phi = mid;
        }
        res.p_bar = plo;
      }
    }
  } else {
    if (!(cfg.grid_step > 0))
      throw std::invalid_argument("robustness_scan: grid_step must be positive");
    bool prefix_gme = true;
    for (long i = 0;; ++i) {
      double p = static_cast<double>(i) * cfg.grid_step;
      if (p > cfg.p_max + 1e-12) break;
      p = std::min(p, cfg.p_max);
      ScanPoint sp = eval(p);
      pts.push_back(sp);
      if (prefix_gme && sp.verdict == GmeVerdict::only_gme)
        res.p_bar = p;
      else
        prefix_gme = false;
      if (p >= cfg.p_max) break;
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const ScanPoint& x, const ScanPoint& y) { return x.p < y.p; });
  return res;
}

std::string scan_to_csv(const RobustnessScanResult& r) {
  std::string out = "p,verdict,gap\n";
  char buf[128];
  for (const ScanPoint& pt : r.points) {
    std::snprintf(buf, sizeof buf, "%.10g,%s,%.10g\n", pt.p, verdict_label(pt.verdict),
                  pt.gap);
    out += buf;
  }
  return out;
}

}  // namespace trimarg
