// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rhomax/core/error.hpp"
#include "rhomax/core/functions.hpp"
#include "rhomax/core/maximal.hpp"

namespace rhomax {
namespace {

void check_weight(const SampledFunction& w) {
  for (double x : w.values()) require(x > 0.0, ErrorKind::Domain, "weight must be positive on the grid");
}

// Total overlap fraction of the cube with the grid, exact in binary for family cubes.
double overlap_cells(const Overlap& ov) {
  double c = 1.0;
  for (int a = 0; a < ov.dim; ++a) {
    const AxisSpan& ax = ov.axes[static_cast<std::size_t>(a)];
    double s = 0.0;
    for (int i = ax.lo; i <= ax.hi; ++i) s += ax.weight(i);
    c *= s;
  }
  return c;
}

// Sliding minimum over cells with positive overlap: |j - i| <= M with M = ceil(s/h + 1/2) - 1.
std::vector<double> window_min(const Domain& dom, const std::vector<double>& v, double s) {
  const int M = static_cast<int>(std::ceil(s / dom.h() + 0.5 - 1e-9)) - 1;
  std::vector<double> neg(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
  // Reuse the max sweep on a one-level family with window radius M.
  CubeFamily fam;
  fam.half_sides = {M * dom.h()};
  SampledFunction out = sweep_max(dom, fam, [&](std::size_t c, const Cube&) { return neg[c]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = -out[i];
  return r;
}

template <class Term>
WeightReport scan(const SampledFunction& w, double p, double theta, const CriticalRadius& rho, const CubeFamily& fam,
                  Term term) {
  const Domain& dom = w.domain();
  const std::vector<double> r = sample_rho(rho, dom);
  WeightReport rep;
  rep.p = p;
  rep.theta = theta;
  rep.constant = -std::numeric_limits<double>::infinity();
  for (double s : fam.half_sides) {
    double best = -std::numeric_limits<double>::infinity();
    Cube arg;
    term.prepare(s);
    for (std::size_t c = 0; c < dom.size(); ++c) {
      const Cube q{dom.point(c), s};
      if (!dom.inside(q)) continue;
      const double v = term(c, q) / std::pow(1.0 + q.radius() / r[c], theta);
      if (v > best) {
        best = v;
        arg = q;
      }
    }
    if (best == -std::numeric_limits<double>::infinity()) continue;
    rep.half_sides.push_back(s);
    rep.per_scale.push_back(best);
    if (best > rep.constant) {
      rep.constant = best;
      rep.worst_cube = arg;
    }
  }
  require(!rep.per_scale.empty(), ErrorKind::InvalidArgument, "no family cube lies inside the domain");
  return rep;
}

}  // namespace

Json WeightReport::to_json() const {
  return Json{{"p", p},
              {"theta", theta},
              {"constant", constant},
              {"worst_cube", worst_cube.to_json()},
              {"half_sides", half_sides},
              {"per_scale", per_scale}};
}

WeightReport ap_rho_constant(const SampledFunction& w, double p, double theta, const CriticalRadius& rho,
                             const CubeFamily& fam) {
  require(p > 1.0, ErrorKind::InvalidArgument, "A_p constant needs p > 1");
  require(theta >= 0.0, ErrorKind::InvalidArgument, "theta must be >= 0");
  check_weight(w);
  const double pp = p / (p - 1.0);
  const SampledFunction dual = w.map([&](double x) { return std::pow(x, 1.0 - pp); });
  struct Term {
    const SampledFunction& w;
    const SampledFunction& dual;
    double p, pp;
    void prepare(double) {}
    double operator()(std::size_t, const Cube& q) const {
      const Overlap ov = overlap(w.domain(), q);
      const double cells = overlap_cells(ov);
      const double a = w.weighted_sum(ov) / cells;
      const double b = dual.weighted_sum(ov) / cells;
      return std::pow(a, 1.0 / p) * std::pow(b, 1.0 / pp);
    }
  };
  return scan(w, p, theta, rho, fam, Term{w, dual, p, pp});
}

WeightReport a1_rho_constant(const SampledFunction& w, double theta, const CriticalRadius& rho, const CubeFamily& fam) {
  require(theta >= 0.0, ErrorKind::InvalidArgument, "theta must be >= 0");
  check_weight(w);
  struct Term {
    const SampledFunction& w;
    std::vector<double> mins;
    void prepare(double s) { mins = window_min(w.domain(), w.values(), s); }
    double operator()(std::size_t c, const Cube& q) const {
      const Overlap ov = overlap(w.domain(), q);
      return w.weighted_sum(ov) / overlap_cells(ov) / mins[c];
    }
  };
  return scan(w, 1.0, theta, rho, fam, Term{w, {}});
}

Json A1PointwiseReport::to_json() const { return Json{{"C", C}, {"worst_point", worst_point}}; }

A1PointwiseReport a1_pointwise_check(const SampledFunction& w, double theta, const CriticalRadius& rho,
                                     const CubeFamily& fam) {
  check_weight(w);
  CubeFamily inside = fam;
  inside.policy = BoundaryPolicy::InsideOnly;
  const SampledFunction M = hl_maximal(w, rho, theta, inside);
  A1PointwiseReport rep;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (M[i] / w[i] > rep.C) {
      rep.C = M[i] / w[i];
      rep.worst_point = i;
    }
  return rep;
}

Json FinitenessRule::to_json() const { return Json{{"refine_tol", refine_tol}, {"diverge_factor", diverge_factor}}; }

FinitenessRule FinitenessRule::from_json(const Json& j) {
  require(j.is_object(), ErrorKind::Config, "finiteness must be an object");
  FinitenessRule r;
  for (auto it = j.begin(); it != j.end(); ++it) {
    require(it.value().is_number(), ErrorKind::Config, "finiteness fields must be numbers");
    if (it.key() == "refine_tol")
      r.refine_tol = it.value().get<double>();
    else if (it.key() == "diverge_factor")
      r.diverge_factor = it.value().get<double>();
    else
      fail(ErrorKind::Config, "unknown key '" + it.key() + "' in finiteness");
  }
  require(r.refine_tol > 0.0 && r.diverge_factor > 1.0, ErrorKind::Config,
          "finiteness needs refine_tol > 0 and diverge_factor > 1");
  return r;
}

Json FinitenessProbe::to_json() const {
  return Json{{"at_N", at_N},
              {"at_2N", at_2N},
              {"at_2L", at_2L},
              {"refine_change", refine_change},
              {"growth", growth},
              {"finite", finite}};
}

FinitenessProbe probe_weight_constant(const Json& weight_spec, const Domain& dom, double p, double theta,
                                      const CriticalRadius& rho, const FinitenessRule& rule) {
  auto estimate = [&](const Domain& d) {
    const SampledFunction w = make_weight(d, weight_spec);
    const CubeFamily fam = CubeFamily::standard(d, BoundaryPolicy::InsideOnly);
    return p == 1.0 ? a1_rho_constant(w, theta, rho, fam).constant : ap_rho_constant(w, p, theta, rho, fam).constant;
  };
  FinitenessProbe pr;
  pr.at_N = estimate(dom);
  pr.at_2N = estimate(dom.refined());
  // L -> 2L at the same cell size.
  pr.at_2L = estimate(Domain(dom.dim(), 2.0 * dom.half_width(), 2 * dom.cells_per_axis()));
  pr.refine_change = std::abs(pr.at_2N - pr.at_N) / pr.at_N;
  pr.growth = pr.at_2L / pr.at_N;
  pr.finite = std::isfinite(pr.at_N) && std::isfinite(pr.at_2N) && pr.refine_change <= rule.refine_tol &&
              pr.growth <= rule.diverge_factor;
  return pr;
}

Json OpennessReport::to_json() const {
  return Json{{"found", found}, {"epsilon", epsilon}, {"theta", theta}, {"trials", trials}};
}

OpennessReport openness_probe(const Json& weight_spec, const Domain& dom, double p, const CriticalRadius& rho,
                              const std::vector<double>& eps_ladder, const std::vector<double>& theta_sweep,
                              const FinitenessRule& rule) {
  require(p > 1.0, ErrorKind::InvalidArgument, "openness probe needs p > 1");
  require(!eps_ladder.empty() && !theta_sweep.empty(), ErrorKind::InvalidArgument,
          "openness probe needs non-empty ladders");
  std::vector<double> eps = eps_ladder, th = theta_sweep;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  std::sort(th.begin(), th.end());
  OpennessReport rep;
  for (double e : eps) {
    if (!(e > 0.0 && e < p - 1.0)) continue;
    for (double t : th) {
      const FinitenessProbe pr = probe_weight_constant(weight_spec, dom, p - e, t, rho, rule);
      Json trial = pr.to_json();
      trial["epsilon"] = e;
      trial["theta"] = t;
      rep.trials.push_back(trial);
      if (pr.finite) {
        rep.found = true;
        rep.epsilon = e;
        rep.theta = t;
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace rhomax
