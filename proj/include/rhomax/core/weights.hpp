// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "rhomax/core/critical_radius.hpp"
#include "rhomax/core/domain.hpp"

namespace rhomax {

struct WeightReport {
  double p = 1.0;  // 1 for the A_1 quotient
  double theta = 0.0;
  double constant = 0.0;
  Cube worst_cube;
  std::vector<double> half_sides;  // per-scale profile
  std::vector<double> per_scale;
  Json to_json() const;
};

/// sup over family cubes inside the domain of
/// (avg w)^(1/p) (avg w^(1-p'))^(1/p') / (1 + r/rho(centre))^theta. p > 1, w > 0.
WeightReport ap_rho_constant(const SampledFunction& w, double p, double theta, const CriticalRadius& rho,
                             const CubeFamily& fam);
/// sup over family cubes inside the domain of (avg w) / ((1 + r/rho)^theta inf_Q w).
WeightReport a1_rho_constant(const SampledFunction& w, double theta, const CriticalRadius& rho, const CubeFamily& fam);

struct A1PointwiseReport {
  double C = 0.0;  // max over the grid of M^{rho,theta} w / w
  std::size_t worst_point = 0;
  Json to_json() const;
};
A1PointwiseReport a1_pointwise_check(const SampledFunction& w, double theta, const CriticalRadius& rho,
                                     const CubeFamily& fam);

/// Operational meaning of "finite constant": the estimate changes by at most
/// refine_tol (relative) under N -> 2N and grows by at most diverge_factor under L -> 2L.
struct FinitenessRule {
  double refine_tol = 0.20;
  double diverge_factor = 2.0;
  Json to_json() const;
  static FinitenessRule from_json(const Json& j);
};

struct FinitenessProbe {
  double at_N = 0, at_2N = 0, at_2L = 0;
  double refine_change = 0, growth = 0;
  bool finite = false;
  Json to_json() const;
};

/// Applies the rule to the A_p^{rho,theta} constant (p == 1 selects A_1) of the weight spec.
FinitenessProbe probe_weight_constant(const Json& weight_spec, const Domain& dom, double p, double theta,
                                      const CriticalRadius& rho, const FinitenessRule& rule);

struct OpennessReport {
  bool found = false;
  double epsilon = 0.0;
  double theta = 0.0;
  std::vector<Json> trials;
  Json to_json() const;
};

/// Scans epsilon from the largest ladder value down (each with the theta sweep in
/// increasing order) and reports the first pair whose A_{p-eps}^{rho,theta} constant
/// passes the finiteness rule.
OpennessReport openness_probe(const Json& weight_spec, const Domain& dom, double p, const CriticalRadius& rho,
                              const std::vector<double>& eps_ladder, const std::vector<double>& theta_sweep,
                              const FinitenessRule& rule = {});

}  // namespace rhomax
