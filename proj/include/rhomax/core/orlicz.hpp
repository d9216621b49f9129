// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "rhomax/core/domain.hpp"
#include "rhomax/core/young.hpp"

namespace rhomax {

/// One cell's contribution to a cube integral: overlap weight (volume) and |f|.
struct CellSample {
  double weight;
  double value;
};

/// Nonzero cells of f inside Q with their overlap volumes (cell volume times fraction).
std::vector<CellSample> gather(const SampledFunction& f, const Overlap& ov);

/// inf{lambda > 0 : sum_i weight_i eta(value_i / lambda) <= measure}.
/// Identity eta is the plain mean; degenerate eta is max value / threshold; otherwise
/// bisection on log(lambda) to rel. 1e-10 (200-step cap), returning the upper end so
/// the modular constraint holds at the returned value.
double luxemburg_solve(const std::vector<CellSample>& cells, double measure, const YoungFunction& eta);

/// ||f||_{eta,Q}. Zero when f vanishes on Q.
double luxemburg_average(const SampledFunction& f, const Cube& q, const YoungFunction& eta);
/// ||f||_{eta,P} restricted to f on the box [lo, hi] (i.e. of f times its indicator), normalised by |P|.
double luxemburg_average_masked(const SampledFunction& f, const Cube& p, const Cube& mask, const YoungFunction& eta);

/// (1/|Q|) int_Q eta(|f| / lambda).
double modular_mean(const SampledFunction& f, const Cube& q, const YoungFunction& eta, double lambda);

/// int Phi(|f| / lambda) w over the domain. lambda <= 0 is an error.
double modular(const SampledFunction& f, const SampledFunction& w, const YoungFunction& Phi, double lambda);
double modular(const SampledFunction& f, const YoungFunction& Phi, double lambda);  // w = 1

/// inf{lambda : modular(f, w, Phi, lambda) <= 1}.
double luxemburg_norm(const SampledFunction& f, const SampledFunction& w, const YoungFunction& Phi);
double luxemburg_norm(const SampledFunction& f, const YoungFunction& Phi);  // w = 1

/// inf over t > 0 of t + (t/|Q|) int_Q eta(|f|/t).
double inf_formula_average(const SampledFunction& f, const Cube& q, const YoungFunction& eta);

struct HolderReport {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  Json to_json() const;
};
/// lhs = (1/|Q|) int_Q |fg|, rhs = 2 ||f||_{Phi,Q} ||g||_{dual Phi,Q}.
HolderReport holder_check(const SampledFunction& f, const SampledFunction& g, const Cube& q, const YoungFunction& Phi);
HolderReport holder_check(const SampledFunction& f, const SampledFunction& g, const Cube& q, const YoungFunction& Phi,
                          const YoungFunction& Phi_dual);

struct ModularNormReport {
  double norm = 0.0, modular = 0.0;
  bool ok = true;
  std::string branch;  // "norm<=1" or "norm>1"
  Json to_json() const;
};
/// If ||f|| <= 1 then rho(f) <= ||f||; otherwise ||f|| <= rho(f). Relative tolerance 1e-8.
ModularNormReport modular_norm_relation_check(const SampledFunction& f, const YoungFunction& phi);

}  // namespace rhomax
