// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rhomax/core/critical_radius.hpp"
#include "rhomax/core/domain.hpp"
#include "rhomax/core/young.hpp"

namespace rhomax {

/// (1 + r/rho)^(-sigma).
double damping(double r, double rho, double sigma);

/// Value of one family cube; -infinity excludes the cube. The first argument is the
/// flat index of the centre.
using CubeValue = std::function<double(std::size_t, const Cube&)>;

/// M(x) = max over family cubes containing x (closed) of value(Q); 0 where no cube counts.
/// Per ladder level the values are computed at every centre and spread with a
/// separable sliding-window max, so each level costs O(N^d) plus the value calls.
SampledFunction sweep_max(const Domain& dom, const CubeFamily& fam, const CubeValue& value);

/// Same result by the naive double loop over points and cubes (test oracle).
SampledFunction sweep_max_naive(const Domain& dom, const CubeFamily& fam, const CubeValue& value);

/// rho sampled at every grid point.
std::vector<double> sample_rho(const CriticalRadius& rho, const Domain& dom);

SampledFunction hl_maximal(const SampledFunction& f, const CriticalRadius& rho, double sigma, const CubeFamily& fam);
SampledFunction orlicz_maximal(const SampledFunction& f, const YoungFunction& eta, const CriticalRadius& rho,
                               double sigma, const CubeFamily& fam);

/// Lattice offsets with |o| h <= r.
std::vector<Index> ball_offsets(int d, double h, double r);
/// ||f||_{eta,B(x,r)} with B a lattice ball around grid point x; measure h^d * lattice count.
double ball_average(const SampledFunction& f, std::size_t x, double r, const YoungFunction& eta);
/// sup over radii of (1 + r/rho(x))^(-sigma) ||f||_{eta,B(x,r)} at the given grid points.
std::vector<double> centered_ball_maximal_at(const SampledFunction& f, const YoungFunction& eta, double sigma,
                                             const CriticalRadius& rho, const std::vector<double>& radii,
                                             const std::vector<std::size_t>& points);
SampledFunction centered_ball_maximal(const SampledFunction& f, const YoungFunction& eta, double sigma,
                                      const CriticalRadius& rho, const std::vector<double>& radii);
/// 0.5h 2^k up to 2 sqrt(d) L.
std::vector<double> standard_radii(const Domain& dom);

/// sup over family cubes Q subset of R containing x of ||f||_{eta,Q}; zero outside R.
SampledFunction localized_maximal(const SampledFunction& f, const YoungFunction& eta, const Cube& R,
                                  const CubeFamily& fam);
/// sup over the dyadic tree of R (down to cells of side <= h) of ||f||_{eta,Q}; zero outside R.
SampledFunction dyadic_localized_maximal(const SampledFunction& f, const YoungFunction& eta, const Cube& R);

/// Local part (r <= rho(centre), no factor) and global part (r > rho, factor (rho/r)^sigma).
std::pair<SampledFunction, SampledFunction> local_global_split(const SampledFunction& f, const YoungFunction& eta,
                                                               double sigma, const CriticalRadius& rho,
                                                               const CubeFamily& fam);

struct PointwiseReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max lhs/rhs over points with rhs > 0
  std::size_t worst_point = 0;
  Json to_json() const;
};

/// Phi_{p,q}(M^{rho,theta} f) <= [M^{rho,sigma}(Phi_{p/a,q/a}(|f|))]^a, theta = sigma a, both sides over fam.
PointwiseReport pointwise_power_bound_check(const SampledFunction& f, double p, double q, double a, double theta,
                                            double sigma, const CriticalRadius& rho, const CubeFamily& fam);

/// M^{rho,gamma}(fu) <= C M_eta^{rho,sigma} f * M_{dual eta}^{rho,gamma-sigma} u, C = 2.
PointwiseReport pointwise_product_bound_check(const SampledFunction& f, const SampledFunction& u,
                                              const YoungFunction& eta, double sigma, double gamma,
                                              const CriticalRadius& rho, const CubeFamily& fam);

struct SplitAverageReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // lhs / rhs
  std::vector<int> qi_level;  // level of the smallest grid-i cube containing 8 sqrt(n) Q, or INT_MIN if none
  Json to_json() const;
};
/// M_{eta,Q} f(x) <= 3^n sum_i sup{ ||f chi_Q||_{eta,P} : P in D^(i), x in P, P subset 8 sqrt(n) Q }
/// at every grid point x in Q.
SplitAverageReport split_average_check(const SampledFunction& f, const YoungFunction& eta, const Cube& Q, const CubeFamily& fam);

struct CharBallReport {
  std::vector<double> distances;  // |x - x0| / rho(x0)
  std::vector<double> values_a;  // M_c^{rho,sigma} chi_B0 (identity average), bound (a)
  std::vector<double> values;    // M_{phi,c}^{rho,sigma} chi_B0, bound (b)
  std::vector<double> lower_shape, upper_shape;
  double C_lower = 0.0;  // min value / lower_shape
  double C_upper = 0.0;  // max value / upper_shape
  double slope_a = 0.0;  // log-log slopes against the distances
  double slope = 0.0;
  double predicted_slope = 0.0;
  double slope_rel_err = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;  // slopes of the two bounds
  bool slope_ok = false, bracket_ok = false;
  bool ok() const { return slope_ok && bracket_ok; }
  Json to_json() const;
};

/// Centred maximal of chi_{B0}, B0 = B(x0, rho(x0)), at the given grid points outside 2B0.
/// The prediction (-sigma minus the log-log slope of phi^{-1}(D^n)) assumes rho is constant.
CharBallReport char_ball_bounds_check(const Domain& dom, const Point& x0, double sigma, const CriticalRadius& rho,
                                      const YoungFunction& phi, const std::vector<std::size_t>& points,
                                      double slope_tol = 0.10);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rhomax
