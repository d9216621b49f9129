// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rhomax/core/domain.hpp"

namespace rhomax {

/// Critical radius function with declared variation constants (C0, N0).
class CriticalRadius {
 public:
  enum class Family { Constant, InversePower, Custom };

  static CriticalRadius constant(double c, double C0 = 1.0, double N0 = 1.0);
  // c / (1 + |x|). Default constants: N0 = 1 and C0 = 1.16 max(c, 1/c).
  static CriticalRadius inverse_power(double c, double C0 = 0.0, double N0 = 1.0);
  // c (1 + |x|)^(-exponent); constants must be declared.
  static CriticalRadius power_law(double c, double exponent, double C0, double N0);
  static CriticalRadius custom(std::function<double(const Point&)> fn, std::string name, double C0, double N0);

  CriticalRadius() = default;  // constant(1), C0 = N0 = 1

  double operator()(const Point& x) const;
  Family family() const { return family_; }
  double c() const { return c_; }
  double exponent() const { return exponent_; }
  double C0() const { return C0_; }
  double N0() const { return N0_; }
  CriticalRadius with_constants(double C0, double N0) const;

  Json to_json() const;
  static CriticalRadius from_json(const Json& j);

 private:
  Family family_ = Family::Constant;
  double c_ = 1.0;
  double exponent_ = 0.0;
  double C0_ = 1.0;
  double N0_ = 1.0;
  std::string name_;
  std::function<double(const Point&)> fn_;
};

struct ValidationReport {
  bool ok = true;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  // min over pairs and both sides of (allowed / actual); >= 1 means the pair satisfies (1.2).
  double worst_slack = std::numeric_limits<double>::infinity();
  Point worst_x, worst_y;
  std::string worst_side;
  Json to_json() const;
};

/// Checks both inequalities for every ordered pair of distinct sample points.
ValidationReport validate(const CriticalRadius& rho, const std::vector<Point>& points, double C0, double N0);
/// Checks both inequalities for each listed pair in both orders.
ValidationReport validate_pairs(const CriticalRadius& rho, const std::vector<std::pair<Point, Point>>& pairs,
                                double C0, double N0);
std::vector<std::pair<Point, Point>> random_pairs(int d, std::size_t n, double half_width, std::uint64_t seed);

struct ConstantSearch {
  bool found = false;
  double C0 = 0.0;
  double N0 = 0.0;
  ValidationReport report;
};
/// Smallest feasible C0 on the lattice (ties broken by smallest N0).
ConstantSearch search_constants(const CriticalRadius& rho, const std::vector<std::pair<Point, Point>>& pairs,
                                const std::vector<double>& C0_lattice, const std::vector<double>& N0_lattice);

struct CriticalCovering {
  Domain domain;
  std::vector<std::size_t> center_index;  // flat grid indices in selection order
  std::vector<Point> centers;
  std::vector<double> radii;  // rho(x_j)
  Json to_json() const;
};

/// Greedy lexicographic scan: a grid point becomes a centre iff no earlier cube covers it.
CriticalCovering critical_covering(const CriticalRadius& rho, const Domain& dom);
/// Exhaustive check that every grid point lies in some Q(x_j, rho(x_j)).
double covering_fraction(const CriticalCovering& cov);

struct OverlapProfile {
  std::vector<double> sigmas;
  std::vector<int> counts;
  double N1 = 0.0;      // least-squares slope of log count vs log sigma
  double C_fit = 1.0;   // exp(intercept)
  Json to_json() const;
};
OverlapProfile overlap_profile(const CriticalCovering& cov, const std::vector<double>& sigmas);

/// sqrt(n) (2^(N0+2) C0^2 + 1).
double enlargement_constant(int n, double C0, double N0);
Cube enlarged_critical_cube(const CriticalRadius& rho, const Point& xj);

struct SkReport {
  int k = 0;
  double b = 0, C1 = 0, d = 0, C2 = 0;
  double rho_xj = 0, rho_xQ = 0, lower = 0, upper = 0;
  bool lower_ok = false, upper_ok = false, contained = false;
  bool ok() const { return lower_ok && upper_ok && contained; }
  Json to_json() const;
};
/// Radius bounds and containment for a cube Q in the class S_k relative to Q_j = Q(x_j, rho(x_j)).
SkReport sk_bounds_check(const CriticalRadius& rho, const Point& xj, const Cube& q, int k);
/// Whether b^(k-1) rho(x_Q) < r_Q <= b^k rho(x_Q), b = 4^N0.
bool in_sk(const CriticalRadius& rho, const Cube& q, int k);

}  // namespace rhomax
