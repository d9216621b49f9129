// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <json.hpp>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace rhomax {

using Json = nlohmann::json;

enum class YoungFamily {
  Power,       // coef * t^p
  PLog,        // coef * t^p (1 + log+ t)^q
  Custom,      // piecewise linear through knots, line through the origin below the first knot
  Conjugate,   // numeric Legendre transform of another Young function
  Degenerate,  // dual of a linear function: 0 on [0, threshold], +inf beyond
};

/// @brief Young function (convex, increasing, zero at zero) with the operations the
/// maximal-operator code needs: eval, right derivative, inverse, Legendre dual.
class YoungFunction {
 public:
  static YoungFunction power(double p, double coef = 1.0);
  static YoungFunction plog(double p, double q, double coef = 1.0);
  static YoungFunction custom(std::vector<std::pair<double, double>> knots);
  // Linear interpolant of fn on n log-spaced knots in [lo, hi].
  template <class F>
  static YoungFunction tabulate(F&& fn, double lo, double hi, int n);

  YoungFunction();  // identity t -> t

  double eval(double t) const;
  double derivative(double t) const;  // right derivative
  double inverse(double y) const;
  YoungFunction complementary() const;
  YoungFunction normalized() const;
  YoungFunction scaled(double c) const;

  YoungFamily family() const { return family_; }
  double p() const { return p_; }
  double q() const { return q_; }
  double coef() const { return coef_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  bool is_identity() const { return family_ == YoungFamily::Power && p_ == 1.0 && coef_ == 1.0; }
  bool is_degenerate() const { return family_ == YoungFamily::Degenerate; }
  // Degenerate duals: eval is 0 up to this value and +inf above.
  double threshold() const { return coef_; }
  bool is_power() const { return family_ == YoungFamily::Power; }
  bool is_normalized() const;

  Json to_json() const;
  static YoungFunction from_json(const Json& j);
  std::string describe() const;

 private:
  double base_eval(double t) const;
  double conjugate_argmax(double t) const;

  YoungFamily family_ = YoungFamily::Power;
  double p_ = 1.0;
  double q_ = 0.0;
  double coef_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
  std::shared_ptr<const YoungFunction> primal_;
};

template <class F>
YoungFunction YoungFunction::tabulate(F&& fn, double lo, double hi, int n) {
  std::vector<std::pair<double, double>> k;
  k.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    k.emplace_back(t, fn(t));
  }
  return custom(std::move(k));
}

std::vector<double> log_ladder(double lo, double hi, int n);

/// sup over the ladder of f(2t)/f(t).
double doubling_constant(const YoungFunction& f, const std::vector<double>& ladder);

/// Diagnostic f'(z) z / f(z); equals p for power functions.
double elasticity(const YoungFunction& f, double z);

/// Positive growth function a or b of a growth pair.
class GrowthFunction {
 public:
  enum class Kind { Zero, Power, Custom };
  static GrowthFunction zero();
  static GrowthFunction power(double r, double coef = 1.0);
  static GrowthFunction custom(std::vector<std::pair<double, double>> knots);

  double eval(double t) const;
  // Closed form for Zero/Power/Custom (piecewise linear integrates exactly).
  double integral(double t) const;
  // Same integral by adaptive quadrature; used to cross-check the closed forms.
  double integral_quadrature(double t) const;
  // The primitive as a Young function (power closed form, tabulated otherwise).
  YoungFunction primitive() const;

  Kind kind() const { return kind_; }
  double r() const { return r_; }
  double coef() const { return coef_; }

  Json to_json() const;
  static GrowthFunction from_json(const Json& j);

 private:
  Kind kind_ = Kind::Zero;
  double r_ = 0.0;
  double coef_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

struct GrowthPair {
  GrowthFunction a;
  GrowthFunction b;
  YoungFunction phi() const { return a.primitive(); }
  YoungFunction psi() const { return b.primitive(); }
};

}  // namespace rhomax
