// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/young.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "rhomax/core/error.hpp"
#include "rhomax/core/quadrature.hpp"

namespace rhomax {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_keys(const Json& j, const std::set<std::string>& allowed, const char* what) {
  require(j.is_object(), ErrorKind::Config, std::string(what) + " spec must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    require(allowed.count(it.key()) > 0, ErrorKind::Config,
            std::string("unknown key '") + it.key() + "' in " + what + " spec");
}

double get_number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  require(j.at(key).is_number(), ErrorKind::Config, std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::vector<std::pair<double, double>> parse_knots(const Json& j) {
  require(j.is_array(), ErrorKind::Config, "'knots' must be an array of [t, value] pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& k : j) {
    require(k.is_array() && k.size() == 2 && k[0].is_number() && k[1].is_number(), ErrorKind::Config,
            "each knot must be a [t, value] pair of numbers");
    out.emplace_back(k[0].get<double>(), k[1].get<double>());
  }
  return out;
}

Json knots_json(const std::vector<std::pair<double, double>>& knots) {
  Json arr = Json::array();
  for (const auto& [t, v] : knots) arr.push_back(Json::array({t, v}));
  return arr;
}

// Piecewise linear through the origin and the knots, extended with the last slope.
double interp(const std::vector<std::pair<double, double>>& k, double t) {
  if (t <= k.front().first) return k.front().second * (t / k.front().first);
  if (t >= k.back().first) {
    if (k.size() == 1) return k.back().second * (t / k.back().first);
    const auto& a = k[k.size() - 2];
    const auto& b = k.back();
    return b.second + (t - b.first) * (b.second - a.second) / (b.first - a.first);
  }
  auto it = std::upper_bound(k.begin(), k.end(), t,
                             [](double x, const std::pair<double, double>& kn) { return x < kn.first; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  return a.second + (t - a.first) * (b.second - a.second) / (b.first - a.first);
}

double interp_slope(const std::vector<std::pair<double, double>>& k, double t) {
  if (t < k.front().first) return k.front().second / k.front().first;
  if (k.size() == 1) return k.front().second / k.front().first;
  auto it = std::upper_bound(k.begin(), k.end(), t,
                             [](double x, const std::pair<double, double>& kn) { return x < kn.first; });
  if (it == k.end()) it = k.end() - 1;
  const auto& b = *it;
  const auto& a = *(it - 1);
  return (b.second - a.second) / (b.first - a.first);
}

void validate_knots(const std::vector<std::pair<double, double>>& k, bool need_convex, const char* what) {
  require(!k.empty(), ErrorKind::InvalidArgument, std::string(what) + ": at least one knot required");
  double prev_t = 0.0, prev_v = 0.0, prev_slope = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto [t, v] = k[i];
    require(std::isfinite(t) && std::isfinite(v), ErrorKind::InvalidArgument,
            std::string(what) + ": knots must be finite");
    require(t > prev_t, ErrorKind::InvalidArgument, std::string(what) + ": knot abscissae must increase");
    require(v >= prev_v, ErrorKind::InvalidArgument, std::string(what) + ": knot values must be nondecreasing");
    const double slope = (v - prev_v) / (t - prev_t);
    if (need_convex && i > 0)
      require(slope >= prev_slope * (1.0 - 1e-9) - 1e-300, ErrorKind::InvalidArgument,
              std::string(what) + ": knots are not convex");
    prev_slope = slope;
    prev_t = t;
    prev_v = v;
  }
  require(prev_slope > 0.0, ErrorKind::InvalidArgument, std::string(what) + ": last slope must be positive");
}

}  // namespace

YoungFunction::YoungFunction() = default;

YoungFunction YoungFunction::power(double p, double coef) {
  require(std::isfinite(p) && p >= 1.0, ErrorKind::InvalidArgument, "power Young function needs p >= 1");
  require(std::isfinite(coef) && coef > 0.0, ErrorKind::InvalidArgument, "Young coefficient must be positive");
  YoungFunction f;
  f.family_ = YoungFamily::Power;
  f.p_ = p;
  f.coef_ = coef;
  return f;
}

YoungFunction YoungFunction::plog(double p, double q, double coef) {
  require(std::isfinite(p) && p >= 1.0, ErrorKind::InvalidArgument, "plog Young function needs p >= 1");
  require(std::isfinite(q) && q >= 0.0, ErrorKind::InvalidArgument, "plog Young function needs q >= 0");
  require(std::isfinite(coef) && coef > 0.0, ErrorKind::InvalidArgument, "Young coefficient must be positive");
  YoungFunction f;
  f.family_ = YoungFamily::PLog;
  f.p_ = p;
  f.q_ = q;
  f.coef_ = coef;
  return f;
}

YoungFunction YoungFunction::custom(std::vector<std::pair<double, double>> knots) {
  validate_knots(knots, true, "custom Young function");
  YoungFunction f;
  f.family_ = YoungFamily::Custom;
  f.knots_ = std::move(knots);
  return f;
}

double YoungFunction::base_eval(double t) const {
  switch (family_) {
    case YoungFamily::Power:
      return p_ == 1.0 ? t : std::pow(t, p_);
    case YoungFamily::PLog: {
      const double tp = p_ == 1.0 ? t : std::pow(t, p_);
      if (t <= 1.0 || q_ == 0.0) return tp;
      return tp * std::pow(1.0 + std::log(t), q_);
    }
    case YoungFamily::Custom:
      return interp(knots_, t);
    case YoungFamily::Conjugate: {
      const double s = conjugate_argmax(t);
      if (!std::isfinite(s)) return kInf;
      return std::max(0.0, s * t - primal_->eval(s));
    }
    case YoungFamily::Degenerate:
      return t <= coef_ ? 0.0 : kInf;
  }
  return 0.0;
}

double YoungFunction::eval(double t) const {
  require(!(t < 0.0), ErrorKind::Domain, "Young function evaluated at negative argument");
  if (std::isnan(t)) fail(ErrorKind::Domain, "Young function evaluated at NaN");
  if (family_ == YoungFamily::Degenerate) return base_eval(t);
  if (t == 0.0) return 0.0;
  if (std::isinf(t)) return kInf;
  return coef_ * base_eval(t);
}

// argmax_s (s t - primal(s)); 0 when t is below the primal's slope at the origin,
// +inf when the supremum is unbounded.
double YoungFunction::conjugate_argmax(double t) const {
  const YoungFunction& P = *primal_;
  if (t <= P.derivative(0.0)) return 0.0;
  double lo = 0.0;
  double s = 1e-8;
  while ((P.eval(2.0 * s) - P.eval(s)) / s <= t) {
    lo = s;
    s *= 2.0;
    if (s > 1e150) return kInf;
  }
  const double hi = 2.0 * s;
  auto neg = [&](double x) { return -(x * t - P.eval(x)); };
  std::uintmax_t iters = 200;
  const auto res = boost::math::tools::brent_find_minima(neg, lo, hi, 40, iters);
  return res.first;
}

double YoungFunction::derivative(double t) const {
  require(!(t < 0.0), ErrorKind::Domain, "Young derivative at negative argument");
  switch (family_) {
    case YoungFamily::Power:
      if (p_ == 1.0) return coef_;
      return t == 0.0 ? 0.0 : coef_ * p_ * std::pow(t, p_ - 1.0);
    case YoungFamily::PLog: {
      if (t == 0.0) return p_ == 1.0 ? coef_ : 0.0;
      const double tp1 = std::pow(t, p_ - 1.0);
      if (t < 1.0 || q_ == 0.0) return coef_ * p_ * tp1;
      const double l = 1.0 + std::log(t);
      return coef_ * (p_ * tp1 * std::pow(l, q_) + q_ * tp1 * std::pow(l, q_ - 1.0));
    }
    case YoungFamily::Custom:
      return interp_slope(knots_, t);
    case YoungFamily::Conjugate:
      return coef_ * conjugate_argmax(t);
    case YoungFamily::Degenerate:
      return t < coef_ ? 0.0 : kInf;
  }
  return 0.0;
}

double YoungFunction::inverse(double y) const {
  require(!(y < 0.0), ErrorKind::Domain, "Young inverse at negative argument");
  if (y == 0.0) return 0.0;
  if (family_ == YoungFamily::Degenerate) return coef_;
  if (family_ == YoungFamily::Power) return p_ == 1.0 ? y / coef_ : std::pow(y / coef_, 1.0 / p_);
  // Geometric bracket, then bisection to relative width 4 eps.
  double lo, hi;
  if (eval(1.0) < y) {
    lo = 1.0;
    hi = 2.0;
    while (eval(hi) < y) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return kInf;
    }
  } else {
    hi = 1.0;
    lo = 0.5;
    while (eval(lo) >= y) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return lo;
    }
  }
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return std::abs(eval(lo) - y) < std::abs(eval(hi) - y) ? lo : hi;
}

YoungFunction YoungFunction::complementary() const {
  switch (family_) {
    case YoungFamily::Power:
      if (p_ == 1.0) break;
      {
        const double pp = p_ / (p_ - 1.0);
        const double k = (1.0 - 1.0 / p_) * std::pow(coef_ * p_, -1.0 / (p_ - 1.0));
        return power(pp, k);
      }
    case YoungFamily::PLog:
      if (p_ == 1.0 && q_ == 0.0) break;
      [[fallthrough]];
    case YoungFamily::Custom: {
      YoungFunction f;
      f.family_ = YoungFamily::Conjugate;
      f.coef_ = 1.0;
      f.primal_ = std::make_shared<const YoungFunction>(*this);
      return f;
    }
    case YoungFamily::Conjugate:
      if (coef_ == 1.0) return *primal_;
      fail(ErrorKind::InvalidArgument, "dual of a rescaled conjugate is not supported");
    case YoungFamily::Degenerate:
      return power(1.0, coef_);
  }
  // Linear f: sup_s s(t - c) is 0 for t <= c and unbounded beyond.
  YoungFunction f;
  f.family_ = YoungFamily::Degenerate;
  f.coef_ = coef_;
  return f;
}

YoungFunction YoungFunction::scaled(double c) const {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument, "Young scale factor must be positive");
  if (family_ == YoungFamily::Degenerate) return *this;
  YoungFunction f = *this;
  if (family_ == YoungFamily::Custom) {
    for (auto& k : f.knots_) k.second *= c;
    return f;
  }
  f.coef_ *= c;
  return f;
}

YoungFunction YoungFunction::normalized() const {
  const double v = eval(1.0);
  require(v > 0.0 && std::isfinite(v), ErrorKind::InvalidArgument,
          "cannot normalize: f(1) must be positive and finite");
  return scaled(1.0 / v);
}

bool YoungFunction::is_normalized() const {
  const double v = eval(1.0);
  return std::abs(v - 1.0) <= 1e-12;
}

Json YoungFunction::to_json() const {
  switch (family_) {
    case YoungFamily::Power:
      return Json{{"family", "power"}, {"p", p_}, {"coef", coef_}};
    case YoungFamily::PLog:
      return Json{{"family", "plog"}, {"p", p_}, {"q", q_}, {"coef", coef_}};
    case YoungFamily::Custom:
      return Json{{"family", "custom"}, {"knots", knots_json(knots_)}};
    case YoungFamily::Conjugate:
      return Json{{"family", "conjugate"}, {"of", primal_->to_json()}, {"coef", coef_}};
    case YoungFamily::Degenerate:
      return Json{{"family", "degenerate"}, {"threshold", coef_}};
  }
  return Json();
}

YoungFunction YoungFunction::from_json(const Json& j) {
  check_keys(j, {"family", "p", "q", "coef", "knots", "normalize", "dual"}, "Young function");
  require(j.contains("family") && j.at("family").is_string(), ErrorKind::Config,
          "Young function spec needs a string 'family'");
  const std::string fam = j.at("family").get<std::string>();
  YoungFunction f;
  if (fam == "power") {
    f = power(get_number(j, "p", 1.0), get_number(j, "coef", 1.0));
  } else if (fam == "plog") {
    f = plog(get_number(j, "p", 1.0), get_number(j, "q", 0.0), get_number(j, "coef", 1.0));
  } else if (fam == "custom") {
    require(j.contains("knots"), ErrorKind::Config, "custom Young function needs 'knots'");
    f = custom(parse_knots(j.at("knots")));
    if (j.contains("coef")) f = f.scaled(get_number(j, "coef", 1.0));
  } else {
    fail(ErrorKind::Config, "unknown Young family '" + fam + "' (power, plog, custom)");
  }
  if (j.contains("normalize")) {
    require(j.at("normalize").is_boolean(), ErrorKind::Config, "'normalize' must be a boolean");
    if (j.at("normalize").get<bool>()) f = f.normalized();
  }
  if (j.contains("dual")) {
    require(j.at("dual").is_boolean(), ErrorKind::Config, "'dual' must be a boolean");
    if (j.at("dual").get<bool>()) f = f.complementary();
  }
  return f;
}

std::string YoungFunction::describe() const {
  std::ostringstream os;
  switch (family_) {
    case YoungFamily::Power:
      os << "power(p=" << p_ << ",coef=" << coef_ << ")";
      break;
    case YoungFamily::PLog:
      os << "plog(p=" << p_ << ",q=" << q_ << ",coef=" << coef_ << ")";
      break;
    case YoungFamily::Custom:
      os << "custom(" << knots_.size() << " knots)";
      break;
    case YoungFamily::Conjugate:
      os << "conjugate(" << primal_->describe() << ")";
      break;
    case YoungFamily::Degenerate:
      os << "degenerate(threshold=" << coef_ << ")";
      break;
  }
  return os.str();
}

std::vector<double> log_ladder(double lo, double hi, int n) {
  require(lo > 0.0 && hi >= lo && n >= 1, ErrorKind::InvalidArgument, "log_ladder needs 0 < lo <= hi, n >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return out;
}

double doubling_constant(const YoungFunction& f, const std::vector<double>& ladder) {
  double best = 0.0;
  for (double t : ladder) {
    require(t > 0.0 && t <= 1e8, ErrorKind::InvalidArgument, "doubling ladder must lie in (0, 1e8]");
    const double a = f.eval(t), b = f.eval(2.0 * t);
    if (a == 0.0) {
      if (b > 0.0) return kInf;
      continue;
    }
    best = std::max(best, b / a);
  }
  return best;
}

double elasticity(const YoungFunction& f, double z) {
  require(z > 0.0, ErrorKind::Domain, "elasticity needs z > 0");
  const double v = f.eval(z);
  require(v > 0.0, ErrorKind::Domain, "elasticity undefined where f vanishes");
  return f.derivative(z) * z / v;
}

// ---------------------------------------------------------------------------

double integrate_gk(const std::function<double(double)>& f, double a, double b, double rel_tol,
                    double* error_estimate) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel_tol, &err);
  if (error_estimate) *error_estimate = err;
  return v;
}

GrowthFunction GrowthFunction::zero() { return GrowthFunction(); }

GrowthFunction GrowthFunction::power(double r, double coef) {
  require(std::isfinite(r) && r > 0.0, ErrorKind::InvalidArgument, "growth power needs r > 0 (a(0) = 0)");
  require(std::isfinite(coef) && coef > 0.0, ErrorKind::InvalidArgument, "growth coefficient must be positive");
  GrowthFunction g;
  g.kind_ = Kind::Power;
  g.r_ = r;
  g.coef_ = coef;
  return g;
}

GrowthFunction GrowthFunction::custom(std::vector<std::pair<double, double>> knots) {
  validate_knots(knots, false, "custom growth function");
  GrowthFunction g;
  g.kind_ = Kind::Custom;
  g.knots_ = std::move(knots);
  return g;
}

double GrowthFunction::eval(double t) const {
  require(!(t < 0.0), ErrorKind::Domain, "growth function at negative argument");
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Power:
      return coef_ * std::pow(t, r_);
    case Kind::Custom:
      return interp(knots_, t);
  }
  return 0.0;
}

double GrowthFunction::integral(double t) const {
  require(!(t < 0.0), ErrorKind::Domain, "growth integral at negative argument");
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Power:
      return coef_ * std::pow(t, r_ + 1.0) / (r_ + 1.0);
    case Kind::Custom: {
      double acc = 0.0, pt = 0.0, pv = 0.0;
      for (const auto& [kt, kv] : knots_) {
        if (t <= kt) break;
        acc += 0.5 * (pv + kv) * (kt - pt);
        pt = kt;
        pv = kv;
      }
      const double vt = interp(knots_, t);
      return acc + 0.5 * (pv + vt) * (t - pt);
    }
  }
  return 0.0;
}

double GrowthFunction::integral_quadrature(double t) const {
  require(!(t < 0.0), ErrorKind::Domain, "growth integral at negative argument");
  if (t == 0.0 || kind_ == Kind::Zero) return 0.0;
  auto f = [this](double s) { return eval(s); };
  if (kind_ != Kind::Custom) return integrate_gk(f, 0.0, t);
  // Integrate knot-to-knot so the kinks do not cost adaptivity.
  double acc = 0.0, a = 0.0;
  for (const auto& kn : knots_) {
    if (kn.first >= t) break;
    acc += integrate_gk(f, a, kn.first);
    a = kn.first;
  }
  return acc + integrate_gk(f, a, t);
}

YoungFunction GrowthFunction::primitive() const {
  switch (kind_) {
    case Kind::Zero:
      fail(ErrorKind::InvalidArgument, "the primitive of a zero growth function is not a Young function");
    case Kind::Power:
      return YoungFunction::power(r_ + 1.0, coef_ / (r_ + 1.0));
    case Kind::Custom: {
      // Cumulative quadrature on a log ladder; the chords of a convex primitive stay convex.
      const auto ladder = log_ladder(1e-6, 1e8, 421);
      std::vector<std::pair<double, double>> k;
      k.reserve(ladder.size());
      double acc = integral_quadrature(ladder.front()), prev = ladder.front();
      auto f = [this](double s) { return eval(s); };
      k.emplace_back(prev, acc);
      for (std::size_t i = 1; i < ladder.size(); ++i) {
        acc += integrate_gk(f, prev, ladder[i]);
        prev = ladder[i];
        k.emplace_back(prev, acc);
      }
      return YoungFunction::custom(std::move(k));
    }
  }
  return YoungFunction();
}

Json GrowthFunction::to_json() const {
  switch (kind_) {
    case Kind::Zero:
      return Json{{"family", "zero"}};
    case Kind::Power:
      return Json{{"family", "power"}, {"r", r_}, {"coef", coef_}};
    case Kind::Custom:
      return Json{{"family", "custom"}, {"knots", knots_json(knots_)}};
  }
  return Json();
}

GrowthFunction GrowthFunction::from_json(const Json& j) {
  check_keys(j, {"family", "r", "coef", "knots"}, "growth function");
  require(j.contains("family") && j.at("family").is_string(), ErrorKind::Config,
          "growth spec needs a string 'family'");
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "zero") return zero();
  if (fam == "power") {
    require(j.contains("r"), ErrorKind::Config, "power growth spec needs 'r'");
    return power(get_number(j, "r", 1.0), get_number(j, "coef", 1.0));
  }
  if (fam == "custom") {
    require(j.contains("knots"), ErrorKind::Config, "custom growth spec needs 'knots'");
    return custom(parse_knots(j.at("knots")));
  }
  fail(ErrorKind::Config, "unknown growth family '" + fam + "' (zero, power, custom)");
}

}  // namespace rhomax
