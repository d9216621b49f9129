// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/critical_radius.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rhomax/core/error.hpp"

namespace rhomax {
namespace {

void check_constants(double C0, double N0) {
  require(std::isfinite(C0) && C0 >= 1.0, ErrorKind::InvalidArgument, "critical radius needs C0 >= 1");
  require(std::isfinite(N0) && N0 >= 1.0, ErrorKind::InvalidArgument, "critical radius needs N0 >= 1");
}

// Updates the report with one ordered pair; returns true when it is violated.
bool check_pair(const CriticalRadius& rho, const Point& x, const Point& y, double C0, double N0,
                ValidationReport& rep) {
  const double rx = rho(x), ry = rho(y);
  const double t = 1.0 + distance(x, y) / rx;
  const double lower = rx * std::pow(t, -N0) / C0;
  const double upper = C0 * rx * std::pow(t, N0 / (N0 + 1.0));
  const double s_lo = ry / lower;
  const double s_hi = upper / ry;
  ++rep.pairs;
  bool bad = false;
  for (const auto& [s, side] : {std::pair{s_lo, "lower"}, std::pair{s_hi, "upper"}}) {
    if (s < rep.worst_slack) {
      rep.worst_slack = s;
      rep.worst_x = x;
      rep.worst_y = y;
      rep.worst_side = side;
    }
    if (s < 1.0 - 1e-12) bad = true;
  }
  if (bad) {
    ++rep.violations;
    rep.ok = false;
  }
  return bad;
}

}  // namespace

CriticalRadius CriticalRadius::constant(double c, double C0, double N0) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument, "constant critical radius needs c > 0");
  check_constants(C0, N0);
  CriticalRadius r;
  r.family_ = Family::Constant;
  r.c_ = c;
  r.exponent_ = 0.0;
  r.C0_ = C0;
  r.N0_ = N0;
  return r;
}

CriticalRadius CriticalRadius::inverse_power(double c, double C0, double N0) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument, "inverse-power critical radius needs c > 0");
  if (C0 == 0.0) C0 = 1.16 * std::max(c, 1.0 / c);
  check_constants(C0, N0);
  CriticalRadius r;
  r.family_ = Family::InversePower;
  r.c_ = c;
  r.exponent_ = 1.0;
  r.C0_ = C0;
  r.N0_ = N0;
  return r;
}

CriticalRadius CriticalRadius::power_law(double c, double exponent, double C0, double N0) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument, "critical radius needs c > 0");
  require(std::isfinite(exponent) && exponent >= 0.0, ErrorKind::InvalidArgument,
          "critical radius exponent must be >= 0");
  check_constants(C0, N0);
  CriticalRadius r;
  r.family_ = Family::Custom;
  r.c_ = c;
  r.exponent_ = exponent;
  r.C0_ = C0;
  r.N0_ = N0;
  return r;
}

CriticalRadius CriticalRadius::custom(std::function<double(const Point&)> fn, std::string name, double C0,
                                      double N0) {
  require(static_cast<bool>(fn), ErrorKind::InvalidArgument, "custom critical radius needs a callable");
  check_constants(C0, N0);
  CriticalRadius r;
  r.family_ = Family::Custom;
  r.fn_ = std::move(fn);
  r.name_ = std::move(name);
  r.C0_ = C0;
  r.N0_ = N0;
  return r;
}

double CriticalRadius::operator()(const Point& x) const {
  double v;
  if (fn_) {
    v = fn_(x);
  } else if (family_ == Family::Constant) {
    return c_;
  } else if (exponent_ == 1.0) {
    v = c_ / (1.0 + x.norm());
  } else {
    v = c_ * std::pow(1.0 + x.norm(), -exponent_);
  }
  require(v > 0.0 && std::isfinite(v), ErrorKind::Domain, "critical radius must be positive and finite");
  return v;
}

CriticalRadius CriticalRadius::with_constants(double C0, double N0) const {
  check_constants(C0, N0);
  CriticalRadius r = *this;
  r.C0_ = C0;
  r.N0_ = N0;
  return r;
}

Json CriticalRadius::to_json() const {
  Json j{{"C0", C0_}, {"N0", N0_}};
  switch (family_) {
    case Family::Constant:
      j["family"] = "constant";
      j["c"] = c_;
      break;
    case Family::InversePower:
      j["family"] = "inverse_power";
      j["c"] = c_;
      break;
    case Family::Custom:
      j["family"] = "custom";
      if (fn_) {
        j["name"] = name_;
      } else {
        j["c"] = c_;
        j["exponent"] = exponent_;
      }
      break;
  }
  return j;
}

CriticalRadius CriticalRadius::from_json(const Json& j) {
  require(j.is_object(), ErrorKind::Config, "rho spec must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    require(k == "family" || k == "c" || k == "C0" || k == "N0" || k == "exponent", ErrorKind::Config,
            "unknown key '" + k + "' in rho spec");
    if (k != "family")
      require(it.value().is_number(), ErrorKind::Config, "rho field '" + k + "' must be a number");
  }
  require(j.contains("family") && j.at("family").is_string(), ErrorKind::Config, "rho spec needs a string 'family'");
  const std::string fam = j.at("family").get<std::string>();
  const double c = j.value("c", 1.0);
  const double N0 = j.value("N0", 1.0);
  if (fam == "constant") return constant(c, j.value("C0", 1.0), N0);
  if (fam == "inverse_power") {
    require(!j.contains("exponent") || j.at("exponent").get<double>() == 1.0, ErrorKind::Config,
            "inverse_power has exponent 1; use family 'custom' for other exponents");
    return inverse_power(c, j.value("C0", 0.0), N0);
  }
  if (fam == "custom") {
    require(j.contains("exponent") && j.contains("C0") && j.contains("N0"), ErrorKind::Config,
            "custom rho needs 'exponent', 'C0' and 'N0'");
    return power_law(c, j.at("exponent").get<double>(), j.at("C0").get<double>(), N0);
  }
  fail(ErrorKind::Config, "unknown rho family '" + fam + "' (constant, inverse_power, custom)");
}

Json ValidationReport::to_json() const {
  return Json{{"ok", ok},
              {"pairs", pairs},
              {"violations", violations},
              {"worst_slack", worst_slack},
              {"worst_x", worst_x.to_json()},
              {"worst_y", worst_y.to_json()},
              {"worst_side", worst_side}};
}

ValidationReport validate(const CriticalRadius& rho, const std::vector<Point>& points, double C0, double N0) {
  require(points.size() >= 2, ErrorKind::InvalidArgument, "validate needs at least two points");
  ValidationReport rep;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      if (i != j) check_pair(rho, points[i], points[j], C0, N0, rep);
  return rep;
}

ValidationReport validate_pairs(const CriticalRadius& rho, const std::vector<std::pair<Point, Point>>& pairs,
                                double C0, double N0) {
  require(!pairs.empty(), ErrorKind::InvalidArgument, "validate needs at least one pair");
  ValidationReport rep;
  for (const auto& [x, y] : pairs) {
    check_pair(rho, x, y, C0, N0, rep);
    check_pair(rho, y, x, C0, N0, rep);
  }
  return rep;
}

std::vector<std::pair<Point, Point>> random_pairs(int d, std::size_t n, double half_width, std::uint64_t seed) {
  const auto pts = random_points(d, 2 * n, half_width, seed);
  std::vector<std::pair<Point, Point>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {pts[2 * i], pts[2 * i + 1]};
  return out;
}

ConstantSearch search_constants(const CriticalRadius& rho, const std::vector<std::pair<Point, Point>>& pairs,
                                const std::vector<double>& C0_lattice, const std::vector<double>& N0_lattice) {
  std::vector<double> cs = C0_lattice, ns = N0_lattice;
  std::sort(cs.begin(), cs.end());
  std::sort(ns.begin(), ns.end());
  for (double C0 : cs)
    for (double N0 : ns) {
      if (C0 < 1.0 || N0 < 1.0) continue;
      ValidationReport rep = validate_pairs(rho, pairs, C0, N0);
      if (rep.ok) return ConstantSearch{true, C0, N0, rep};
    }
  return ConstantSearch{};
}

// ---------------------------------------------------------------------------

Json CriticalCovering::to_json() const {
  Json c = Json::array();
  for (std::size_t j = 0; j < centers.size(); ++j)
    c.push_back(Json{{"center", centers[j].to_json()}, {"rho", radii[j]}});
  return Json{{"domain", domain.to_json()}, {"count", centers.size()}, {"cubes", c}};
}


CriticalCovering critical_covering(const CriticalRadius& rho, const Domain& dom) {
  CriticalCovering cov;
  cov.domain = dom;
  std::vector<char> covered(dom.size(), 0);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (covered[i]) continue;
    const Point x = dom.point(i);
    const double r = rho(x);
    cov.center_index.push_back(i);
    cov.centers.push_back(x);
    cov.radii.push_back(r);
    for_each_point_in(dom, cube_from_radius(x, r), [&](std::size_t k) { covered[k] = 1; });
  }
  return cov;
}

double covering_fraction(const CriticalCovering& cov) {
  const Domain& dom = cov.domain;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const Point y = dom.point(i);
    for (std::size_t j = 0; j < cov.centers.size(); ++j)
      if (cube_from_radius(cov.centers[j], cov.radii[j]).contains(y, 1e-9 * dom.h())) {
        ++hit;
        break;
      }
  }
  return static_cast<double>(hit) / static_cast<double>(dom.size());
}

Json OverlapProfile::to_json() const {
  return Json{{"sigmas", sigmas}, {"counts", counts}, {"N1", N1}, {"C_fit", C_fit}};
}

OverlapProfile overlap_profile(const CriticalCovering& cov, const std::vector<double>& sigmas) {
  require(!sigmas.empty(), ErrorKind::InvalidArgument, "overlap_profile needs at least one sigma");
  OverlapProfile prof;
  prof.sigmas = sigmas;
  const Domain& dom = cov.domain;
  for (double s : sigmas) {
    require(s >= 1.0, ErrorKind::InvalidArgument, "overlap_profile needs sigma >= 1");
    std::vector<int> count(dom.size(), 0);
    for (std::size_t j = 0; j < cov.centers.size(); ++j)
      for_each_point_in(dom, cube_from_radius(cov.centers[j], s * cov.radii[j]), [&](std::size_t k) { ++count[k]; });
    prof.counts.push_back(*std::max_element(count.begin(), count.end()));
  }
  // Least squares for log count = log C + N1 log sigma.
  const std::size_t n = sigmas.size();
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = std::log(sigmas[i]), y = std::log(static_cast<double>(prof.counts[i]));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    prof.N1 = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    prof.C_fit = std::exp((sy - prof.N1 * sx) / n);
  } else {
    prof.C_fit = prof.counts[0];
  }
  return prof;
}

double enlargement_constant(int n, double C0, double N0) {
  return std::sqrt(static_cast<double>(n)) * (std::pow(2.0, N0 + 2.0) * C0 * C0 + 1.0);
}

Cube enlarged_critical_cube(const CriticalRadius& rho, const Point& xj) {
  return cube_from_radius(xj, enlargement_constant(xj.dim, rho.C0(), rho.N0()) * rho(xj));
}

bool in_sk(const CriticalRadius& rho, const Cube& q, int k) {
  const double b = std::pow(4.0, rho.N0());
  const double rq = q.radius(), r = rho(q.center);
  return std::pow(b, k - 1) * r < rq && rq <= std::pow(b, k) * r;
}

Json SkReport::to_json() const {
  return Json{{"k", k},           {"b", b},          {"C1", C1},         {"d", d},
              {"C2", C2},         {"rho_xj", rho_xj}, {"rho_xQ", rho_xQ}, {"lower", lower},
              {"upper", upper},   {"lower_ok", lower_ok}, {"upper_ok", upper_ok}, {"contained", contained}};
}

SkReport sk_bounds_check(const CriticalRadius& rho, const Point& xj, const Cube& q, int k) {
  require(k >= 1, ErrorKind::InvalidArgument, "S_k index must be positive");
  require(in_sk(rho, q, k), ErrorKind::Precondition, "cube is not in S_k for the given k");
  SkReport rep;
  const double N0 = rho.N0();
  rep.k = k;
  rep.b = std::pow(4.0, N0);
  rep.C1 = std::pow(4.0, N0) * rho.C0();
  rep.d = std::pow(rep.b, N0 + 1.0);
  rep.C2 = 4.0 * std::sqrt(static_cast<double>(xj.dim)) * rep.C1;
  rep.rho_xj = rho(xj);
  rep.rho_xQ = rho(q.center);
  const double bk = std::pow(rep.b, N0 * k);
  rep.lower = rep.rho_xj / (rep.C1 * bk);
  rep.upper = rep.C1 * bk * rep.rho_xj;
  const double tol = 1e-12;
  rep.lower_ok = rep.lower <= rep.rho_xQ * (1 + tol);
  rep.upper_ok = rep.rho_xQ <= rep.upper * (1 + tol);
  const Cube big = cube_from_radius(xj, rep.C2 * std::pow(rep.d, k) * rep.rho_xj);
  rep.contained = big.contains(q, tol * big.half_side);
  return rep;
}

}  // namespace rhomax
