// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/maximal.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <tuple>

#include "rhomax/core/error.hpp"
#include "rhomax/core/orlicz.hpp"
#include "rhomax/core/parallel.hpp"

namespace rhomax {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// In-place sliding-window max of radius m along one axis.
void window_max_axis(const Domain& dom, std::vector<double>& v, int axis, int m) {
  if (m <= 0) return;
  const int N = dom.cells_per_axis();
  const std::size_t stride = dom.stride(axis);
  const std::size_t lines = dom.size() / static_cast<std::size_t>(N);
  std::vector<double> line(static_cast<std::size_t>(N)), out(static_cast<std::size_t>(N));
  std::deque<int> dq;
  for (std::size_t l = 0; l < lines; ++l) {
    // Start of the l-th line: enumerate all indices whose axis coordinate is 0.
    const std::size_t outer = l / stride, inner = l % stride;
    const std::size_t base = outer * stride * static_cast<std::size_t>(N) + inner;
    for (int i = 0; i < N; ++i) line[static_cast<std::size_t>(i)] = v[base + static_cast<std::size_t>(i) * stride];
    dq.clear();
    int next = 0;
    for (int i = 0; i < N; ++i) {
      const int hi = std::min(N - 1, i + m);
      for (; next <= hi; ++next) {
        while (!dq.empty() && line[static_cast<std::size_t>(dq.back())] <= line[static_cast<std::size_t>(next)])
          dq.pop_back();
        dq.push_back(next);
      }
      while (dq.front() < i - m) dq.pop_front();
      out[static_cast<std::size_t>(i)] = line[static_cast<std::size_t>(dq.front())];
    }
    for (int i = 0; i < N; ++i) v[base + static_cast<std::size_t>(i) * stride] = out[static_cast<std::size_t>(i)];
  }
}

int window_radius(const Domain& dom, double s) { return static_cast<int>(std::floor(s / dom.h() + 1e-9)); }

std::vector<double> level_values(const Domain& dom, const CubeFamily& fam, double s, const CubeValue& value) {
  std::vector<double> V(dom.size());
  parallel_for(dom.size(), [&](std::size_t i) {
    const Cube q{dom.point(i), s};
    if (fam.policy == BoundaryPolicy::InsideOnly && !dom.inside(q))
      V[i] = kNegInf;
    else
      V[i] = value(i, q);
  });
  return V;
}

SampledFunction finish(const Domain& dom, std::vector<double> acc) {
  for (double& x : acc)
    if (x == kNegInf) x = 0.0;
  return SampledFunction(dom, std::move(acc));
}

}  // namespace

double damping(double r, double rho, double sigma) {
  if (sigma == 0.0) return 1.0;
  return std::pow(1.0 + r / rho, -sigma);
}

SampledFunction sweep_max(const Domain& dom, const CubeFamily& fam, const CubeValue& value) {
  std::vector<double> acc(dom.size(), kNegInf);
  for (double s : fam.half_sides) {
    std::vector<double> V = level_values(dom, fam, s, value);
    const int m = window_radius(dom, s);
    for (int axis = 0; axis < dom.dim(); ++axis) window_max_axis(dom, V, axis, m);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::max(acc[i], V[i]);
  }
  return finish(dom, std::move(acc));
}

SampledFunction sweep_max_naive(const Domain& dom, const CubeFamily& fam, const CubeValue& value) {
  std::vector<double> acc(dom.size(), kNegInf);
  for (double s : fam.half_sides) {
    const std::vector<double> V = level_values(dom, fam, s, value);
    for (std::size_t x = 0; x < dom.size(); ++x) {
      const Point px = dom.point(x);
      for (std::size_t c = 0; c < dom.size(); ++c)
        if (Cube{dom.point(c), s}.contains(px, 1e-9 * dom.h())) acc[x] = std::max(acc[x], V[c]);
    }
  }
  return finish(dom, std::move(acc));
}

std::vector<double> sample_rho(const CriticalRadius& rho, const Domain& dom) {
  std::vector<double> r(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) r[i] = rho(dom.point(i));
  return r;
}

SampledFunction hl_maximal(const SampledFunction& f, const CriticalRadius& rho, double sigma, const CubeFamily& fam) {
  require(sigma >= 0.0 && std::isfinite(sigma), ErrorKind::InvalidArgument, "sigma must be finite and >= 0");
  const SampledFunction g = f.abs();
  const std::vector<double> r = sample_rho(rho, f.domain());
  return sweep_max(f.domain(), fam,
                   [&](std::size_t c, const Cube& q) { return damping(q.radius(), r[c], sigma) * g.average(q); });
}

SampledFunction orlicz_maximal(const SampledFunction& f, const YoungFunction& eta, const CriticalRadius& rho,
                               double sigma, const CubeFamily& fam) {
  if (eta.is_identity()) return hl_maximal(f, rho, sigma, fam);
  require(sigma >= 0.0 && std::isfinite(sigma), ErrorKind::InvalidArgument, "sigma must be finite and >= 0");
  const std::vector<double> r = sample_rho(rho, f.domain());
  return sweep_max(f.domain(), fam, [&](std::size_t c, const Cube& q) {
    return damping(q.radius(), r[c], sigma) * luxemburg_average(f, q, eta);
  });
}

// ---------------------------------------------------------------------------

std::vector<Index> ball_offsets(int d, double h, double r) {
  const int R = static_cast<int>(std::floor(r / h + 1e-9));
  const double r2 = r * r * (1.0 + 1e-12);
  std::vector<Index> out;
  Index o{0, 0, 0};
  const int lo1 = d >= 2 ? -R : 0, lo2 = d >= 3 ? -R : 0;
  const int hi1 = d >= 2 ? R : 0, hi2 = d >= 3 ? R : 0;
  for (o[0] = -R; o[0] <= R; ++o[0])
    for (o[1] = lo1; o[1] <= hi1; ++o[1])
      for (o[2] = lo2; o[2] <= hi2; ++o[2]) {
        const double n2 = (double(o[0]) * o[0] + double(o[1]) * o[1] + double(o[2]) * o[2]) * h * h;
        if (n2 <= r2) out.push_back(o);
      }
  return out;
}

namespace {

double ball_average_offsets(const SampledFunction& f, std::size_t x, const std::vector<Index>& offs,
                            const YoungFunction& eta) {
  const Domain& dom = f.domain();
  const int d = dom.dim(), N = dom.cells_per_axis();
  const Index base = dom.index(x);
  std::vector<CellSample> cells;
  const double vol = dom.cell_volume();
  for (const Index& o : offs) {
    Index j{0, 0, 0};
    bool in = true;
    for (int a = 0; a < d; ++a) {
      const std::size_t k = static_cast<std::size_t>(a);
      j[k] = base[k] + o[k];
      in = in && j[k] >= 0 && j[k] < N;
    }
    if (!in) continue;
    const double v = std::abs(f[dom.flat(j)]);
    if (v > 0.0) cells.push_back(CellSample{vol, v});
  }
  return luxemburg_solve(cells, vol * static_cast<double>(offs.size()), eta);
}

}  // namespace

double ball_average(const SampledFunction& f, std::size_t x, double r, const YoungFunction& eta) {
  const Domain& dom = f.domain();
  return ball_average_offsets(f, x, ball_offsets(dom.dim(), dom.h(), r), eta);
}

std::vector<double> centered_ball_maximal_at(const SampledFunction& f, const YoungFunction& eta, double sigma,
                                             const CriticalRadius& rho, const std::vector<double>& radii,
                                             const std::vector<std::size_t>& points) {
  const Domain& dom = f.domain();
  std::vector<std::vector<Index>> offs;
  offs.reserve(radii.size());
  for (double r : radii) {
    require(r > 0.0, ErrorKind::InvalidArgument, "ball radii must be positive");
    offs.push_back(ball_offsets(dom.dim(), dom.h(), r));
  }
  std::vector<double> out(points.size(), 0.0);
  parallel_for(points.size(), [&](std::size_t k) {
    const std::size_t x = points[k];
    const double rx = rho(dom.point(x));
    double best = 0.0;
    for (std::size_t j = 0; j < radii.size(); ++j)
      best = std::max(best, damping(radii[j], rx, sigma) * ball_average_offsets(f, x, offs[j], eta));
    out[k] = best;
  });
  return out;
}

SampledFunction centered_ball_maximal(const SampledFunction& f, const YoungFunction& eta, double sigma,
                                      const CriticalRadius& rho, const std::vector<double>& radii) {
  std::vector<std::size_t> pts(f.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = i;
  return SampledFunction(f.domain(), centered_ball_maximal_at(f, eta, sigma, rho, radii, pts));
}

std::vector<double> standard_radii(const Domain& dom) {
  std::vector<double> r;
  const double top = 2.0 * std::sqrt(static_cast<double>(dom.dim())) * dom.half_width();
  for (double x = 0.5 * dom.h(); x <= top * (1.0 + 1e-12); x *= 2.0) r.push_back(x);
  return r;
}

// ---------------------------------------------------------------------------

SampledFunction localized_maximal(const SampledFunction& f, const YoungFunction& eta, const Cube& R,
                                  const CubeFamily& fam) {
  const double tol = 1e-12 * std::max(1.0, R.half_side);
  return sweep_max(f.domain(), fam, [&](std::size_t, const Cube& q) {
    return R.contains(q, tol) ? luxemburg_average(f, q, eta) : kNegInf;
  });
}

namespace {

void dyadic_visit(const SampledFunction& f, const YoungFunction& eta, const Cube& q, std::vector<double>& acc) {
  const double v = luxemburg_average(f, q, eta);
  for_each_point_in(f.domain(), q, [&](std::size_t i) { acc[i] = std::max(acc[i], v); });
  if (q.side() <= f.domain().h() * (1.0 + 1e-12)) return;
  for (const Cube& c : dyadic_children(q)) dyadic_visit(f, eta, c, acc);
}

}  // namespace

SampledFunction dyadic_localized_maximal(const SampledFunction& f, const YoungFunction& eta, const Cube& R) {
  std::vector<double> acc(f.size(), 0.0);
  dyadic_visit(f, eta, R, acc);
  return SampledFunction(f.domain(), std::move(acc));
}

std::pair<SampledFunction, SampledFunction> local_global_split(const SampledFunction& f, const YoungFunction& eta,
                                                               double sigma, const CriticalRadius& rho,
                                                               const CubeFamily& fam) {
  const std::vector<double> r = sample_rho(rho, f.domain());
  const SampledFunction g = f.abs();
  auto mean = [&](const Cube& q) { return eta.is_identity() ? g.average(q) : luxemburg_average(f, q, eta); };
  SampledFunction local = sweep_max(f.domain(), fam, [&](std::size_t c, const Cube& q) {
    return q.radius() <= r[c] * (1.0 + 1e-12) ? mean(q) : kNegInf;
  });
  SampledFunction global = sweep_max(f.domain(), fam, [&](std::size_t c, const Cube& q) {
    return q.radius() > r[c] * (1.0 + 1e-12) ? std::pow(r[c] / q.radius(), sigma) * mean(q) : kNegInf;
  });
  return {std::move(local), std::move(global)};
}

// ---------------------------------------------------------------------------

Json PointwiseReport::to_json() const {
  return Json{{"points", points}, {"violations", violations}, {"worst_ratio", worst_ratio}, {"worst_point", worst_point}};
}

namespace {

PointwiseReport compare_fields(const std::vector<double>& lhs, const std::vector<double>& rhs, double rel_tol) {
  PointwiseReport rep;
  rep.points = lhs.size();
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] > rhs[i] * (1.0 + rel_tol) + 1e-300) ++rep.violations;
    if (rhs[i] > 0.0 && lhs[i] / rhs[i] > rep.worst_ratio) {
      rep.worst_ratio = lhs[i] / rhs[i];
      rep.worst_point = i;
    } else if (rhs[i] == 0.0 && lhs[i] > 0.0) {
      rep.worst_ratio = std::numeric_limits<double>::infinity();
      rep.worst_point = i;
    }
  }
  return rep;
}

}  // namespace

PointwiseReport pointwise_power_bound_check(const SampledFunction& f, double p, double q, double a, double theta,
                                            double sigma, const CriticalRadius& rho, const CubeFamily& fam) {
  require(a > 1.0, ErrorKind::Precondition, "pointwise power bound needs a > 1");
  require(p / a >= 1.0, ErrorKind::Precondition, "pointwise power bound needs p/a >= 1");
  require(q >= 0.0, ErrorKind::Precondition, "pointwise power bound needs q >= 0");
  require(std::abs(theta - sigma * a) <= 1e-12 * std::max(1.0, std::abs(theta)), ErrorKind::Precondition,
          "pointwise power bound needs theta = sigma * a");
  const YoungFunction big = YoungFunction::plog(p, q);
  const YoungFunction small = YoungFunction::plog(p / a, q / a);
  const SampledFunction Mt = hl_maximal(f, rho, theta, fam);
  const SampledFunction g = f.abs().map([&](double x) { return small.eval(x); });
  const SampledFunction Ms = hl_maximal(g, rho, sigma, fam);
  std::vector<double> lhs(f.size()), rhs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    lhs[i] = big.eval(Mt[i]);
    rhs[i] = std::pow(Ms[i], a);
  }
  return compare_fields(lhs, rhs, 1e-12);
}

PointwiseReport pointwise_product_bound_check(const SampledFunction& f, const SampledFunction& u,
                                              const YoungFunction& eta, double sigma, double gamma,
                                              const CriticalRadius& rho, const CubeFamily& fam) {
  require(gamma >= sigma, ErrorKind::Precondition, "pointwise product bound needs gamma >= sigma");
  const SampledFunction lhs = hl_maximal(f.times(u), rho, gamma, fam);
  const SampledFunction Mf = orlicz_maximal(f, eta, rho, sigma, fam);
  const SampledFunction Mu = orlicz_maximal(u, eta.complementary(), rho, gamma - sigma, fam);
  std::vector<double> rhs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = 2.0 * Mf[i] * Mu[i];
  return compare_fields(lhs.values(), rhs, 1e-9);
}

// ---------------------------------------------------------------------------

Json SplitAverageReport::to_json() const {
  return Json{{"points", points}, {"violations", violations}, {"worst_ratio", worst_ratio}, {"qi_level", qi_level}};
}

SplitAverageReport split_average_check(const SampledFunction& f, const YoungFunction& eta, const Cube& Q, const CubeFamily& fam) {
  const Domain& dom = f.domain();
  const int n = dom.dim();
  const ShiftedDyadicGrids grids(n);
  const double rn = std::sqrt(static_cast<double>(n));
  const Cube big = Q.scaled(8.0 * rn);
  const double tol = 1e-12 * std::max(1.0, big.half_side);
  const SampledFunction lhs = localized_maximal(f, eta, Q, fam);

  const int k_lo = static_cast<int>(std::floor(std::log2(0.5 * dom.h())));
  const int k_hi = static_cast<int>(std::floor(std::log2(big.side()) + 1e-12));
  std::map<std::tuple<int, int, long long, long long, long long>, double> cache;
  auto value = [&](int g, int k, const Cube& P) {
    std::array<long long, kMaxDim> m{0, 0, 0};
    const double S = std::ldexp(1.0, k);
    for (int a = 0; a < n; ++a)
      m[static_cast<std::size_t>(a)] = std::llround((P.center[a] - grids.offset(g, a, k)) / S - 0.5);
    const auto key = std::make_tuple(g, k, m[0], m[1], m[2]);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double v = luxemburg_average_masked(f, P, Q, eta);
    cache.emplace(key, v);
    return v;
  };

  SplitAverageReport rep;
  const double c3 = std::pow(3.0, n);
  for_each_point_in(dom, Q, [&](std::size_t i) {
    const Point x = dom.point(i);
    double rhs = 0.0;
    for (int g = 0; g < grids.count(); ++g) {
      double best = 0.0;
      for (int k = k_lo; k <= k_hi; ++k) {
        const Cube P = grids.cube_containing(g, k, x);
        if (big.contains(P, tol)) best = std::max(best, value(g, k, P));
      }
      rhs += best;
    }
    rhs *= c3;
    ++rep.points;
    if (lhs[i] > rhs * (1.0 + 1e-10) + 1e-300) ++rep.violations;
    if (rhs > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, lhs[i] / rhs);
  });

  // Smallest cube of each grid containing 8 sqrt(n) Q, if within 48 n Q.
  const Cube outer = Q.scaled(48.0 * n);
  for (int g = 0; g < grids.count(); ++g) {
    int found = INT_MIN;
    const int k0 = static_cast<int>(std::ceil(std::log2(big.side()) - 1e-12));
    for (int k = k0; k <= k0 + 8 && found == INT_MIN; ++k) {
      const Cube P = grids.cube_containing(g, k, big.center);
      if (P.contains(big, tol) && outer.contains(P, tol)) found = k;
    }
    rep.qi_level.push_back(found);
  }
  return rep;
}

// ---------------------------------------------------------------------------

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorKind::InvalidArgument, "slope fit needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, ErrorKind::Domain, "log-log slope needs positive data");
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Json CharBallReport::to_json() const {
  return Json{{"distances", distances},
              {"values_a", values_a},
              {"values", values},
              {"lower_shape", lower_shape},
              {"upper_shape", upper_shape},
              {"C_lower", C_lower},
              {"C_upper", C_upper},
              {"slope_a", slope_a},
              {"slope", slope},
              {"predicted_slope", predicted_slope},
              {"slope_rel_err", slope_rel_err},
              {"bracket", {bracket_lo, bracket_hi}},
              {"slope_ok", slope_ok},
              {"bracket_ok", bracket_ok}};
}

CharBallReport char_ball_bounds_check(const Domain& dom, const Point& x0, double sigma, const CriticalRadius& rho,
                                      const YoungFunction& phi, const std::vector<std::size_t>& points,
                                      double slope_tol) {
  require(sigma > 0.0, ErrorKind::InvalidArgument, "characteristic-ball bounds need sigma > 0");
  require(points.size() >= 2, ErrorKind::InvalidArgument, "characteristic-ball bounds need >= 2 points");
  const int n = dom.dim();
  const double r0 = rho(x0), N0 = rho.N0();
  std::vector<double> chi(dom.size(), 0.0);
  for (std::size_t i = 0; i < dom.size(); ++i)
    if (distance(dom.point(i), x0) <= r0 * (1.0 + 1e-12)) chi[i] = 1.0;
  const SampledFunction f(dom, std::move(chi));

  CharBallReport rep;
  const YoungFunction id;
  for (std::size_t p : points) {
    const double dist = distance(dom.point(p), x0);
    require(dist > 2.0 * r0 * (1.0 + 1e-12), ErrorKind::Precondition, "points must lie outside 2B0");
    // Geometric ladder plus a dense sweep over the radii whose balls meet B0.
    std::vector<double> radii;
    const double top = 2.0 * std::sqrt(static_cast<double>(n)) * dom.half_width();
    for (double r = dom.h(); r <= top; r *= std::exp2(1.0 / 16.0)) radii.push_back(r);
    for (int k = 0; k <= 64; ++k) radii.push_back(dist - r0 + 2.0 * r0 * k / 64.0);
    const double D = dist / r0;
    rep.distances.push_back(D);
    rep.values_a.push_back(centered_ball_maximal_at(f, id, sigma, rho, radii, {p})[0]);
    rep.values.push_back(centered_ball_maximal_at(f, phi, sigma, rho, radii, {p})[0]);
    rep.lower_shape.push_back(std::pow(D, -(n + sigma * (N0 + 1.0))));
    rep.upper_shape.push_back(std::pow(D, -sigma / (N0 + 1.0)) / phi.inverse(std::pow(D, n)));
  }
  rep.C_lower = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    rep.C_lower = std::min(rep.C_lower, rep.values_a[i] / rep.lower_shape[i]);
    rep.C_upper = std::max(rep.C_upper, rep.values[i] / rep.upper_shape[i]);
  }
  std::vector<double> inv(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) inv[i] = phi.inverse(std::pow(rep.distances[i], n));
  const double inv_slope = loglog_slope(rep.distances, inv);
  rep.slope_a = loglog_slope(rep.distances, rep.values_a);
  rep.slope = loglog_slope(rep.distances, rep.values);
  rep.predicted_slope = -sigma - inv_slope;
  rep.slope_rel_err = std::abs(rep.slope - rep.predicted_slope) / std::abs(rep.predicted_slope);
  rep.slope_ok = rep.slope_rel_err <= slope_tol;
  rep.bracket_lo = -(n + sigma * (N0 + 1.0));
  rep.bracket_hi = -sigma / (N0 + 1.0) - inv_slope;
  rep.bracket_ok = rep.slope_a >= rep.bracket_lo && rep.slope <= rep.bracket_hi;
  return rep;
}

}  // namespace rhomax
