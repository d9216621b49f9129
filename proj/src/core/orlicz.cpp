// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/orlicz.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "rhomax/core/error.hpp"

namespace rhomax {

std::vector<CellSample> gather(const SampledFunction& f, const Overlap& ov) {
  std::vector<CellSample> out;
  const double vol = f.domain().cell_volume();
  for_each_cell(f.domain(), ov, [&](std::size_t i, double frac) {
    const double v = std::abs(f[i]);
    if (v > 0.0 && frac > 0.0) out.push_back(CellSample{frac * vol, v});
  });
  return out;
}

double luxemburg_solve(const std::vector<CellSample>& cells, double measure, const YoungFunction& eta) {
  require(measure > 0.0, ErrorKind::InvalidArgument, "Luxemburg solve needs positive measure");
  if (cells.empty()) return 0.0;
  double vmax = 0.0;
  for (const auto& c : cells) vmax = std::max(vmax, c.value);
  if (vmax == 0.0) return 0.0;
  if (eta.is_identity()) {
    double s = 0.0;
    for (const auto& c : cells) s += c.weight * c.value;
    return s / measure;
  }
  if (eta.is_degenerate()) return vmax / eta.threshold();

  // excess(lambda) > 0 means lambda is too small.
  auto excess = [&](double lambda) {
    double s = 0.0;
    for (const auto& c : cells) {
      s += c.weight * eta.eval(c.value / lambda);
      if (!std::isfinite(s)) return 1.0;
    }
    return s / measure - 1.0;
  };
  double hi = vmax;
  for (int i = 0; i < 2000 && excess(hi) > 0.0; ++i) hi *= 2.0;
  double lo = 1e-14 * vmax;
  if (excess(lo) <= 0.0) return lo;
  for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-10; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (excess(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double luxemburg_average(const SampledFunction& f, const Cube& q, const YoungFunction& eta) {
  return luxemburg_solve(gather(f, overlap(f.domain(), q)), q.measure(), eta);
}

double luxemburg_average_masked(const SampledFunction& f, const Cube& p, const Cube& mask, const YoungFunction& eta) {
  std::array<double, kMaxDim> lo{}, hi{};
  for (int i = 0; i < p.dim(); ++i) {
    lo[static_cast<std::size_t>(i)] = std::max(p.lo(i), mask.lo(i));
    hi[static_cast<std::size_t>(i)] = std::min(p.hi(i), mask.hi(i));
    if (!(hi[static_cast<std::size_t>(i)] > lo[static_cast<std::size_t>(i)])) return 0.0;
  }
  return luxemburg_solve(gather(f, overlap_box(f.domain(), lo, hi)), p.measure(), eta);
}

double modular_mean(const SampledFunction& f, const Cube& q, const YoungFunction& eta, double lambda) {
  require(lambda > 0.0, ErrorKind::InvalidArgument, "modular needs lambda > 0");
  double s = 0.0;
  for (const auto& c : gather(f, overlap(f.domain(), q))) s += c.weight * eta.eval(c.value / lambda);
  return s / q.measure();
}

double modular(const SampledFunction& f, const SampledFunction& w, const YoungFunction& Phi, double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::InvalidArgument, "modular needs finite lambda > 0");
  require(f.domain() == w.domain(), ErrorKind::InvalidArgument, "function and weight live on different domains");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(w[i] >= 0.0, ErrorKind::Domain, "weights must be nonnegative");
    const double v = std::abs(f[i]);
    if (v > 0.0 && w[i] > 0.0) s += Phi.eval(v / lambda) * w[i];
  }
  return s * f.domain().cell_volume();
}

double modular(const SampledFunction& f, const YoungFunction& Phi, double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::InvalidArgument, "modular needs finite lambda > 0");
  double s = 0.0;
  for (double x : f.values())
    if (x != 0.0) s += Phi.eval(std::abs(x) / lambda);
  return s * f.domain().cell_volume();
}

double luxemburg_norm(const SampledFunction& f, const SampledFunction& w, const YoungFunction& Phi) {
  require(f.domain() == w.domain(), ErrorKind::InvalidArgument, "function and weight live on different domains");
  std::vector<CellSample> cells;
  const double vol = f.domain().cell_volume();
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(w[i] >= 0.0, ErrorKind::Domain, "weights must be nonnegative");
    const double v = std::abs(f[i]);
    if (v > 0.0 && w[i] > 0.0) cells.push_back(CellSample{vol * w[i], v});
  }
  return luxemburg_solve(cells, 1.0, Phi);
}

double luxemburg_norm(const SampledFunction& f, const YoungFunction& Phi) {
  std::vector<CellSample> cells;
  const double vol = f.domain().cell_volume();
  for (double x : f.values())
    if (x != 0.0) cells.push_back(CellSample{vol, std::abs(x)});
  return luxemburg_solve(cells, 1.0, Phi);
}

double inf_formula_average(const SampledFunction& f, const Cube& q, const YoungFunction& eta) {
  const auto cells = gather(f, overlap(f.domain(), q));
  if (cells.empty()) return 0.0;
  double vmax = 0.0;
  for (const auto& c : cells) vmax = std::max(vmax, c.value);
  const double measure = q.measure();
  auto objective = [&](double logt) {
    const double t = std::exp(logt);
    double s = 0.0;
    for (const auto& c : cells) s += c.weight * eta.eval(c.value / t);
    const double v = t + t * s / measure;
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  // Coarse scan locates the basin, Brent refines it.
  const double a = std::log(1e-12 * vmax), b = std::log(4.0 * vmax);
  const int n = 64;
  int best = 0;
  double fbest = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double v = objective(a + (b - a) * i / n);
    if (v < fbest) {
      fbest = v;
      best = i;
    }
  }
  const double lo = a + (b - a) * std::max(best - 1, 0) / n;
  const double hi = a + (b - a) * std::min(best + 1, n) / n;
  const auto r = boost::math::tools::brent_find_minima(objective, lo, hi, 30);
  return std::min(fbest, r.second);
}

Json HolderReport::to_json() const { return Json{{"lhs", lhs}, {"rhs", rhs}, {"ratio", ratio}}; }

HolderReport holder_check(const SampledFunction& f, const SampledFunction& g, const Cube& q, const YoungFunction& Phi) {
  return holder_check(f, g, q, Phi, Phi.complementary());
}

HolderReport holder_check(const SampledFunction& f, const SampledFunction& g, const Cube& q, const YoungFunction& Phi,
                          const YoungFunction& Phi_dual) {
  HolderReport r;
  r.lhs = f.times(g).abs().average(q);
  r.rhs = 2.0 * luxemburg_average(f, q, Phi) * luxemburg_average(g, q, Phi_dual);
  r.ratio = r.lhs == 0.0 ? 0.0 : r.lhs / r.rhs;
  return r;
}

Json ModularNormReport::to_json() const {
  return Json{{"norm", norm}, {"modular", modular}, {"ok", ok}, {"branch", branch}};
}

ModularNormReport modular_norm_relation_check(const SampledFunction& f, const YoungFunction& phi) {
  ModularNormReport r;
  r.norm = luxemburg_norm(f, phi);
  r.modular = modular(f, phi, 1.0);
  const double tol = 1e-8;
  if (r.norm <= 1.0) {
    r.branch = "norm<=1";
    r.ok = r.modular <= r.norm * (1.0 + tol) + 1e-300;
  } else {
    r.branch = "norm>1";
    r.ok = r.norm <= r.modular * (1.0 + tol);
  }
  return r;
}

}  // namespace rhomax
