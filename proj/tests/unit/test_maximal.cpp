// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "rhomax/core/error.hpp"
#include "rhomax/core/functions.hpp"
#include "rhomax/core/maximal.hpp"
#include "rhomax/core/orlicz.hpp"
#include "test_util.hpp"

using namespace rhomax;
using rhomax::testing::rel_close;

namespace {

SampledFunction battery_fn(const Domain& dom, std::size_t i, std::uint64_t seed = 21) {
  return make_function(dom, random_battery(dom.dim(), dom.half_width(), i + 1, seed)[i]);
}

bool all_leq(const SampledFunction& a, const SampledFunction& b, double rel = 0.0, double abs_tol = 0.0) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i] * (1 + rel) + abs_tol) return false;
  return true;
}

}  // namespace

TEST_CASE("hl_maximal agrees with the naive family oracle (1D, N=32)") {
  const Domain dom(1, 2.0, 32);
  const CubeFamily fam = CubeFamily::standard(dom);
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  for (std::size_t k = 0; k < 6; ++k) {
    const SampledFunction f = battery_fn(dom, k);
    for (double sigma : {0.0, 1.0, 3.0}) {
      const SampledFunction fast = hl_maximal(f, rho, sigma, fam);
      const SampledFunction g = f.abs();
      const SampledFunction naive = sweep_max_naive(dom, fam, [&](std::size_t, const Cube& q) {
        return damping(q.radius(), rho(q.center), sigma) * g.average(q);
      });
      for (std::size_t i = 0; i < dom.size(); ++i) CHECK(fast[i] == naive[i]);
    }
  }
}

TEST_CASE("hl_maximal basics") {
  const Domain dom(1, 4.0, 64);
  const CubeFamily fam = CubeFamily::standard(dom);
  const SampledFunction c = rhomax::testing::constant(dom, 2.5);
  const SampledFunction Mc = hl_maximal(c, CriticalRadius::constant(1.0), 0.0, fam);
  for (double v : Mc.values()) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
  const SampledFunction f = battery_fn(dom, 2);
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  CHECK(all_leq(hl_maximal(f, rho, 2.0, fam), hl_maximal(f, rho, 1.0, fam)));
  CHECK(all_leq(hl_maximal(f, rho, 1.0, fam), hl_maximal(f, rho, 0.0, fam)));
  CHECK(damping(1.0, 1.0, 0.0) == 1.0);
  CHECK(damping(1.0, 1.0, 2.0) == doctest::Approx(0.25));
}

TEST_CASE("operator algebra") {
  for (int d = 1; d <= 2; ++d) {
    const Domain dom(d, 2.0, d == 1 ? 64 : 16);
    const CubeFamily fam = CubeFamily::standard(dom);
    const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
    for (std::size_t k = 0; k + 1 < 6; k += 2) {
      const SampledFunction f = battery_fn(dom, k), g = battery_fn(dom, k + 1);
      for (const YoungFunction& eta : {YoungFunction(), YoungFunction::power(2), YoungFunction::plog(1, 1)}) {
        const SampledFunction Mf = orlicz_maximal(f, eta, rho, 1.0, fam);
        const SampledFunction Mg = orlicz_maximal(g, eta, rho, 1.0, fam);
        const SampledFunction Mfg = orlicz_maximal(f.plus(g), eta, rho, 1.0, fam);
        CHECK(all_leq(Mfg, Mf.plus(Mg), 1e-10, 1e-12));
        const SampledFunction M3 = orlicz_maximal(f.scaled(3.0), eta, rho, 1.0, fam);
        for (std::size_t i = 0; i < dom.size(); ++i) CHECK(rel_close(M3[i], 3.0 * Mf[i], eta.is_identity() ? 1e-14 : 1e-8));
        CHECK(all_leq(orlicz_maximal(f, eta, rho, 2.5, fam), Mf));
      }
    }
  }
}

TEST_CASE("orlicz_maximal identities") {
  const Domain dom(1, 2.0, 64);
  const CubeFamily fam = CubeFamily::standard(dom);
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  const SampledFunction f = battery_fn(dom, 3);
  const SampledFunction a = orlicz_maximal(f, YoungFunction(), rho, 1.5, fam), b = hl_maximal(f, rho, 1.5, fam);
  for (std::size_t i = 0; i < dom.size(); ++i) CHECK(a[i] == b[i]);
  // per-cube closed form for t^p: M_{t^p}^{sigma} f = (M^{sigma p} |f|^p)^{1/p}
  for (double p : {2.0, 3.0}) {
    const SampledFunction lhs = orlicz_maximal(f, YoungFunction::power(p), rho, 1.0, fam);
    const SampledFunction rhs =
        hl_maximal(f.map([p](double x) { return std::pow(std::abs(x), p); }), rho, p, fam).map([p](double x) {
          return std::pow(x, 1.0 / p);
        });
    for (std::size_t i = 0; i < dom.size(); ++i) CHECK(rel_close(lhs[i], rhs[i], 1e-8));
  }
  const SampledFunction big = f.abs().scaled(1.2);
  CHECK(all_leq(orlicz_maximal(f, YoungFunction::power(2), rho, 1.0, fam),
                orlicz_maximal(big, YoungFunction::power(2), rho, 1.0, fam), 1e-10));
}

TEST_CASE("family restriction consistency") {
  const Domain dom(2, 2.0, 16);
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  const SampledFunction f = battery_fn(dom, 1);
  const CubeFamily fine = CubeFamily::standard(dom, BoundaryPolicy::ZeroExtend, 0.5);
  const CubeFamily coarse = CubeFamily::standard(dom, BoundaryPolicy::ZeroExtend, 1.0);
  CHECK(all_leq(hl_maximal(f, rho, 1.0, coarse), hl_maximal(f, rho, 1.0, fine)));
}

TEST_CASE("centered ball maximal") {
  const Domain dom(2, 2.0, 16);
  const SampledFunction c = rhomax::testing::constant(dom, 1.75);
  const auto radii = standard_radii(dom);
  const SampledFunction M = centered_ball_maximal(c, YoungFunction(), 0.0, CriticalRadius::constant(1.0), radii);
  // interior points: a ball inside the domain gives the constant exactly
  CHECK(M[dom.flat({8, 8, 0})] == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(M.max_abs() == doctest::Approx(1.75).epsilon(1e-14));
  const SampledFunction f = battery_fn(dom, 0);
  std::vector<double> sub(radii.begin(), radii.begin() + static_cast<long>(radii.size() / 2));
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  CHECK(all_leq(centered_ball_maximal(f, YoungFunction(), 1.0, rho, sub),
                centered_ball_maximal(f, YoungFunction(), 1.0, rho, radii)));
  std::vector<double> denser = radii;
  for (double r : radii) denser.push_back(r * 1.5);
  CHECK(all_leq(centered_ball_maximal(f, YoungFunction(), 1.0, rho, radii),
                centered_ball_maximal(f, YoungFunction(), 1.0, rho, denser)));
}

namespace {

// Brute-force dyadic oracle: every dyadic subcube of R down to side h.
void dyadic_oracle(const SampledFunction& f, const YoungFunction& eta, const Cube& P, std::vector<double>& acc) {
  const Domain& dom = f.domain();
  const double v = luxemburg_average(f, P, eta);
  for (std::size_t i = 0; i < dom.size(); ++i)
    if (P.contains(dom.point(i))) acc[i] = std::max(acc[i], v);
  if (P.side() <= dom.h() * (1 + 1e-12)) return;
  for (const Cube& c : dyadic_children(P)) dyadic_oracle(f, eta, c, acc);
}

}  // namespace

TEST_CASE("localized operators and split averages") {
  const Domain dom(1, 4.0, 64);
  const CubeFamily fam = CubeFamily::standard(dom);
  const Cube R{make_point({0.0}), 2.0};
  for (std::size_t k = 0; k < 4; ++k) {
    const SampledFunction f = battery_fn(dom, k, 33);
    for (const YoungFunction& eta : {YoungFunction(), YoungFunction::power(2)}) {
      const SampledFunction dy = dyadic_localized_maximal(f, eta, R);
      std::vector<double> oracle(dom.size(), 0.0);
      dyadic_oracle(f, eta, R, oracle);
      for (std::size_t i = 0; i < dom.size(); ++i) CHECK(dy[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
      // the family operator never exceeds the plain family maximal of f chi_R
      const SampledFunction lo = localized_maximal(f, eta, R, fam);
      const SampledFunction fR = f.times(make_function(dom, Json{{"kind", "indicator"}, {"center", {0.0}}, {"half_side", 2.0}}));
      CHECK(all_leq(lo, orlicz_maximal(fR, eta, CriticalRadius::constant(1.0), 0.0, fam), 1e-12));
      const SplitAverageReport rep = split_average_check(f, eta, Cube{make_point({0.25}), 0.75}, fam);
      CHECK(rep.violations == 0);
      CHECK(rep.points > 0);
    }
  }
  const SampledFunction outside =
      make_function(dom, Json{{"kind", "indicator"}, {"center", {3.0}}, {"half_side", 0.5}});
  CHECK(localized_maximal(outside, YoungFunction(), R, fam).max_abs() == 0.0);
  CHECK(dyadic_localized_maximal(outside, YoungFunction(), R).max_abs() == 0.0);
  const Domain dom2(2, 2.0, 16);
  const SampledFunction f2 = battery_fn(dom2, 0, 34);
  CHECK(split_average_check(f2, YoungFunction(), Cube{make_point({0.1, -0.2}), 0.5}, CubeFamily::standard(dom2)).violations == 0);
}

TEST_CASE("local / global split") {
  const Domain dom(1, 2.0, 64);
  const CubeFamily fam = CubeFamily::standard(dom);
  const SampledFunction f = battery_fn(dom, 5);
  const auto [loc0, glob0] = local_global_split(f, YoungFunction(), 1.0, CriticalRadius::constant(100.0), fam);
  CHECK(glob0.max_abs() == 0.0);
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  for (const YoungFunction& eta : {YoungFunction(), YoungFunction::power(2)}) {
    const SampledFunction M = orlicz_maximal(f, eta, rho, 1.0, fam);
    const auto [loc, glob] = local_global_split(f, eta, 1.0, rho, fam);
    CHECK(all_leq(M, loc.plus(glob), 1e-12));
  }
  // glob <= |f|_inf max over centres c and ladder sides s > rho(c) of (rho(c)/s)^sigma
  const std::vector<double> r = sample_rho(rho, dom);
  double prev = 1e300;
  for (double s : {0.0, 1.0, 4.0, 16.0, 64.0}) {
    const double g = local_global_split(f, YoungFunction(), s, rho, fam).second.max_abs();
    double bound = 0.0;
    for (double rc : r)
      for (double hs : fam.half_sides)
        if (hs > rc * (1 + 1e-12)) bound = std::max(bound, std::pow(rc / hs, s));
    CHECK(g <= prev);
    CHECK(g <= bound * f.abs().max_abs() * (1 + 1e-12));
    prev = g;
  }
  // rho = 1 sits on the ladder (h/2 2^k with h = 1/16), so the first global side is 2
  const double g64 = local_global_split(f, YoungFunction(), 64.0, CriticalRadius::constant(1.0), fam).second.max_abs();
  CHECK(g64 <= std::pow(2.0, -64.0) * f.abs().max_abs() * (1 + 1e-12));
}

TEST_CASE("pointwise power bound") {
  for (int d = 1; d <= 2; ++d) {
    const Domain dom(d, 2.0, d == 1 ? 128 : 16);
    const CubeFamily fam = CubeFamily::standard(dom);
    const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
    for (std::size_t k = 0; k < 3; ++k) {
      const PointwiseReport r = pointwise_power_bound_check(battery_fn(dom, k), 4.0, 2.0, 2.0, 2.0, 1.0, rho, fam);
      CHECK(r.violations == 0);
      CHECK(r.worst_ratio <= 1.0 + 1e-12);
    }
    // q = 0 is Jensen for t^p
    CHECK(pointwise_power_bound_check(battery_fn(dom, 4), 3.0, 0.0, 1.5, 1.5, 1.0, rho, fam).violations == 0);
    const PointwiseReport z =
        pointwise_power_bound_check(rhomax::testing::constant(dom, 0.0), 4.0, 2.0, 2.0, 2.0, 1.0, rho, fam);
    CHECK(z.violations == 0);
    CHECK_THROWS_AS(pointwise_power_bound_check(battery_fn(dom, 0), 4.0, 2.0, 1.0, 1.0, 1.0, rho, fam), Error);
    CHECK_THROWS_AS(pointwise_power_bound_check(battery_fn(dom, 0), 4.0, 2.0, 2.0, 3.0, 1.0, rho, fam), Error);
  }
}

TEST_CASE("pointwise product bound") {
  const Domain dom(1, 2.0, 64);
  const CubeFamily fam = CubeFamily::standard(dom);
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  const SampledFunction f = make_function(dom, Json{{"kind", "indicator"}, {"center", {0.2}}, {"half_side", 0.3}});
  const SampledFunction u = make_function(dom, Json{{"kind", "indicator"}, {"center", {-0.1}}, {"half_side", 0.4}});
  for (const YoungFunction& eta : {YoungFunction::power(2), YoungFunction::plog(1, 1)}) {
    CHECK(pointwise_product_bound_check(f, u, eta, 1.0, 2.0, rho, fam).violations == 0);
    const PointwiseReport z =
        pointwise_product_bound_check(f, rhomax::testing::constant(dom, 0.0), eta, 1.0, 1.0, rho, fam);
    CHECK(z.violations == 0);
    for (std::size_t k = 0; k + 1 < 8; k += 2)
      CHECK(pointwise_product_bound_check(battery_fn(dom, k), battery_fn(dom, k + 1), eta, 1.0, 1.5, rho, fam)
                .violations == 0);
  }
  CHECK_THROWS_AS(pointwise_product_bound_check(f, u, YoungFunction::power(2), 2.0, 1.0, rho, fam), Error);
}

TEST_CASE("characteristic ball bounds") {
  const Domain dom(1, 32.0, 256);
  const CriticalRadius rho = CriticalRadius::constant(1.0);
  const Point x0 = make_point({0.125});
  std::vector<std::size_t> pts;
  for (double D : {4.0, 8.0, 16.0}) pts.push_back(dom.nearest(make_point({0.125 + D})));
  const CharBallReport rep = char_ball_bounds_check(dom, x0, 1.0, rho, YoungFunction(), pts);
  CHECK(rep.lower_shape[0] == doctest::Approx(std::pow(4.0, -3.0)));
  CHECK(rep.C_lower > 0.0);
  CHECK(std::isfinite(rep.C_upper));
  CHECK(rep.bracket_ok);
  CHECK_THROWS_AS(char_ball_bounds_check(dom, x0, 1.0, rho, YoungFunction(),
                                         {dom.nearest(make_point({0.125 + 2.0})), pts[0]}),
                  Error);
  CHECK(loglog_slope({1.0, 2.0, 4.0}, {1.0, 0.25, 0.0625}) == doctest::Approx(-2.0));
}
