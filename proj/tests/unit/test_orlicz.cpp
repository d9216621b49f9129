// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "rhomax/core/error.hpp"
#include "rhomax/core/functions.hpp"
#include "rhomax/core/orlicz.hpp"
#include "test_util.hpp"

using namespace rhomax;
using rhomax::testing::rel_close;
using rhomax::testing::sample;

namespace {

// Cell-overlap mean of g(|f|) over q: the closed-form oracle for power Young functions.
double overlap_mean(const SampledFunction& f, const Cube& q, double p) {
  double s = 0.0;
  for_each_cell(f.domain(), overlap(f.domain(), q),
                [&](std::size_t i, double w) { s += w * std::pow(std::abs(f[i]), p); });
  return s * f.domain().cell_volume() / q.measure();
}

Cube random_cube(std::mt19937_64& rng, int d, double L) {
  std::uniform_real_distribution<double> U(-L / 2, L / 2), S(0.05, L / 2);
  Cube q;
  q.center.dim = d;
  for (int i = 0; i < d; ++i) q.center[i] = U(rng);
  q.half_side = S(rng);
  return q;
}

}  // namespace

TEST_CASE("luxemburg average closed forms") {
  const Domain dom(1, 2.0, 128);
  std::mt19937_64 rng(17);
  const auto battery = random_battery(1, 2.0, 100, 3);
  for (double p : {1.5, 2.0, 3.0}) {
    const YoungFunction eta = YoungFunction::power(p);
    for (int t = 0; t < 100; ++t) {
      const SampledFunction f = make_function(dom, battery[static_cast<std::size_t>(t)]);
      const Cube q = random_cube(rng, 1, 2.0);
      const double oracle = std::pow(overlap_mean(f, q, p), 1.0 / p);
      if (oracle == 0.0) CHECK(luxemburg_average(f, q, eta) == 0.0);
      else CHECK(rel_close(luxemburg_average(f, q, eta), oracle, 1e-8));
    }
  }
  // identity: the plain mean, exactly
  const SampledFunction f = make_function(dom, battery[0]);
  const Cube q{make_point({0.1}), 0.7};
  CHECK(luxemburg_average(f, q, YoungFunction()) == doctest::Approx(f.abs().average(q)).epsilon(1e-14));
  // constant on Q, normalized eta
  const SampledFunction c = rhomax::testing::constant(dom, 3.0);
  CHECK(rel_close(luxemburg_average(c, Cube{make_point({0.0}), 1.0}, YoungFunction::plog(2, 1)), 3.0, 1e-9));
  CHECK(luxemburg_average(rhomax::testing::constant(dom, 0.0), q, YoungFunction::power(2)) == 0.0);
}

TEST_CASE("luxemburg residual, monotonicity, permutation") {
  const Domain dom(1, 2.0, 64);
  const YoungFunction eta = YoungFunction::plog(2, 1);
  const auto battery = random_battery(1, 2.0, 10, 5);
  const Cube q{make_point({0.0}), 1.0};
  for (const auto& s : battery) {
    const SampledFunction f = make_function(dom, s);
    const double lam = luxemburg_average(f, q, eta);
    if (lam > 0.0) CHECK(std::abs(modular_mean(f, q, eta, lam) - 1.0) <= 1e-8);
    const SampledFunction g = f.abs().scaled(1.5);
    CHECK(luxemburg_average(f, q, eta) <= luxemburg_average(g, q, eta) * (1 + 1e-10));
  }
  // relabeling cells inside an aligned Q leaves the average unchanged
  const SampledFunction f = make_function(dom, battery[1]);
  std::vector<double> v = f.values();
  std::reverse(v.begin() + 16, v.begin() + 48);
  const SampledFunction g(dom, v);
  CHECK(rel_close(luxemburg_average(f, q, eta), luxemburg_average(g, q, eta), 1e-10));
}

TEST_CASE("modular and global norm") {
  const Domain dom(1, 2.0, 64);
  const SampledFunction zero = rhomax::testing::constant(dom, 0.0);
  const SampledFunction one = rhomax::testing::constant(dom, 1.0);
  const SampledFunction f = make_function(dom, random_battery(1, 2.0, 1, 2).front());
  CHECK(modular(zero, one, YoungFunction::power(2), 1.0) == 0.0);
  CHECK(modular(f, one, YoungFunction(), 1.0) == doctest::Approx(f.abs().total()));
  CHECK(modular(f, one, YoungFunction::power(2), 2.0) <= modular(f, one, YoungFunction::power(2), 1.0));
  CHECK_THROWS_AS(modular(f, one, YoungFunction(), 0.0), Error);
  for (double p : {1.5, 2.0, 3.0}) {
    double s = 0.0;
    for (double x : f.values()) s += std::pow(std::abs(x), p);
    const double lp = std::pow(s * dom.cell_volume(), 1.0 / p);
    CHECK(rel_close(luxemburg_norm(f, YoungFunction::power(p)), lp, 1e-8));
  }
  const YoungFunction Phi = YoungFunction::plog(2, 1);
  CHECK(rel_close(luxemburg_norm(f.scaled(3.0), Phi), 3.0 * luxemburg_norm(f, Phi), 1e-8));
  CHECK(luxemburg_norm(zero, Phi) == 0.0);
  const auto bat = random_battery(1, 2.0, 100, 6);
  for (std::size_t i = 0; i + 1 < bat.size(); i += 2) {
    const SampledFunction a = make_function(dom, bat[i]), b = make_function(dom, bat[i + 1]);
    CHECK(luxemburg_norm(a.plus(b), Phi) <= luxemburg_norm(a, Phi) + luxemburg_norm(b, Phi) + 1e-8);
  }
}

TEST_CASE("inf formula") {
  const Domain dom(1, 2.0, 64);
  const Cube q{make_point({0.0}), 1.0};
  CHECK(inf_formula_average(rhomax::testing::constant(dom, 0.0), q, YoungFunction::power(2)) == 0.0);
  // identity: inf_t (t + mean) is approached as t -> 0, i.e. the mean
  const SampledFunction f = make_function(dom, random_battery(1, 2.0, 1, 1).front());
  const double m = f.abs().average(q);
  CHECK(inf_formula_average(f, q, YoungFunction()) >= m * (1 - 1e-8));
  CHECK(inf_formula_average(f, q, YoungFunction()) <= 2.0 * m);
  std::mt19937_64 rng(4);
  const auto bat = random_battery(1, 2.0, 50, 7);
  double lo = 1e300, hi = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const SampledFunction g = make_function(dom, bat[static_cast<std::size_t>(t % 50)]);
    const Cube c = random_cube(rng, 1, 2.0);
    const YoungFunction eta = (t % 3 == 0) ? YoungFunction::power(2) : (t % 3 == 1 ? YoungFunction::plog(1, 1) : YoungFunction::power(3));
    const double a = luxemburg_average(g, c, eta);
    if (a == 0.0) continue;
    const double r = inf_formula_average(g, c, eta) / a;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo >= 0.25);
  CHECK(hi <= 4.0);
}

TEST_CASE("Hoelder") {
  const Domain dom(1, 2.0, 64);
  const Cube q{make_point({0.0}), 1.0};
  const SampledFunction one = rhomax::testing::constant(dom, 1.0);
  const SampledFunction f = make_function(dom, random_battery(1, 2.0, 1, 9).front());
  // g = 1, t^2: mean|f| <= 2 ||f||_2 * ||1||_{t^2/4}
  const HolderReport cs = holder_check(f, one, q, YoungFunction::power(2));
  CHECK(cs.lhs == doctest::Approx(f.abs().average(q)));
  CHECK(cs.ratio <= 1.0);
  CHECK(holder_check(rhomax::testing::constant(dom, 0.0), f, q, YoungFunction::power(2)).lhs == 0.0);
  std::mt19937_64 rng(5);
  const auto bat = random_battery(1, 2.0, 40, 10);
  int viol = 0;
  for (int t = 0; t < 1000; ++t) {
    const SampledFunction a = make_function(dom, bat[static_cast<std::size_t>(t % 40)]);
    const SampledFunction b = make_function(dom, bat[static_cast<std::size_t>((t * 7 + 3) % 40)]);
    const YoungFunction Phi = (t % 2) ? YoungFunction::power(3) : YoungFunction::plog(2, 1);
    if (holder_check(a, b, random_cube(rng, 1, 2.0), Phi).ratio > 1.0) ++viol;
  }
  CHECK(viol == 0);
}

TEST_CASE("modular / norm relation") {
  const Domain dom(1, 2.0, 64);
  const YoungFunction phi = YoungFunction::plog(2, 1);
  const SampledFunction f = make_function(dom, random_battery(1, 2.0, 1, 11).front());
  const SampledFunction unit = f.scaled(1.0 / luxemburg_norm(f, phi));
  const auto r1 = modular_norm_relation_check(unit, phi);
  CHECK(r1.ok);
  CHECK(r1.modular <= 1.0 + 1e-8);
  const SampledFunction ind = make_function(dom, Json{{"kind", "indicator"}, {"center", {0.0}}, {"half_side", 0.25}});
  const SampledFunction two = ind.scaled(2.0 / luxemburg_norm(ind, phi));
  const auto r2 = modular_norm_relation_check(two, phi);
  CHECK(r2.ok);
  CHECK(r2.modular >= 2.0);
  const auto r0 = modular_norm_relation_check(rhomax::testing::constant(dom, 0.0), phi);
  CHECK(r0.ok);
  CHECK(r0.norm == 0.0);
}
