// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "rhomax/core/error.hpp"
#include "rhomax/core/young.hpp"
#include "test_util.hpp"

using namespace rhomax;
using rhomax::testing::rel_close;

namespace {
const double kE = std::exp(1.0);
}

TEST_CASE("eval closed forms") {
  CHECK(YoungFunction::power(2).eval(3.0) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(YoungFunction::plog(1, 0).eval(5.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(rel_close(YoungFunction::plog(2, 1).eval(kE), 2.0 * kE * kE, 1e-14));
  CHECK(YoungFunction::power(3).eval(0.0) == 0.0);
  CHECK_THROWS_AS(YoungFunction::power(2).eval(-1.0), Error);
}

TEST_CASE("derivative") {
  CHECK(YoungFunction::power(2).derivative(3.0) == doctest::Approx(6.0));
  CHECK(YoungFunction::plog(1, 0).derivative(0.7) == doctest::Approx(1.0));
  CHECK(YoungFunction::plog(1, 0).derivative(7.0) == doctest::Approx(1.0));
  CHECK(YoungFunction::power(3).derivative(2.0) == doctest::Approx(12.0));
  CHECK(YoungFunction::power(2).derivative(0.0) == 0.0);
  CHECK(YoungFunction::power(1).derivative(0.0) == 1.0);
  // right derivative at the kink: p + q
  CHECK(YoungFunction::plog(2, 1).derivative(1.0) == doctest::Approx(3.0));
}

TEST_CASE("inverse") {
  CHECK(YoungFunction::power(2).inverse(9.0) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(YoungFunction::plog(1, 0).inverse(7.0) == doctest::Approx(7.0).epsilon(1e-10));
  CHECK(rel_close(YoungFunction::plog(2, 1).inverse(2.0 * kE * kE), kE, 1e-9));
  for (const auto& f : {YoungFunction::power(1.5), YoungFunction::plog(2, 1), YoungFunction::plog(1, 1)})
    for (double t : log_ladder(1e-3, 1e4, 40)) CHECK(rel_close(f.inverse(f.eval(t)), t, 1e-8));
}

TEST_CASE("complementary") {
  const YoungFunction half_sq = YoungFunction::power(2, 0.5);
  CHECK(half_sq.complementary().eval(1.0) == doctest::Approx(0.5).epsilon(1e-9));
  for (double p : {1.5, 3.0}) {
    const double pp = p / (p - 1.0);
    const YoungFunction f = YoungFunction::power(p, 1.0 / p);
    const YoungFunction g = f.complementary();
    for (double t : {0.1, 0.5, 1.0, 2.0, 7.0}) CHECK(rel_close(g.eval(t), std::pow(t, pp) / pp, 1e-8));
  }
  CHECK(YoungFunction::plog(2, 1).complementary().eval(0.0) == 0.0);
  // numeric transform of a non-power family against direct maximisation
  const YoungFunction f = YoungFunction::plog(2, 1);
  const YoungFunction g = f.complementary();
  for (double t : {0.5, 2.0, 10.0}) {
    double best = 0.0;
    for (double s = 1e-4; s < 50.0; s *= 1.0005) best = std::max(best, s * t - f.eval(s));
    CHECK(g.eval(t) >= best * (1 - 1e-9));
    CHECK(g.eval(t) <= best * (1 + 1e-5));
  }
  // sub-linear at infinity -> degenerate dual
  CHECK(YoungFunction().complementary().is_degenerate());
}

TEST_CASE("normalize") {
  CHECK(YoungFunction::power(2).normalized().eval(3.0) == doctest::Approx(9.0));
  CHECK(YoungFunction::power(2, 3.0).normalized().eval(2.0) == doctest::Approx(4.0));
  CHECK(YoungFunction::plog(2, 1).normalized().eval(kE) == doctest::Approx(2 * kE * kE));
  CHECK(YoungFunction::power(2, 3.0).normalized().is_normalized());
}

TEST_CASE("doubling constant") {
  const auto ladder = log_ladder(1e-3, 1e8, 200);
  CHECK(doubling_constant(YoungFunction::power(2), ladder) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(doubling_constant(YoungFunction::plog(1, 0), ladder) == doctest::Approx(2.0).epsilon(1e-12));
  const double c = doubling_constant(YoungFunction::plog(2, 1), ladder);
  CHECK(c >= 4.0);
  CHECK(c <= 8.0);
  // ratio decreases toward 4 for large t
  const YoungFunction f = YoungFunction::plog(2, 1);
  CHECK(f.eval(2e6) / f.eval(1e6) < f.eval(20.0) / f.eval(10.0));
}

TEST_CASE("Young inequality and duality sandwich") {
  for (const auto& f : {YoungFunction::power(2), YoungFunction::power(3), YoungFunction::plog(2, 1)}) {
    const YoungFunction g = f.complementary();
    for (double s = 0.0; s <= 100.0; s += 2.5)
      for (double t = 0.0; t <= 100.0; t += 2.5) CHECK(s * t <= f.eval(s) + g.eval(t) + 1e-9 * (1 + s * t));
    for (double t : log_ladder(1e-3, 1e3, 64)) {
      const double v = f.inverse(t) * g.inverse(t);
      CHECK(v >= t / 2.0 * (1 - 1e-9));
      CHECK(v <= 2.0 * t * (1 + 1e-9));
    }
  }
}

TEST_CASE("Young invariants on ladders") {
  for (const auto& f : {YoungFunction::power(1.5), YoungFunction::plog(2, 1), YoungFunction::plog(1, 2),
                        YoungFunction::custom({{0.5, 0.25}, {1.0, 1.0}, {2.0, 4.0}, {4.0, 16.0}})}) {
    const auto lad = log_ladder(1e-3, 1e8, 60);
    double prev = 0.0;
    for (double t : lad) {
      CHECK(f.eval(t) >= prev);
      prev = f.eval(t);
    }
    CHECK(f.eval(1e8) > 1e7);
    for (std::size_t i = 0; i < lad.size(); i += 3)
      for (std::size_t j = i; j < lad.size(); j += 5) {
        const double s = lad[i], t = lad[j];
        CHECK(f.eval(0.5 * (s + t)) <= 0.5 * (f.eval(s) + f.eval(t)) * (1 + 1e-12));
      }
  }
}

TEST_CASE("growth pair primitives") {
  for (double p : {1.5, 2.0, 3.0}) {
    const GrowthFunction b = GrowthFunction::power(p - 1.0);
    const YoungFunction psi = b.primitive();
    for (double t : {0.1, 1.0, 3.0, 10.0}) {
      CHECK(rel_close(psi.eval(t), std::pow(t, p) / p, 1e-12));
      CHECK(rel_close(b.integral_quadrature(t), std::pow(t, p) / p, 1e-8));
    }
  }
  CHECK(GrowthFunction::power(2).eval(0.0) == 0.0);
  CHECK(GrowthFunction::power(2).eval(1e-12) <= 1e-20);
  CHECK_THROWS(GrowthFunction::power(0.0));
}

TEST_CASE("elasticity diagnostic") {
  CHECK(elasticity(YoungFunction::power(3), 2.0) == doctest::Approx(3.0));
  CHECK(elasticity(YoungFunction(), 5.0) == doctest::Approx(1.0));
}

TEST_CASE("json round trip and rejection") {
  const YoungFunction f = YoungFunction::from_json(Json{{"family", "plog"}, {"p", 2}, {"q", 1}});
  CHECK(YoungFunction::from_json(f.to_json()).eval(3.0) == doctest::Approx(f.eval(3.0)));
  CHECK_THROWS_AS(YoungFunction::from_json(Json{{"family", "power"}, {"pp", 2}}), Error);
  CHECK_THROWS_AS(YoungFunction::from_json(Json{{"family", "exp"}}), Error);
  CHECK_THROWS_AS(YoungFunction::power(0.5), Error);
}
