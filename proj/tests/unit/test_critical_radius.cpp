// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "rhomax/core/critical_radius.hpp"
#include "rhomax/core/error.hpp"

using namespace rhomax;

TEST_CASE("rho evaluation") {
  CHECK(CriticalRadius::constant(1.0)(make_point({7.0})) == 1.0);
  CHECK(CriticalRadius::inverse_power(1.0)(make_point({0.0})) == 1.0);
  CHECK(CriticalRadius::inverse_power(1.0)(make_point({3.0})) == doctest::Approx(0.25));
  CHECK(CriticalRadius::inverse_power(1.0)(make_point({0.0, -3.0})) == doctest::Approx(0.25));
}

TEST_CASE("validate") {
  const auto pts = random_points(2, 60, 10.0, 3);
  CHECK(validate(CriticalRadius::constant(1.0), pts, 1.0, 1.0).ok);
  const auto rho = CriticalRadius::inverse_power(1.0);
  // x = 3, y = 0 breaks the upper side with (1,1): slack rho(3) sqrt(13) / rho(0) = sqrt(13)/4
  const auto far = validate(rho, {make_point({0.0}), make_point({3.0})}, 1.0, 1.0);
  CHECK_FALSE(far.ok);
  CHECK(far.worst_side == "upper");
  CHECK(far.worst_slack == doctest::Approx(std::sqrt(13.0) / 4.0).epsilon(1e-9));
  // 1D counterexample for (1,1): x = 1, y = 0 gives rho(y)/upper = 2/sqrt(3)
  const auto bad = validate(rho, {make_point({1.0}), make_point({0.0})}, 1.0, 1.0);
  CHECK_FALSE(bad.ok);
  CHECK(bad.worst_slack == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
  // 2D sample of 10^3 pairs passes with (1,1)
  CHECK(validate_pairs(rho, random_pairs(2, 1000, 10.0, 0), 1.0, 1.0).ok);
  // documented constants pass on 10^3 pairs in every dimension
  for (int d = 1; d <= 3; ++d) CHECK(validate_pairs(rho, random_pairs(d, 1000, 10.0, 1), rho.C0(), rho.N0()).ok);
}

TEST_CASE("constant search finds the smallest feasible C0") {
  const auto rho = CriticalRadius::inverse_power(1.0);
  const auto pairs = random_pairs(1, 1000, 10.0, 5);
  std::vector<std::pair<Point, Point>> with_bad = pairs;
  with_bad.emplace_back(make_point({1.0}), make_point({0.0}));
  const ConstantSearch cs = search_constants(rho, with_bad, {1.0, 1.1, 1.16, 1.5, 2.0}, {1.0});
  CHECK(cs.found);
  CHECK(cs.C0 == doctest::Approx(1.16));
  // C0 is scanned first: N0 = 2 already admits C0 = 1.1 (0.5 * 1.1 * 3^(2/3) > 1)
  const ConstantSearch cs2 = search_constants(rho, with_bad, {1.0, 1.1, 1.16}, {1.0, 2.0});
  CHECK(cs2.C0 == doctest::Approx(1.1));
  CHECK(cs2.N0 == doctest::Approx(2.0));
}

TEST_CASE("critical covering") {
  const Domain dom(1, 4.0, 64);
  const auto c1 = critical_covering(CriticalRadius::constant(1.0), dom);
  CHECK(covering_fraction(c1) == 1.0);
  for (std::size_t i = 1; i < c1.centers.size(); ++i) CHECK(c1.centers[i][0] - c1.centers[i - 1][0] > 1.0);
  CHECK(critical_covering(CriticalRadius::constant(8.0), dom).centers.size() == 1);
  const auto c2 = critical_covering(CriticalRadius::inverse_power(1.0), dom);
  CHECK(covering_fraction(c2) == 1.0);
  CHECK(c2.radii.front() < 0.5);
  // deterministic
  CHECK(critical_covering(CriticalRadius::inverse_power(1.0), dom).center_index == c2.center_index);
  CHECK(covering_fraction(critical_covering(CriticalRadius::inverse_power(1.0), Domain(2, 4.0, 32))) == 1.0);
}

TEST_CASE("overlap profile") {
  const Domain dom(1, 4.0, 64);
  const auto single = overlap_profile(critical_covering(CriticalRadius::constant(8.0), dom), {1.0, 2.0, 4.0});
  for (int c : single.counts) CHECK(c == 1);
  const auto one = overlap_profile(critical_covering(CriticalRadius::constant(1.0), dom), {1.0});
  CHECK(one.counts[0] <= 2);
  const std::vector<double> sig{1.0, 1.5, 2.0, 3.0, 4.0};
  const auto prof = overlap_profile(critical_covering(CriticalRadius::inverse_power(1.0), Domain(1, 8.0, 256)), sig);
  for (std::size_t i = 1; i < prof.counts.size(); ++i) CHECK(prof.counts[i] >= prof.counts[i - 1]);
  CHECK(std::isfinite(prof.N1));
  for (std::size_t i = 0; i < sig.size(); ++i) CHECK(prof.counts[i] <= prof.C_fit * std::pow(sig[i], prof.N1 + 0.5) + 1e-9);
}

TEST_CASE("enlarged critical cube") {
  CHECK(enlargement_constant(1, 1.0, 1.0) == doctest::Approx(9.0));
  const auto rho1 = CriticalRadius::constant(1.0);
  CHECK(enlarged_critical_cube(rho1, make_point({0.0})).radius() == doctest::Approx(9.0));
  // subcritical cubes meeting Q_j lie inside R_j
  const auto rho = CriticalRadius::inverse_power(1.0, 1.16, 1.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-6.0, 6.0), V(0.0, 1.0);
  int tested = 0;
  while (tested < 1000) {
    const Point xj = make_point({U(rng)});
    const Cube Qj = cube_from_radius(xj, rho(xj));
    Point c = xj;
    c[0] += (2.0 * V(rng) - 1.0) * 2.0 * Qj.half_side;
    const double r = V(rng) * rho(c);
    const Cube q = cube_from_radius(c, r);
    if (r <= 0.0 || !q.intersects(Qj)) continue;
    ++tested;
    CHECK(enlarged_critical_cube(rho, xj).contains(q, 1e-12));
  }
}

TEST_CASE("S_k bounds") {
  const auto rho1 = CriticalRadius::constant(1.0);
  const Cube q1 = cube_from_radius(make_point({0.5}), 3.0);  // r in (1, 4] -> k = 1
  const SkReport r1 = sk_bounds_check(rho1, make_point({0.0}), q1, 1);
  CHECK(r1.b == 4.0);
  CHECK(r1.C1 == 4.0);
  CHECK(r1.d == 16.0);
  CHECK(r1.C2 == doctest::Approx(16.0));
  CHECK(r1.ok());
  CHECK_THROWS_AS(sk_bounds_check(rho1, make_point({0.0}), q1, 3), Error);

  const auto rho = CriticalRadius::inverse_power(1.0, 1.16, 1.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-5.0, 5.0), V(0.0, 1.0);
  int tested = 0;
  while (tested < 500) {
    const Point xj = make_point({U(rng)});
    const Cube Qj = cube_from_radius(xj, rho(xj));
    const int k = 1 + static_cast<int>(V(rng) * 3);
    Point c = xj;
    c[0] += (2.0 * V(rng) - 1.0) * Qj.half_side;
    const double b = std::pow(4.0, rho.N0());
    const double r = rho(c) * std::pow(b, k - 1) * (1.0 + (b - 1.0) * (0.01 + 0.98 * V(rng)));
    const Cube q = cube_from_radius(c, r);
    if (!in_sk(rho, q, k)) continue;
    ++tested;
    CHECK(sk_bounds_check(rho, xj, q, k).ok());
  }
}

TEST_CASE("rho json") {
  CHECK(CriticalRadius::from_json(Json{{"family", "inverse_power"}, {"c", 2.0}})(make_point({1.0})) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(CriticalRadius::from_json(Json{{"family", "inverse_power"}, {"cc", 2.0}}), Error);
  CHECK_THROWS_AS(CriticalRadius::constant(-1.0), Error);
}
