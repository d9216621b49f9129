// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "rhomax/core/error.hpp"
#include "rhomax/core/functions.hpp"
#include "rhomax/core/weights.hpp"
#include "test_util.hpp"

using namespace rhomax;
using rhomax::testing::sample;

namespace {

CubeFamily inside(const Domain& dom) { return CubeFamily::standard(dom, BoundaryPolicy::InsideOnly); }

Json power_weight(double delta) { return Json{{"family", "power"}, {"delta", delta}}; }

}  // namespace

TEST_CASE("A_p constant of the unit weight") {
  const Domain dom(1, 4.0, 64);
  const SampledFunction one = rhomax::testing::constant(dom, 1.0);
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  CHECK(ap_rho_constant(one, 2.0, 0.0, rho, inside(dom)).constant == 1.0);
  CHECK(a1_rho_constant(one, 0.0, rho, inside(dom)).constant == 1.0);
  const WeightReport t = ap_rho_constant(one, 2.0, 1.0, rho, inside(dom));
  CHECK(t.constant <= 1.0);
  const double hmin = inside(dom).half_sides.front();
  CHECK(t.constant == doctest::Approx(std::pow(1.0 + hmin / rho(make_point({0.5 * dom.h()})), -1.0)).epsilon(1e-9));
  CHECK(a1_pointwise_check(one, 0.0, rho, CubeFamily::standard(dom)).C <= 1.0 + 1e-14);
  CHECK_THROWS_AS(ap_rho_constant(rhomax::testing::constant(dom, 0.0), 2.0, 0.0, rho, inside(dom)), Error);
}

TEST_CASE("weight constant properties") {
  const Domain dom(1, 4.0, 64);
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> D(-0.8, 1.5);
  for (int k = 0; k < 10; ++k) {
    const SampledFunction w = make_weight(dom, power_weight(D(rng)));
    const double c1 = ap_rho_constant(w, 1.5, 0.0, rho, inside(dom)).constant;
    const double c2 = ap_rho_constant(w, 3.0, 0.0, rho, inside(dom)).constant;
    CHECK(c1 >= 1.0 - 1e-9);
    CHECK(c2 >= 1.0 - 1e-9);
    CHECK(c2 <= c1 * (1 + 1e-12));
    CHECK(ap_rho_constant(w.scaled(7.0), 1.5, 0.0, rho, inside(dom)).constant == doctest::Approx(c1).epsilon(1e-12));
    double prev = 1e300;
    for (double th : {0.0, 1.0, 2.0, 4.0}) {
      const double c = ap_rho_constant(w, 2.0, th, rho, inside(dom)).constant;
      CHECK(c <= prev);
      prev = c;
      const double a = a1_rho_constant(w, th, rho, inside(dom)).constant;
      CHECK(a >= 0.0);
    }
  }
}

TEST_CASE("power weight: theta = 0 grows with L, theta = 4 stays finite") {
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  std::vector<double> a2, a1;
  for (double L : {4.0, 8.0, 16.0}) {
    const Domain dom(1, L, static_cast<int>(16 * L));
    const SampledFunction w = make_weight(dom, power_weight(1.0));
    a2.push_back(ap_rho_constant(w, 2.0, 0.0, rho, inside(dom)).constant);
    a1.push_back(a1_rho_constant(w, 0.0, rho, inside(dom)).constant);
  }
  // delta = 1 is the A_2 endpoint: the constant grows only like sqrt(log L)
  CHECK(a2[1] > a2[0]);
  CHECK(a2[2] > a2[1]);
  CHECK(a1[2] > a1[0] * 1.5);
  const FinitenessProbe p = probe_weight_constant(power_weight(1.0), Domain(1, 8.0, 128), 2.0, 2.0, rho, {});
  CHECK(p.finite);
  const FinitenessProbe q = probe_weight_constant(power_weight(1.0), Domain(1, 8.0, 128), 1.0, 4.0, rho, {});
  CHECK(q.finite);
}

TEST_CASE("A_1 pointwise characterisation") {
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  std::vector<double> C;
  // the smallest cube is damped by (1 + h/2)^-4, so stability needs fine grids
  for (int N : {1024, 2048}) {
    const Domain dom(1, 8.0, N);
    C.push_back(a1_pointwise_check(make_weight(dom, power_weight(1.0)), 4.0, rho, CubeFamily::standard(dom)).C);
  }
  CHECK(std::isfinite(C[0]));
  CHECK(std::abs(C[1] - C[0]) <= 0.10 * C[0]);
  std::vector<double> G;
  for (double L : {4.0, 16.0}) {
    const Domain dom(1, L, static_cast<int>(16 * L));
    G.push_back(a1_pointwise_check(make_weight(dom, power_weight(1.0)), 0.0, rho, CubeFamily::standard(dom)).C);
  }
  CHECK(G[1] > G[0]);
}

TEST_CASE("openness probe") {
  const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  const Domain dom(1, 4.0, 64);
  const std::vector<double> eps{0.5, 0.25, 0.1, 0.05};
  const OpennessReport one =
      openness_probe(Json{{"family", "constant"}, {"c", 1.0}}, dom, 2.0, rho, eps, {0.0, 1.0, 2.0});
  CHECK(one.found);
  CHECK(one.epsilon == 0.5);
  CHECK(one.theta == 0.0);
  const OpennessReport pw = openness_probe(power_weight(0.5), dom, 2.0, rho, eps, {0.0, 1.0, 2.0, 4.0});
  CHECK(pw.found);
  CHECK(pw.epsilon > 0.0);
  const OpennessReport again = openness_probe(power_weight(0.5), dom, 2.0, rho, eps, {0.0, 1.0, 2.0, 4.0});
  CHECK(again.to_json() == pw.to_json());
}
