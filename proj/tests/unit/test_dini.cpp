// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "rhomax/core/dini.hpp"
#include "rhomax/core/error.hpp"
#include "test_util.hpp"

using namespace rhomax;
using rhomax::testing::rel_close;

TEST_CASE("dini integral closed forms") {
  // a = s^{p-1}, eta = t^r (r < p): I(t) = t^{p-1} r / (p - r)
  CHECK(rel_close(dini_integral(GrowthFunction::power(2), YoungFunction(), 2.0).value, 2.0, 1e-6));
  for (double p : {1.5, 2.0, 3.0})
    for (double r : {1.0, 1.2}) {
      if (r >= p) continue;
      for (double t : {0.01, 1.0, 50.0}) {
        const DiniValue v = dini_integral(GrowthFunction::power(p - 1), YoungFunction::power(r), t);
        CHECK_FALSE(v.diverges);
        CHECK(rel_close(v.value, std::pow(t, p - 1) * r / (p - r), 1e-6));
      }
    }
  CHECK(dini_integral(GrowthFunction::power(1), YoungFunction::power(2), 1.0).diverges);
  CHECK(dini_integral(GrowthFunction::zero(), YoungFunction::power(2), 1.0).value == 0.0);
  CHECK_THROWS_AS(dini_integral(GrowthFunction::power(1), YoungFunction(), 0.0), Error);
}

TEST_CASE("dini condition check") {
  const DiniReport p3 = dini_condition_check({GrowthFunction::power(2), GrowthFunction::power(2)}, YoungFunction());
  CHECK(p3.pass);
  CHECK(std::abs(p3.C - std::cbrt(0.5)) <= 0.05 * std::cbrt(0.5));
  CHECK(p3.C >= std::cbrt(0.5) * (1 - 1e-9));  // upper end of the bracket is admissible
  const DiniReport p2 = dini_condition_check({GrowthFunction::power(1), GrowthFunction::power(1)}, YoungFunction());
  CHECK(p2.pass);
  CHECK(std::abs(p2.C - 1.0) <= 0.05);
  for (double p : {2.0, 3.0}) {
    const DiniReport f =
        dini_condition_check({GrowthFunction::power(p - 1), GrowthFunction::power(p - 1)}, YoungFunction::power(p));
    CHECK_FALSE(f.pass);
    CHECK(f.to_json().at("verdict") == "FAIL");
  }
  // I(t) nondecreasing in t
  for (std::size_t i = 1; i < p3.I.size(); ++i) CHECK(p3.I[i] >= p3.I[i - 1]);
}

TEST_CASE("B_p reduction") {
  CHECK(rel_close(bp_reduction(YoungFunction(), 3.0).value, 0.5, 1e-8));
  CHECK(bp_reduction(YoungFunction::power(2), 2.0).diverges);
  CHECK(rel_close(bp_reduction(YoungFunction::power(1.5), 2.0).value, 3.0, 1e-6));
  for (double p : {1.5, 2.0, 3.0})
    for (double r : {1.0, 1.5, p}) {
      const bool finite = !bp_reduction(YoungFunction::power(r), p).diverges;
      const DiniReport rep = dini_condition_check({GrowthFunction::power(p - 1), GrowthFunction::power(p - 1)},
                                                  YoungFunction::power(r));
      CHECK(finite == rep.pass);
    }
}

TEST_CASE("dini options") {
  const DiniOptions o = DiniOptions::from_json(Json{{"t_points", 8}, {"C_hi", 1024.0}});
  CHECK(o.t_points == 8);
  CHECK(o.C_hi == 1024.0);
  CHECK_THROWS_AS(DiniOptions::from_json(Json{{"t_count", 8}}), Error);
  CHECK_THROWS_AS(DiniOptions::from_json(Json{{"C_lo", 4.0}, {"C_hi", 2.0}}), Error);
}
