// SPDX-License-Identifier: Apache-2.0
// Closed-form oracle suite behind the `selftest` subcommand. Each check is cheap.
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "rhomax/core/dyadic.hpp"
#include "rhomax/core/error.hpp"
#include "rhomax/core/functions.hpp"
#include "rhomax/core/maximal.hpp"
#include "rhomax/core/orlicz.hpp"
#include "rhomax/core/runner.hpp"

namespace rhomax {

namespace {

struct Check {
  std::string name;
  double value = 0.0, expected = 0.0, tol = 0.0;
  bool pass = false;
  std::string note;
};

Check near(const std::string& name, double value, double expected, double rel_tol) {
  Check c{name, value, expected, rel_tol, false, {}};
  c.pass = std::isfinite(value) && std::abs(value - expected) <= rel_tol * std::max(std::abs(expected), 1e-300);
  return c;
}

Check truth(const std::string& name, bool ok, double value = 0.0, const std::string& note = {}) {
  Check c{name, value, 0.0, 0.0, ok, note};
  return c;
}

}  // namespace

RunResult run_selftest() {
  std::vector<Check> checks;
  auto guarded = [&](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      checks.push_back(truth(name, false, 0.0, e.what()));
    }
  };

  guarded("young.inverse_power2", [&] { checks.push_back(near("young.inverse_power2", YoungFunction::power(2).inverse(9.0), 3.0, 1e-12)); });
  guarded("young.conjugate_power2", [&] {
    // (t^2)~ = t^2/4
    checks.push_back(near("young.conjugate_power2", YoungFunction::power(2).complementary().eval(2.0), 1.0, 1e-8));
  });
  guarded("young.duality_sandwich", [&] {
    bool ok = true;
    for (const auto& Phi : {YoungFunction::power(2), YoungFunction::power(3), YoungFunction::plog(2, 1)}) {
      const YoungFunction dual = Phi.complementary();
      for (double t : log_ladder(1e-3, 1e3, 64)) {
        const double v = Phi.inverse(t) * dual.inverse(t);
        ok = ok && v >= t / 2.0 * (1 - 1e-9) && v <= 2.0 * t * (1 + 1e-9);
      }
    }
    checks.push_back(truth("young.duality_sandwich", ok));
  });
  guarded("young.doubling_power2", [&] {
    checks.push_back(near("young.doubling_power2", doubling_constant(YoungFunction::power(2), log_ladder(1e-3, 1e3, 64)), 4.0, 1e-9));
  });

  guarded("orlicz.lp_average", [&] {
    // f = 1 on half of Q, 0 elsewhere: L^p average is 2^{-1/p}.
    const Domain dom(1, 1.0, 64);
    std::vector<double> v(dom.size(), 0.0);
    for (std::size_t i = 0; i < dom.size() / 2; ++i) v[i] = 1.0;
    const SampledFunction f(dom, v);
    const Cube Q{make_point({0.0}), 1.0};
    for (double p : {1.5, 2.0, 3.0})
      checks.push_back(near("orlicz.lp_average_p" + std::to_string(p).substr(0, 3),
                            luxemburg_average(f, Q, YoungFunction::power(p)), std::pow(0.5, 1.0 / p), 1e-8));
  });

  guarded("dini.p3_C", [&] {
    const GrowthPair g{GrowthFunction::power(2), GrowthFunction::power(2)};
    const DiniReport r = dini_condition_check(g, YoungFunction());
    checks.push_back(near("dini.p3_C", r.pass ? r.C : NAN, std::cbrt(0.5), 0.05));
  });
  guarded("dini.p2_C", [&] {
    const GrowthPair g{GrowthFunction::power(1), GrowthFunction::power(1)};
    const DiniReport r = dini_condition_check(g, YoungFunction());
    checks.push_back(near("dini.p2_C", r.pass ? r.C : NAN, 1.0, 0.05));
  });
  guarded("dini.eta_tp_fails", [&] {
    const GrowthPair g{GrowthFunction::power(2), GrowthFunction::power(2)};
    const DiniReport r = dini_condition_check(g, YoungFunction::power(3));
    checks.push_back(truth("dini.eta_tp_fails", !r.pass, 0.0, r.reason));
  });

  guarded("maximal.constant_one", [&] {
    const Domain dom(1, 2.0, 64);
    const SampledFunction one(dom, std::vector<double>(dom.size(), 1.0));
    const SampledFunction M = hl_maximal(one, CriticalRadius::constant(1.0), 0.0, CubeFamily::standard(dom));
    double worst = 0.0;
    for (double x : M.values()) worst = std::max(worst, std::abs(x - 1.0));
    checks.push_back(truth("maximal.constant_one", worst <= 1e-12, worst));
  });
  guarded("maximal.sweep_vs_naive", [&] {
    const Domain dom(1, 2.0, 32);
    const SampledFunction f = make_function(dom, random_battery(1, 2.0, 1, 7).front());
    const CubeFamily fam = CubeFamily::standard(dom);
    const CriticalRadius rho = CriticalRadius::inverse_power(1.0);
    const CubeValue val = [&](std::size_t, const Cube& q) { return f.abs().average(q) * damping(q.radius(), rho(q.center), 1.0); };
    const SampledFunction a = sweep_max(dom, fam, val), b = sweep_max_naive(dom, fam, val);
    double worst = 0.0;
    for (std::size_t i = 0; i < dom.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    checks.push_back(truth("maximal.sweep_vs_naive", worst <= 1e-12, worst));
  });

  guarded("weights.ap_constant_one", [&] {
    const Domain dom(1, 2.0, 64);
    const SampledFunction one(dom, std::vector<double>(dom.size(), 1.0));
    const WeightReport r = ap_rho_constant(one, 2.0, 0.0, CriticalRadius::inverse_power(1.0),
                                           CubeFamily::standard(dom, BoundaryPolicy::InsideOnly));
    checks.push_back(truth("weights.ap_constant_one", r.constant == 1.0, r.constant));
  });

  guarded("geometry.find_containing_dyadic", [&] {
    bool ok = true;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-4.0, 4.0), S(0.01, 2.0);
    for (int d = 1; d <= 2; ++d) {
      const ShiftedDyadicGrids g(d);
      for (int i = 0; i < 500; ++i) {
        Cube q;
        q.center.dim = d;
        for (int k = 0; k < d; ++k) q.center[k] = U(rng);
        q.half_side = S(rng);
        const DyadicHit hit = find_containing_dyadic(g, q);
        ok = ok && hit.grid >= 0 && hit.cube.contains(q, 1e-12) && hit.cube.side() <= 3.0 * q.side() * (1 + 1e-12);
      }
    }
    checks.push_back(truth("geometry.find_containing_dyadic", ok));
  });
  guarded("geometry.cz_equals_bruteforce", [&] {
    const Domain dom(1, 1.0, 64);
    const SampledFunction f = make_function(dom, Json{{"kind", "spike"}, {"center", {0.1}}, {"alpha", 0.5}, {"radius", 0.5}});
    const Cube R{make_point({0.0}), 1.0};
    const double lambda = 2.0 * f.abs().average(R) + 1e-9;
    const auto cubes = cz_decomposition(f, R, lambda, YoungFunction());
    checks.push_back(truth("geometry.cz_equals_bruteforce",
                           cover_mask(dom, cubes) == dyadic_superlevel_bruteforce(f, R, lambda, YoungFunction())));
  });

  guarded("rho.validate_2d", [&] {
    const auto pairs = random_pairs(2, 1000, 10.0, 0);
    const ValidationReport r = validate_pairs(CriticalRadius::inverse_power(1.0), pairs, 1.0, 1.0);
    checks.push_back(truth("rho.validate_2d", r.ok, static_cast<double>(r.violations)));
  });
  guarded("rho.covering_complete", [&] {
    const CriticalCovering cov = critical_covering(CriticalRadius::inverse_power(1.0), Domain(1, 8.0, 128));
    checks.push_back(near("rho.covering_complete", covering_fraction(cov), 1.0, 0.0));
  });

  guarded("harness.sufficient_sigma", [&] {
    checks.push_back(near("harness.sufficient_sigma", sufficient_sigma(0.0, 1.0, 1.0, 0.25), 4.0, 1e-6));
  });
  guarded("harness.far_weight_threshold", [&] {
    checks.push_back(near("harness.far_weight_threshold", far_weight_threshold(4.0, 1.0, 1.0), 10.0, 1e-12));
  });

  RunResult out;
  bool all = true;
  Json arr = Json::array();
  std::ostringstream os;
  os << std::setprecision(17) << "check,value,expected,tolerance,pass\n";
  for (const auto& c : checks) {
    all = all && c.pass;
    Json j{{"name", c.name}, {"pass", c.pass}, {"value", c.value}};
    if (c.tol > 0.0 || c.expected != 0.0) {
      j["expected"] = c.expected;
      j["tolerance"] = c.tol;
    }
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(j);
    os << c.name << ',' << c.value << ',' << c.expected << ',' << c.tol << ',' << (c.pass ? 1 : 0) << '\n';
  }
  out.verdict = all ? "PASS" : "FAIL";
  out.failed = !all;
  out.report = Json{{"checks", arr}, {"verdict", out.verdict}};
  out.csv = os.str();
  return out;
}

}  // namespace rhomax
