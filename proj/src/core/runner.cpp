// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/runner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "rhomax/core/error.hpp"
#include "rhomax/core/functions.hpp"
#include "rhomax/core/maximal.hpp"

namespace rhomax {

namespace {

std::ostringstream csv_stream() {
  std::ostringstream os;
  os << std::setprecision(17);
  return os;
}

RunResult from_ratio(const RatioReport& r) {
  RunResult out;
  out.report = r.to_json();
  out.csv = r.to_csv(true);
  out.verdict = to_string(r.verdict);
  out.failed = r.verdict == Verdict::Fail;
  return out;
}

RunResult dini_check(const RunConfig& rc) {
  const ExperimentConfig& e = rc.exp;
  const DiniReport rep = dini_condition_check(e.growth, e.eta, e.dini);
  RunResult out;
  out.report = rep.to_json();
  out.report["a"] = e.growth.a.to_json();
  out.report["b"] = e.growth.b.to_json();
  out.report["eta"] = e.eta.to_json();
  auto os = csv_stream();
  os << "t,I,converged\n";
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    os << rep.t[i] << ',';
    if (rep.converged[i]) os << rep.I[i];
    else os << "DIVERGES";
    os << ',' << (rep.converged[i] ? 1 : 0) << '\n';
  }
  out.csv = os.str();
  out.verdict = rep.pass ? "PASS" : "FAIL";
  out.failed = !rep.pass;
  return out;
}

RunResult maximal_eval(const RunConfig& rc) {
  const ExperimentConfig& e = rc.exp;
  const Domain& dom = e.domain;
  const auto specs = battery_specs(e);
  require(!specs.empty(), ErrorKind::InvalidArgument, "maximal-eval needs a function (functions[0])");
  const SampledFunction f = make_function(dom, specs.front());
  const double sigma = e.sigma >= 0.0 ? e.sigma : 0.0;
  const CubeFamily fam = CubeFamily::standard(dom);
  SampledFunction Mf;
  if (rc.op == "hl") {
    Mf = hl_maximal(f, e.rho, sigma, fam);
  } else if (rc.op == "orlicz") {
    Mf = orlicz_maximal(f, e.eta, e.rho, sigma, fam);
  } else if (rc.op == "centered") {
    Mf = centered_ball_maximal(f, e.eta, sigma, e.rho, standard_radii(dom));
  } else {
    Point origin;
    origin.dim = dom.dim();
    Mf = localized_maximal(f, e.eta, Cube{origin, dom.half_width()}, fam);
  }
  RunResult out;
  out.report = Json{{"operator", rc.op},     {"sigma", sigma},       {"domain", dom.to_json()},
                    {"rho", e.rho.to_json()}, {"eta", e.eta.to_json()}, {"function", specs.front()},
                    {"max", Mf.max_abs()},   {"integral_f", f.total()}};
  if (rc.include_values) out.report["values"] = Mf.values();
  auto os = csv_stream();
  os << "index";
  for (int i = 0; i < dom.dim(); ++i) os << ",x" << i;
  os << ",f,Mf\n";
  for (std::size_t k = 0; k < dom.size(); ++k) {
    const Point p = dom.point(k);
    os << k;
    for (int i = 0; i < dom.dim(); ++i) os << ',' << p[i];
    os << ',' << f[k] << ',' << Mf[k] << '\n';
  }
  out.csv = os.str();
  out.verdict = "OK";
  out.report["verdict"] = out.verdict;
  return out;
}

RunResult weights_estimate(const RunConfig& rc) {
  const ExperimentConfig& e = rc.exp;
  require(!e.weights.empty(), ErrorKind::InvalidArgument, "weights-estimate needs at least one weight");
  const double p = e.p;
  RunResult out;
  out.report = Json{{"p", p}, {"theta", e.theta}, {"rho", e.rho.to_json()}, {"weights", Json::array()}};
  auto os = csv_stream();
  os << "weight,p,theta,constant,at_2N,at_2L,refine_change,growth,finite\n";
  bool all_finite = true;
  const CubeFamily fam = CubeFamily::standard(e.domain, BoundaryPolicy::InsideOnly);
  for (std::size_t j = 0; j < e.weights.size(); ++j) {
    const SampledFunction w = make_weight(e.domain, e.weights[j]);
    const WeightReport wr =
        p == 1.0 ? a1_rho_constant(w, e.theta, e.rho, fam) : ap_rho_constant(w, p, e.theta, e.rho, fam);
    const FinitenessProbe fp = probe_weight_constant(e.weights[j], e.domain, p, e.theta, e.rho, e.finiteness);
    all_finite = all_finite && fp.finite;
    Json wj{{"weight", e.weights[j]}, {"constant", wr.to_json()}, {"finiteness", fp.to_json()}};
    if (p == 1.0) wj["pointwise"] = a1_pointwise_check(w, e.theta, e.rho, CubeFamily::standard(e.domain)).to_json();
    out.report["weights"].push_back(wj);
    os << j << ',' << p << ',' << e.theta << ',' << wr.constant << ',' << fp.at_2N << ',' << fp.at_2L << ','
       << fp.refine_change << ',' << fp.growth << ',' << (fp.finite ? 1 : 0) << '\n';
  }
  out.csv = os.str();
  out.verdict = all_finite ? "FINITE" : "DIVERGENT";
  out.report["verdict"] = out.verdict;
  return out;
}

RunResult covering(const RunConfig& rc) {
  const ExperimentConfig& e = rc.exp;
  const CriticalCovering cov = critical_covering(e.rho, e.domain);
  const double frac = covering_fraction(cov);
  const OverlapProfile prof = overlap_profile(cov, e.sigmas);
  bool monotone = true;
  for (std::size_t i = 1; i < prof.counts.size(); ++i) monotone = monotone && prof.counts[i] >= prof.counts[i - 1];
  const bool pass = frac == 1.0 && monotone && std::isfinite(prof.N1);
  RunResult out;
  out.report = Json{{"centers", cov.centers.size()},
                    {"covered_fraction", frac},
                    {"overlap_profile", prof.to_json()},
                    {"counts_nondecreasing", monotone},
                    {"enlargement_constant", enlargement_constant(e.domain.dim(), e.rho.C0(), e.rho.N0())},
                    {"covering", cov.to_json()}};
  auto os = csv_stream();
  os << "sigma,max_overlap\n";
  for (std::size_t i = 0; i < prof.sigmas.size(); ++i) os << prof.sigmas[i] << ',' << prof.counts[i] << '\n';
  out.csv = os.str();
  out.verdict = pass ? "PASS" : "FAIL";
  out.report["verdict"] = out.verdict;
  out.failed = !pass;
  return out;
}

RunResult validate_rho(const RunConfig& rc) {
  const ExperimentConfig& e = rc.exp;
  const auto pairs = random_pairs(e.domain.dim(), static_cast<std::size_t>(rc.pairs), e.domain.half_width(), e.seed);
  const ValidationReport vr = validate_pairs(e.rho, pairs, e.rho.C0(), e.rho.N0());
  RunResult out;
  out.report = Json{{"rho", e.rho.to_json()}, {"C0", e.rho.C0()}, {"N0", e.rho.N0()}, {"validation", vr.to_json()}};
  if (!rc.C0_lattice.empty() && !rc.N0_lattice.empty()) {
    const ConstantSearch cs = search_constants(e.rho, pairs, rc.C0_lattice, rc.N0_lattice);
    out.report["search"] = Json{{"found", cs.found}, {"C0", cs.C0}, {"N0", cs.N0}, {"report", cs.report.to_json()}};
  }
  auto os = csv_stream();
  os << "pairs,violations,worst_slack,C0,N0\n"
     << vr.pairs << ',' << vr.violations << ',' << vr.worst_slack << ',' << e.rho.C0() << ',' << e.rho.N0() << '\n';
  out.csv = os.str();
  out.verdict = vr.ok ? "PASS" : "FAIL";
  out.report["verdict"] = out.verdict;
  out.failed = !vr.ok;
  return out;
}

RunResult far_weight_cmd(const RunConfig& rc) {
  RunResult out;
  out.report = far_weight_experiment(rc.exp);
  auto os = csv_stream();
  os << "theta,sup_B0,sup_B0_2L,sup_B0_2N,growth,refine_change,finite\n";
  for (const auto& r : out.report.at("ladder"))
    os << r.at("theta").get<double>() << ',' << r.at("sup_B0").get<double>() << ','
       << r.at("sup_B0_2L").get<double>() << ',' << r.at("sup_B0_2N").get<double>() << ','
       << r.at("growth").get<double>() << ',' << r.at("refine_change").get<double>() << ','
       << (r.at("finite").get<bool>() ? 1 : 0) << '\n';
  out.csv = os.str();
  out.verdict = out.report.at("verdict").get<std::string>();
  out.failed = out.verdict == "FAIL";
  return out;
}

RunResult char_ball_cmd(const RunConfig& rc) {
  const ExperimentConfig& e = rc.exp;
  const Domain& dom = e.domain;
  const double sigma = e.sigma > 0.0 ? e.sigma : 1.0;
  const double r0 = e.rho(e.x0);
  std::vector<std::size_t> pts;
  for (double D : e.distances) {
    Point p = e.x0;
    p[0] += D * r0;
    require(std::abs(p[0]) < dom.half_width(), ErrorKind::InvalidArgument,
            "char-ball distance places a point outside the domain");
    pts.push_back(dom.nearest(p));
  }
  const CharBallReport rep = char_ball_bounds_check(dom, e.x0, sigma, e.rho, e.phi, pts);
  RunResult out;
  out.report = rep.to_json();
  out.report["sigma"] = sigma;
  out.report["phi"] = e.phi.to_json();
  auto os = csv_stream();
  os << "distance,value_identity,value_phi,lower_shape,upper_shape\n";
  for (std::size_t i = 0; i < rep.distances.size(); ++i)
    os << rep.distances[i] << ',' << rep.values_a[i] << ',' << rep.values[i] << ',' << rep.lower_shape[i] << ','
       << rep.upper_shape[i] << '\n';
  out.csv = os.str();
  out.verdict = rep.ok() ? "PASS" : "FAIL";
  out.report["verdict"] = out.verdict;
  out.failed = !rep.ok();
  return out;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{
      "dini-check", "maximal-eval", "weak-type",  "level-set", "strong-type", "modular-fs", "norm-fs",
      "two-weight", "sandwich",     "weights-estimate", "covering", "validate-rho", "far-weight", "char-ball",
      "selftest"};
  return names;
}

bool is_subcommand(const std::string& name) {
  const auto& s = subcommands();
  return std::find(s.begin(), s.end(), name) != s.end();
}

RunResult run_subcommand(const std::string& name, const RunConfig& cfg) {
  if (name == "dini-check") return dini_check(cfg);
  if (name == "maximal-eval") return maximal_eval(cfg);
  if (name == "weak-type") return from_ratio(weak_type_experiment(cfg.exp));
  if (name == "level-set") return from_ratio(level_set_experiment(cfg.exp));
  if (name == "strong-type") return from_ratio(strong_type_experiment(cfg.exp));
  if (name == "modular-fs") return from_ratio(modular_fs_experiment(cfg.exp));
  if (name == "norm-fs") return from_ratio(norm_fs_experiment(cfg.exp));
  if (name == "two-weight") return from_ratio(two_weight_experiment(cfg.exp));
  if (name == "sandwich") return from_ratio(sandwich_experiment(cfg.exp));
  if (name == "weights-estimate") return weights_estimate(cfg);
  if (name == "covering") return covering(cfg);
  if (name == "validate-rho") return validate_rho(cfg);
  if (name == "far-weight") return far_weight_cmd(cfg);
  if (name == "char-ball") return char_ball_cmd(cfg);
  if (name == "selftest") return run_selftest();
  fail(ErrorKind::InvalidArgument, "unknown subcommand '" + name + "'");
}

}  // namespace rhomax
