// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rhomax/core/error.hpp"
#include "rhomax/core/functions.hpp"
#include "rhomax/core/maximal.hpp"
#include "rhomax/core/orlicz.hpp"
#include "rhomax/core/parallel.hpp"

namespace rhomax {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::BoundedStable:
      return "BOUNDED-STABLE";
    case Verdict::Unstable:
      return "UNSTABLE";
    case Verdict::Fail:
      return "FAIL";
  }
  return "FAIL";
}

Json RatioReport::to_json() const {
  Json cs = Json::array();
  for (const auto& c : cases)
    cs.push_back(Json{{"case_id", c.case_id}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ratio", c.ratio}, {"N", c.N}});
  Json j{{"experiment", experiment}, {"N", N},         {"sup_ratio_N", sup_N}, {"sup_ratio_2N", sup_2N},
         {"drift", drift},           {"verdict", to_string(verdict)}, {"cases", cs}};
  j["diagnostics"] = extra;
  return j;
}

std::string RatioReport::to_csv(bool header) const {
  std::ostringstream os;
  os << std::setprecision(17);
  if (header) os << "experiment,case_id,lhs,rhs,ratio,N,verdict\n";
  const std::string v = to_string(verdict);
  for (const auto& c : cases)
    os << experiment << ',' << c.case_id << ',' << c.lhs << ',' << c.rhs << ',' << c.ratio << ',' << c.N << ','
       << v << '\n';
  return os.str();
}

Verdict classify_drift(double sup_N, double sup_2N, double tol, double* drift) {
  double d = 0.0;
  if (!std::isfinite(sup_N) || !std::isfinite(sup_2N)) {
    if (drift) *drift = std::numeric_limits<double>::infinity();
    return Verdict::Fail;
  }
  if (sup_N > 0.0)
    d = std::abs(sup_2N - sup_N) / sup_N;
  else if (sup_2N > 0.0)
    d = std::numeric_limits<double>::infinity();
  if (drift) *drift = d;
  return d <= tol ? Verdict::BoundedStable : Verdict::Unstable;
}

double sufficient_sigma(double theta, double N0, double N1, double c) {
  require(c > 0.0 && c < 1.0 / (N0 + 1.0), ErrorKind::InvalidArgument, "sufficient_sigma needs 0 < c < 1/(N0+1)");
  require(theta >= 0.0 && std::isfinite(N1), ErrorKind::InvalidArgument, "sufficient_sigma needs theta >= 0, finite N1");
  return std::max((theta + N1) / c, 2.0 * N0 / (1.0 - (N0 + 1.0) * c)) + 1e-6;
}

std::vector<Json> battery_specs(const ExperimentConfig& cfg) {
  if (!cfg.functions.empty()) return cfg.functions;
  const int d = cfg.domain.dim();
  const double L = cfg.domain.half_width();
  const std::size_t n = static_cast<std::size_t>(std::max(cfg.battery_size - (cfg.cell_spike ? 1 : 0), 0));
  std::vector<Json> out = random_battery(d, L, n, cfg.seed);
  if (cfg.cell_spike) {
    Json c = Json::array();
    for (int i = 0; i < d; ++i) c.push_back(0.1 * L);
    out.push_back(Json{{"kind", "cell_spike"}, {"center", c}, {"amplitude", 1.0}});
  }
  return out;
}

namespace {

double ratio_of(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  return rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
}

// Runs body(domain, N) at N and 2N, collects cases and classifies the drift of the sup ratio.
template <class Body>
RatioReport two_resolutions(const std::string& name, const ExperimentConfig& cfg, Body body) {
  RatioReport rep;
  rep.experiment = name;
  rep.N = cfg.domain.cells_per_axis();
  const Domain doms[2] = {cfg.domain, cfg.domain.refined()};
  double sup[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    std::vector<RatioCase> cs = body(doms[k], k);
    for (auto& c : cs) {
      c.N = doms[k].cells_per_axis();
      if (!(c.lhs >= 0.0) || !(c.rhs >= 0.0)) c.ratio = std::numeric_limits<double>::quiet_NaN();
      sup[k] = std::isnan(c.ratio) ? c.ratio : std::max(sup[k], c.ratio);
      rep.cases.push_back(c);
    }
  }
  rep.sup_N = sup[0];
  rep.sup_2N = sup[1];
  rep.verdict = classify_drift(sup[0], sup[1], cfg.stability_tol, &rep.drift);
  return rep;
}


double weak_sigma(const ExperimentConfig& cfg, Json& diag) {
  if (cfg.sigma >= 0.0) {
    diag["sigma_source"] = "config";
    return cfg.sigma;
  }
  double N1 = cfg.N1;
  if (N1 < 0.0) {
    const CriticalCovering cov = critical_covering(cfg.rho, cfg.domain);
    const OverlapProfile prof = overlap_profile(cov, cfg.sigmas);
    N1 = std::max(prof.N1, 0.0);
    diag["overlap_profile"] = prof.to_json();
  }
  diag["N1"] = N1;
  diag["sigma_source"] = "sufficient_sigma";
  return sufficient_sigma(cfg.theta, cfg.rho.N0(), N1, cfg.c);
}

}  // namespace

// ---------------------------------------------------------------------------

RatioReport weak_type_experiment(const ExperimentConfig& cfg) {
  const auto specs = battery_specs(cfg);
  require(!specs.empty(), ErrorKind::InvalidArgument, "weak-type experiment needs a non-empty battery");
  require(!cfg.weights.empty(), ErrorKind::InvalidArgument, "weak-type experiment needs at least one weight");
  require(!cfg.lambdas.empty(), ErrorKind::InvalidArgument, "weak-type experiment needs lambda factors");
  const double dc = doubling_constant(cfg.Phi, log_ladder(1e-6, 1e8, 200));
  require(std::isfinite(dc), ErrorKind::Precondition, "weak type needs a doubling Phi");
  Json diag;
  const double sigma = weak_sigma(cfg, diag);
  diag["sigma"] = sigma;
  diag["doubling_constant"] = dc;
  // lambda levels are fixed from the base resolution so both runs see the same levels.
  std::vector<double> peak(specs.size(), 0.0);
  RatioReport rep = two_resolutions("weak-type", cfg, [&](const Domain& dom, int level) {
    const CubeFamily fam = CubeFamily::standard(dom);
    std::vector<SampledFunction> Mw;
    std::vector<SampledFunction> W;
    for (const auto& ws : cfg.weights) {
      W.push_back(make_weight(dom, ws));
      Mw.push_back(hl_maximal(W.back(), cfg.rho, cfg.theta, fam));
    }
    std::vector<std::vector<RatioCase>> per(specs.size());
    parallel_for(specs.size(), [&](std::size_t i) {
      const SampledFunction f = make_function(dom, specs[i]);
      const SampledFunction Mf = orlicz_maximal(f, cfg.Phi, cfg.rho, sigma, fam);
      if (level == 0) peak[i] = Mf.max_abs();
      for (std::size_t j = 0; j < W.size(); ++j)
        for (std::size_t l = 0; l < cfg.lambdas.size(); ++l) {
          RatioCase c;
          c.case_id = "f" + std::to_string(i) + "_w" + std::to_string(j) + "_l" + std::to_string(l);
          const double lambda = cfg.lambdas[l] * peak[i];
          if (lambda > 0.0) {
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t x = 0; x < dom.size(); ++x) {
              if (Mf[x] > lambda) lhs += W[j][x];
              if (f[x] != 0.0) rhs += cfg.Phi.eval(std::abs(f[x]) / lambda) * Mw[j][x];
            }
            c.lhs = lhs * dom.cell_volume();
            c.rhs = rhs * dom.cell_volume();
          }
          c.ratio = ratio_of(c.lhs, c.rhs);
          per[i].push_back(c);
        }
    });
    std::vector<RatioCase> out;
    for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
    return out;
  });
  rep.extra = diag;
  return rep;
}

RatioReport level_set_experiment(const ExperimentConfig& cfg) {
  const auto specs = battery_specs(cfg);
  require(!specs.empty(), ErrorKind::InvalidArgument, "level-set experiment needs a non-empty battery");
  const YoungFunction phi = cfg.phi.normalized();
  const double t0 = 1.0 + 1e-6;
  Json diag;
  const double sigma = weak_sigma(cfg, diag);
  diag["sigma"] = sigma;
  diag["t0"] = t0;
  std::vector<double> peak(specs.size(), 0.0);
  RatioReport rep = two_resolutions("level-set", cfg, [&](const Domain& dom, int level) {
    const CubeFamily fam = CubeFamily::standard(dom);
    std::vector<SampledFunction> W, Mw;
    for (const auto& ws : cfg.weights) {
      W.push_back(make_weight(dom, ws));
      Mw.push_back(hl_maximal(W.back(), cfg.rho, cfg.theta, fam));
    }
    std::vector<std::vector<RatioCase>> per(specs.size());
    parallel_for(specs.size(), [&](std::size_t i) {
      const SampledFunction f = make_function(dom, specs[i]);
      const SampledFunction Mf = orlicz_maximal(f, phi, cfg.rho, sigma, fam);
      if (level == 0) peak[i] = Mf.max_abs();
      for (std::size_t j = 0; j < W.size(); ++j)
        for (std::size_t l = 0; l < cfg.lambdas.size(); ++l) {
          RatioCase c;
          c.case_id = "f" + std::to_string(i) + "_w" + std::to_string(j) + "_l" + std::to_string(l);
          const double lambda = cfg.lambdas[l] * peak[i];
          if (lambda > 0.0) {
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t x = 0; x < dom.size(); ++x) {
              if (Mf[x] > lambda) lhs += W[j][x];
              // int_{t0}^inf 1{v > s} phi'(s) ds = (phi(v) - phi(t0))_+ for v = 4 t0 |f| / lambda.
              const double v = 4.0 * t0 * std::abs(f[x]) / lambda;
              if (v > t0) rhs += Mw[j][x] * (phi.eval(v) - phi.eval(t0));
            }
            c.lhs = lhs * dom.cell_volume();
            c.rhs = rhs * dom.cell_volume();
          }
          c.ratio = ratio_of(c.lhs, c.rhs);
          per[i].push_back(c);
        }
    });
    std::vector<RatioCase> out;
    for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
    return out;
  });
  rep.extra = diag;
  return rep;
}

RatioReport strong_type_experiment(const ExperimentConfig& cfg) {
  require(cfg.p > 1.0 && cfg.q >= 0.0, ErrorKind::InvalidArgument, "strong type needs p > 1 and q >= 0");
  const auto specs = battery_specs(cfg);
  require(!specs.empty(), ErrorKind::InvalidArgument, "strong-type experiment needs a non-empty battery");
  const YoungFunction Phi = YoungFunction::plog(cfg.p, cfg.q);
  Json diag = Json::object();
  diag["weights"] = Json::array();
  // Per weight: a = p - eps from the openness probe, sigma = max(config sigma, theta'), theta = sigma a.
  struct Plan {
    double a, sigma, theta;
  };
  std::vector<Plan> plans;
  bool refused = false;
  for (const auto& ws : cfg.weights) {
    Json wd{{"weight", ws}};
    double a = cfg.power_a, th = 0.0;
    if (a <= 0.0) {
      const OpennessReport op = openness_probe(ws, cfg.domain, cfg.p, cfg.rho, cfg.eps_ladder, cfg.theta_sweep,
                                               cfg.finiteness);
      wd["openness"] = op.to_json();
      if (!op.found) {
        refused = true;
        a = cfg.p;
      } else {
        a = cfg.p - op.epsilon;
        th = op.theta;
      }
    }
    const double sigma = std::max(cfg.sigma, th);
    plans.push_back(Plan{a, sigma, sigma * a});
    wd["a"] = a;
    wd["sigma"] = sigma;
    wd["theta"] = sigma * a;
    diag["weights"].push_back(wd);
  }
  RatioReport rep = two_resolutions("strong-type", cfg, [&](const Domain& dom, int) {
    const CubeFamily fam = CubeFamily::standard(dom);
    std::vector<RatioCase> out;
    for (std::size_t j = 0; j < cfg.weights.size(); ++j) {
      const SampledFunction w = make_weight(dom, cfg.weights[j]);
      std::vector<RatioCase> per(specs.size());
      parallel_for(specs.size(), [&](std::size_t i) {
        RatioCase c;
        c.case_id = "f" + std::to_string(i) + "_w" + std::to_string(j);
        const SampledFunction f0 = make_function(dom, specs[i]);
        const double nrm = luxemburg_norm(f0, w, Phi);
        if (nrm > 0.0) {
          const SampledFunction f = f0.scaled(1.0 / nrm);
          const SampledFunction Mf = hl_maximal(f, cfg.rho, plans[j].theta, fam);
          c.lhs = modular(Mf, w, Phi, 1.0);
          c.rhs = modular(f, w, Phi, 1.0);
        }
        c.ratio = ratio_of(c.lhs, c.rhs);
        per[i] = c;
      });
      out.insert(out.end(), per.begin(), per.end());
    }
    return out;
  });
  if (refused) {
    rep.verdict = Verdict::Fail;
    diag["reason"] = "openness probe found no finite A_{p-eps} constant";
  }
  rep.extra = diag;
  return rep;
}

namespace {

struct FsSetup {
  YoungFunction phi, psi;
  double Cp = 1.0;
  double sigma = 0.0;
  Json diag;
};

FsSetup fs_setup(const ExperimentConfig& cfg) {
  FsSetup s;
  s.phi = cfg.growth.phi();
  s.psi = cfg.growth.psi();
  const DiniReport dr = dini_condition_check(cfg.growth, cfg.eta, cfg.dini);
  s.diag["dini"] = Json{{"verdict", dr.pass ? "PASS" : "FAIL"}, {"C", dr.pass ? Json(dr.C) : Json(nullptr)},
                        {"reason", dr.reason}};
  if (!dr.pass)
    require(cfg.override_dini, ErrorKind::Precondition,
            "the Dini-type condition fails for (a, b, eta); set override_dini to run anyway");
  s.Cp = cfg.C_prime > 0.0 ? cfg.C_prime : (dr.pass ? dr.C : 1.0);
  s.sigma = cfg.sigma >= 0.0 ? cfg.sigma : 1.0;
  s.diag["C_prime"] = s.Cp;
  s.diag["sigma"] = s.sigma;
  s.diag["override_dini"] = cfg.override_dini;
  s.diag["unweighted"] = cfg.unweighted;
  return s;
}

void necessity_diag(RatioReport& rep, const ExperimentConfig& cfg) {
  if (!cfg.override_dini) return;
  const double growth = rep.sup_N > 0.0 ? rep.sup_2N / rep.sup_N - 1.0 : 0.0;
  rep.extra["necessity_growth"] = growth;
  rep.extra["necessity_growth_min"] = cfg.necessity_growth;
  rep.extra["necessity_ok"] = growth >= cfg.necessity_growth;
}

}  // namespace

RatioReport modular_fs_experiment(const ExperimentConfig& cfg) {
  const auto specs = battery_specs(cfg);
  require(!specs.empty(), ErrorKind::InvalidArgument, "modular experiment needs a non-empty battery");
  const FsSetup s = fs_setup(cfg);
  const std::string name = cfg.unweighted ? "unweighted-modular" : "modular-fs";
  const std::vector<Json> weights = cfg.unweighted ? std::vector<Json>{Json{{"family", "constant"}, {"c", 1.0}}}
                                                   : cfg.weights;
  RatioReport rep = two_resolutions(name, cfg, [&](const Domain& dom, int) {
    const CubeFamily fam = CubeFamily::standard(dom);
    std::vector<RatioCase> out;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      const SampledFunction w = make_weight(dom, weights[j]);
      const SampledFunction Mw = cfg.unweighted ? w : hl_maximal(w, cfg.rho, cfg.theta, fam);
      std::vector<RatioCase> per(specs.size());
      parallel_for(specs.size(), [&](std::size_t i) {
        RatioCase c;
        c.case_id = "f" + std::to_string(i) + "_w" + std::to_string(j);
        const SampledFunction f = make_function(dom, specs[i]);
        if (f.max_abs() > 0.0) {
          const SampledFunction Mf = orlicz_maximal(f, cfg.eta, cfg.rho, s.sigma, fam);
          c.lhs = modular(Mf, w, s.phi, 1.0);
          c.rhs = modular(f.scaled(s.Cp), Mw, s.psi, 1.0);
        }
        c.ratio = ratio_of(c.lhs, c.rhs);
        per[i] = c;
      });
      out.insert(out.end(), per.begin(), per.end());
    }
    return out;
  });
  rep.extra = s.diag;
  necessity_diag(rep, cfg);
  return rep;
}

RatioReport norm_fs_experiment(const ExperimentConfig& cfg) {
  const auto specs = battery_specs(cfg);
  require(!specs.empty(), ErrorKind::InvalidArgument, "norm experiment needs a non-empty battery");
  const FsSetup s = fs_setup(cfg);
  const std::string name = cfg.unweighted ? "unweighted-norm" : "norm-fs";
  const std::vector<Json> weights = cfg.unweighted ? std::vector<Json>{Json{{"family", "constant"}, {"c", 1.0}}}
                                                   : cfg.weights;
  RatioReport rep = two_resolutions(name, cfg, [&](const Domain& dom, int) {
    const CubeFamily fam = CubeFamily::standard(dom);
    std::vector<RatioCase> out;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      const SampledFunction w = make_weight(dom, weights[j]);
      const SampledFunction Mw = cfg.unweighted ? w : hl_maximal(w, cfg.rho, cfg.theta, fam);
      std::vector<RatioCase> per(specs.size());
      parallel_for(specs.size(), [&](std::size_t i) {
        RatioCase c;
        c.case_id = "f" + std::to_string(i) + "_w" + std::to_string(j);
        const SampledFunction f = make_function(dom, specs[i]);
        if (f.max_abs() > 0.0) {
          const SampledFunction Mf = orlicz_maximal(f, cfg.eta, cfg.rho, s.sigma, fam);
          c.lhs = luxemburg_norm(Mf, w, s.phi);
          c.rhs = luxemburg_norm(f, Mw, s.psi);
        }
        c.ratio = ratio_of(c.lhs, c.rhs);
        per[i] = c;
      });
      out.insert(out.end(), per.begin(), per.end());
    }
    return out;
  });
  rep.extra = s.diag;
  necessity_diag(rep, cfg);
  return rep;
}

RatioReport two_weight_experiment(const ExperimentConfig& cfg) {
  const auto specs = battery_specs(cfg);
  require(!specs.empty(), ErrorKind::InvalidArgument, "two-weight experiment needs a non-empty battery");
  const FsSetup s = fs_setup(cfg);
  const double gamma = cfg.gamma >= 0.0 ? cfg.gamma : s.sigma;
  require(gamma >= s.sigma, ErrorKind::Precondition, "two-weight experiment needs gamma >= sigma");
  const YoungFunction dual = cfg.eta.complementary();
  RatioReport rep = two_resolutions("two-weight", cfg, [&](const Domain& dom, int) {
    const CubeFamily fam = CubeFamily::standard(dom);
    const SampledFunction u = make_weight(dom, cfg.u);
    const SampledFunction Mu = orlicz_maximal(u, dual, cfg.rho, gamma - s.sigma, fam);
    std::vector<RatioCase> out;
    for (std::size_t j = 0; j < cfg.weights.size(); ++j) {
      const SampledFunction w = make_weight(dom, cfg.weights[j]);
      const SampledFunction Mw = hl_maximal(w, cfg.rho, cfg.theta, fam);
      std::vector<RatioCase> per(specs.size());
      parallel_for(specs.size(), [&](std::size_t i) {
        RatioCase c;
        c.case_id = "f" + std::to_string(i) + "_w" + std::to_string(j);
        const SampledFunction f = make_function(dom, specs[i]);
        if (f.max_abs() > 0.0) {
          const SampledFunction Mf = hl_maximal(f, cfg.rho, gamma, fam);
          double lhs = 0.0, rhs = 0.0;
          for (std::size_t x = 0; x < dom.size(); ++x) {
            if (Mu[x] > 0.0 && Mf[x] > 0.0) lhs += s.phi.eval(Mf[x] / Mu[x]) * w[x];
            if (f[x] != 0.0) rhs += s.psi.eval(std::abs(f[x]) / u[x]) * Mw[x];
          }
          c.lhs = lhs * dom.cell_volume();
          c.rhs = rhs * dom.cell_volume();
        }
        c.ratio = ratio_of(c.lhs, c.rhs);
        per[i] = c;
      });
      out.insert(out.end(), per.begin(), per.end());
    }
    return out;
  });
  rep.extra = s.diag;
  rep.extra["gamma"] = gamma;
  return rep;
}

RatioReport sandwich_experiment(const ExperimentConfig& cfg) {
  const auto specs = battery_specs(cfg);
  require(!specs.empty(), ErrorKind::InvalidArgument, "sandwich experiment needs a non-empty battery");
  const double sigma = cfg.sigma >= 0.0 ? cfg.sigma : 1.0;
  const double N0 = cfg.rho.N0();
  double C1[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double C2[2] = {0.0, 0.0};
  RatioReport rep = two_resolutions("sandwich", cfg, [&](const Domain& dom, int level) {
    const CubeFamily fam = CubeFamily::standard(dom);
    const std::vector<double> radii = standard_radii(dom);
    std::vector<RatioCase> lo(specs.size()), hi(specs.size());
    parallel_for(specs.size(), [&](std::size_t i) {
      const SampledFunction f = make_function(dom, specs[i]);
      const SampledFunction M = orlicz_maximal(f, cfg.eta, cfg.rho, sigma, fam);
      const SampledFunction Ms = centered_ball_maximal(f, cfg.eta, sigma, cfg.rho, radii);
      const SampledFunction Mw = centered_ball_maximal(f, cfg.eta, sigma / (N0 + 1.0), cfg.rho, radii);
      double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0;
      for (std::size_t x = 0; x < dom.size(); ++x) {
        if (Ms[x] > 0.0) c1 = std::min(c1, M[x] / Ms[x]);
        if (Mw[x] > 0.0) c2 = std::max(c2, M[x] / Mw[x]);
        else if (M[x] > 0.0) c2 = std::numeric_limits<double>::infinity();
      }
      lo[i] = RatioCase{"f" + std::to_string(i) + "_C1", 0.0, 0.0, std::isfinite(c1) ? c1 : 0.0, 0};
      hi[i] = RatioCase{"f" + std::to_string(i) + "_C2", 0.0, 0.0, c2, 0};
    });
    std::vector<RatioCase> out;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (lo[i].ratio > 0.0) C1[level] = std::min(C1[level], lo[i].ratio);
      C2[level] = std::max(C2[level], hi[i].ratio);
      out.push_back(lo[i]);
      out.push_back(hi[i]);
    }
    return out;
  });
  double d1 = 0.0, d2 = 0.0;
  const Verdict v1 = classify_drift(C1[0], C1[1], cfg.stability_tol, &d1);
  const Verdict v2 = classify_drift(C2[0], C2[1], cfg.stability_tol, &d2);
  rep.drift = std::max(d1, d2);
  rep.verdict = (v1 == Verdict::Fail || v2 == Verdict::Fail || !(C1[0] > 0.0) || !(C1[1] > 0.0))
                    ? Verdict::Fail
                    : (v1 == Verdict::BoundedStable && v2 == Verdict::BoundedStable ? Verdict::BoundedStable
                                                                                      : Verdict::Unstable);
  rep.extra = Json{{"sigma", sigma},          {"sigma_weak", sigma / (N0 + 1.0)}, {"C1_N", C1[0]}, {"C1_2N", C1[1]},
                   {"C2_N", C2[0]},           {"C2_2N", C2[1]},                   {"C1_drift", d1}, {"C2_drift", d2}};
  return rep;
}

// ---------------------------------------------------------------------------

double far_weight_threshold(double Cd, double sigma, double N0) {
  return (N0 + 1.0) * (std::log2(Cd) * std::ceil(sigma) * (N0 + 1.0) + 1.0);
}

SampledFunction far_weight(const Domain& dom, const Point& x0, double t, double sigma, const CriticalRadius& rho,
                           const YoungFunction& phi, const YoungFunction& eta) {
  require(t > 0.0, ErrorKind::InvalidArgument, "far-field weight needs t > 0");
  const int n = dom.dim();
  const double r0 = rho(x0), N0 = rho.N0();
  const YoungFunction dual = eta.complementary();
  std::vector<double> w(dom.size(), 0.0);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const double D = distance(dom.point(i), x0) / r0;
    if (D <= 2.0) continue;
    const double inv = dual.inverse(std::pow(D, n));
    const double num = phi.eval(t * std::pow(D, -n) * inv);
    const double den = phi.eval(t * std::pow(D, -(n + sigma * (N0 + 1.0))) * inv);
    w[i] = den > 0.0 ? num / den : 0.0;
  }
  return SampledFunction(dom, std::move(w));
}

Json far_weight_experiment(const ExperimentConfig& cfg) {
  const double sigma = cfg.sigma >= 0.0 ? cfg.sigma : 1.0;
  const double N0 = cfg.rho.N0();
  const double Cd = doubling_constant(cfg.phi, log_ladder(1e-6, 1e8, 200));
  const double thr = far_weight_threshold(Cd, sigma, N0);
  const Domain base = cfg.domain;
  const Domain wide(base.dim(), 2.0 * base.half_width(), 2 * base.cells_per_axis());
  const Domain fine = base.refined();
  auto sup_on_B0 = [&](const Domain& dom, double theta) {
    const SampledFunction w = far_weight(dom, cfg.x0, cfg.t, sigma, cfg.rho, cfg.phi, cfg.eta);
    const SampledFunction M = hl_maximal(w, cfg.rho, theta, CubeFamily::standard(dom));
    double s = 0.0;
    const double r0 = cfg.rho(cfg.x0);
    for (std::size_t i = 0; i < dom.size(); ++i)
      if (distance(dom.point(i), cfg.x0) <= r0) s = std::max(s, M[i]);
    return s;
  };
  // The weight must vanish on 2B0.
  bool vanishes = true;
  {
    const SampledFunction w = far_weight(base, cfg.x0, cfg.t, sigma, cfg.rho, cfg.phi, cfg.eta);
    for (std::size_t i = 0; i < base.size(); ++i)
      if (distance(base.point(i), cfg.x0) <= 2.0 * cfg.rho(cfg.x0) && w[i] != 0.0) vanishes = false;
  }
  Json ladder = Json::array();
  double smallest = -1.0;
  bool finite_at_proof = false;
  bool proof_rung_seen = false;
  std::vector<double> thetas = cfg.theta_ladder;
  std::sort(thetas.begin(), thetas.end());
  for (double th : thetas) {
    const double a = sup_on_B0(base, th), b = sup_on_B0(wide, th), c = sup_on_B0(fine, th);
    const double growth = a > 0.0 ? b / a : 0.0;
    const double refine = a > 0.0 ? std::abs(c - a) / a : 0.0;
    const bool finite = std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
                        growth <= cfg.finiteness.diverge_factor && refine <= cfg.finiteness.refine_tol;
    ladder.push_back(Json{{"theta", th}, {"sup_B0", a}, {"sup_B0_2L", b}, {"sup_B0_2N", c},
                          {"growth", growth}, {"refine_change", refine}, {"finite", finite}});
    if (finite && smallest < 0.0) smallest = th;
    if (th > thr && !proof_rung_seen) {
      proof_rung_seen = true;
      finite_at_proof = finite;
    }
  }
  Json out{{"experiment", "far-weight"},
           {"sigma", sigma},
           {"N0", N0},
           {"C_d", Cd},
           {"proof_threshold", thr},
           {"weight_vanishes_on_2B0", vanishes},
           {"ladder", ladder},
           {"smallest_finite_theta", smallest >= 0.0 ? Json(smallest) : Json(nullptr)},
           {"proof_rung_tested", proof_rung_seen},
           {"finite_at_proof_theta", finite_at_proof}};
  const bool ok = vanishes && (!proof_rung_seen || finite_at_proof) && smallest >= 0.0;
  out["verdict"] = ok ? "BOUNDED-STABLE" : "FAIL";
  return out;
}

}  // namespace rhomax
