// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhomax/core/critical_radius.hpp"
#include "rhomax/core/dini.hpp"
#include "rhomax/core/domain.hpp"
#include "rhomax/core/weights.hpp"
#include "rhomax/core/young.hpp"

namespace rhomax {

/// Parameters shared by all experiments. Negative sigma / gamma / power_a / N1 /
/// C_prime mean "derive it" (see each experiment).
struct ExperimentConfig {
  std::uint64_t seed = 0;
  Domain domain{1, 2.0, 256};
  CriticalRadius rho = CriticalRadius::inverse_power(1.0);
  YoungFunction eta;                               // identity
  YoungFunction Phi = YoungFunction::plog(1.0, 1.0);
  YoungFunction phi;                               // identity
  GrowthPair growth{GrowthFunction::power(2.0), GrowthFunction::power(2.0)};
  double p = 2.0, q = 1.0;
  double sigma = -1.0, theta = 0.0, gamma = -1.0, power_a = -1.0;
  double c = 0.25, N1 = -1.0;
  double C_prime = -1.0;
  std::vector<Json> functions;  // empty: seeded random battery
  int battery_size = 20;
  bool cell_spike = false;      // append a single-cell function to the random battery
  std::vector<Json> weights{Json{{"family", "constant"}, {"c", 1.0}}};
  Json u = Json{{"family", "constant"}, {"c", 1.0}};
  std::vector<double> lambdas{0.9, 0.6, 0.4, 0.25, 0.15, 0.1, 0.05, 0.02};
  double stability_tol = 0.15;
  double necessity_growth = 0.25;
  bool override_dini = false;
  bool unweighted = false;
  DiniOptions dini;
  FinitenessRule finiteness;
  std::vector<double> eps_ladder{0.5, 0.25, 0.1, 0.05};
  std::vector<double> theta_sweep{0.0, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> theta_ladder{0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0};
  std::vector<double> sigmas{1.0, 1.5, 2.0, 3.0, 4.0};
  Point x0 = make_point({0.0});
  double t = 1.0;
  std::vector<double> distances{16.0, 32.0, 64.0, 128.0};
};

struct RatioCase {
  std::string case_id;
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  int N = 0;
};

enum class Verdict { BoundedStable, Unstable, Fail };
std::string to_string(Verdict v);

struct RatioReport {
  std::string experiment;
  std::vector<RatioCase> cases;
  int N = 0;  // base resolution; 2N is the refinement
  double sup_N = 0.0, sup_2N = 0.0, drift = 0.0;
  Verdict verdict = Verdict::Fail;
  Json extra = Json::object();
  Json to_json() const;
  std::string to_csv(bool header = true) const;
};

/// Drift |S_2N - S_N| / S_N (0 when both vanish); FAIL on non-finite values.
Verdict classify_drift(double sup_N, double sup_2N, double tol, double* drift);

/// max{(theta + N1)/c, 2 N0 / (1 - (N0+1) c)} + 1e-6, for 0 < c < 1/(N0+1).
double sufficient_sigma(double theta, double N0, double N1, double c);

/// The battery used by an experiment on a given domain.
std::vector<Json> battery_specs(const ExperimentConfig& cfg);

RatioReport weak_type_experiment(const ExperimentConfig& cfg);
RatioReport level_set_experiment(const ExperimentConfig& cfg);
RatioReport strong_type_experiment(const ExperimentConfig& cfg);
RatioReport modular_fs_experiment(const ExperimentConfig& cfg);   // honours cfg.unweighted
RatioReport norm_fs_experiment(const ExperimentConfig& cfg);      // honours cfg.unweighted
RatioReport two_weight_experiment(const ExperimentConfig& cfg);
RatioReport sandwich_experiment(const ExperimentConfig& cfg);

/// Far-field weight ladder: smallest ladder theta with a finite sup over B0 of M^{rho,theta} w.
Json far_weight_experiment(const ExperimentConfig& cfg);
/// Far-field test weight sampled on dom (zero on 2B0).
SampledFunction far_weight(const Domain& dom, const Point& x0, double t, double sigma, const CriticalRadius& rho,
                           const YoungFunction& phi, const YoungFunction& eta);
/// theta > (N0+1)((log2 C_d) ceil(sigma) (N0+1) + 1).
double far_weight_threshold(double Cd, double sigma, double N0);

}  // namespace rhomax
