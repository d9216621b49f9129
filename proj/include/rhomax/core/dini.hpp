// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "rhomax/core/young.hpp"

namespace rhomax {

/// I(t) = int_0^t a(s)/s eta'(t/s) ds, evaluated after u = t/s and v = log u as
///   int_0^inf a(t e^-v) eta'(e^v) dv,
/// panel by panel (one panel per doubling of u).
struct DiniValue {
  double value = 0.0;
  bool diverges = false;
  double upper_limit = 1.0;  // last u reached
  int panels = 0;
  Json to_json() const;
};

struct DiniOptions {
  double t_min = 1e-4;
  double t_max = 1e4;
  int t_points = 64;
  double C_lo = 0x1p-10;
  double C_hi = 0x1p20;
  Json to_json() const;
  static DiniOptions from_json(const Json& j);
};

/// Stops when a panel adds < 1e-9 of the running total. Reports divergence when three
/// consecutive panels past u = 1e8 each add > 1e-3, at u = 2^1000, or on a non-finite value.
DiniValue dini_integral(const GrowthFunction& a, const YoungFunction& eta, double t);

struct DiniReport {
  std::vector<double> t;
  std::vector<double> I;
  std::vector<bool> converged;
  bool pass = false;
  double C = 0.0;  // minimal admissible C to 1% (upper end of the final bracket)
  double C_lo = 0.0, C_hi = 0.0;
  std::string reason;
  Json to_json() const;
};

/// Minimal C with I(t) <= C b(C t) on the log t grid, by bisection on log C.
DiniReport dini_condition_check(const GrowthPair& pair, const YoungFunction& eta, const DiniOptions& opt = {});

/// int_1^inf eta'(u) u^-p du, i.e. I(1) for a(s) = s^(p-1).
DiniValue bp_reduction(const YoungFunction& eta, double p);

}  // namespace rhomax
