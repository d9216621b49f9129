// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/dini.hpp"

#include <cmath>

#include "rhomax/core/error.hpp"
#include "rhomax/core/parallel.hpp"
#include "rhomax/core/quadrature.hpp"

namespace rhomax {

Json DiniValue::to_json() const {
  Json j{{"diverges", diverges}, {"upper_limit", upper_limit}, {"panels", panels}};
  if (diverges)
    j["value"] = "DIVERGES";
  else
    j["value"] = value;
  return j;
}

Json DiniOptions::to_json() const {
  return Json{{"t_min", t_min}, {"t_max", t_max}, {"t_points", t_points}, {"C_lo", C_lo}, {"C_hi", C_hi}};
}

DiniOptions DiniOptions::from_json(const Json& j) {
  require(j.is_object(), ErrorKind::Config, "dini options must be an object");
  DiniOptions o;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    require(it.value().is_number(), ErrorKind::Config, "dini field '" + k + "' must be a number");
    if (k == "t_min")
      o.t_min = it.value().get<double>();
    else if (k == "t_max")
      o.t_max = it.value().get<double>();
    else if (k == "t_points")
      o.t_points = it.value().get<int>();
    else if (k == "C_lo")
      o.C_lo = it.value().get<double>();
    else if (k == "C_hi")
      o.C_hi = it.value().get<double>();
    else
      fail(ErrorKind::Config, "unknown key '" + k + "' in dini options");
  }
  require(o.t_min > 0.0 && o.t_max >= o.t_min && o.t_points >= 1, ErrorKind::Config,
          "dini needs 0 < t_min <= t_max and t_points >= 1");
  require(o.C_lo > 0.0 && o.C_hi > o.C_lo, ErrorKind::Config, "dini needs 0 < C_lo < C_hi");
  return o;
}

DiniValue dini_integral(const GrowthFunction& a, const YoungFunction& eta, double t) {
  require(t > 0.0 && std::isfinite(t), ErrorKind::InvalidArgument, "dini integral needs t > 0");
  const double ln2 = std::log(2.0);
  auto integrand = [&](double v) { return a.eval(t * std::exp(-v)) * eta.derivative(std::exp(v)); };
  DiniValue out;
  double total = 0.0;
  int hot = 0;
  for (int k = 0; k < 1000; ++k) {
    const double panel = integrate_gk(integrand, k * ln2, (k + 1) * ln2, 1e-12);
    out.panels = k + 1;
    out.upper_limit = std::ldexp(1.0, k + 1);
    if (!std::isfinite(panel) || panel < 0.0) {
      out.diverges = true;
      return out;
    }
    total += panel;
    if (!std::isfinite(total)) {
      out.diverges = true;
      return out;
    }
    if (panel <= 1e-9 * total) {
      out.value = total;
      return out;
    }
    if (out.upper_limit > 1e8) {
      hot = panel > 1e-3 * total ? hot + 1 : 0;
      if (hot >= 3) {
        out.diverges = true;
        out.value = total;
        return out;
      }
    }
  }
  out.diverges = true;
  out.value = total;
  return out;
}

Json DiniReport::to_json() const {
  Json conv = Json::array();
  for (bool c : converged) conv.push_back(c);
  Json Ij = Json::array();
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (converged[i])
      Ij.push_back(I[i]);
    else
      Ij.push_back("DIVERGES");
  }
  Json j{{"t", t},           {"I", Ij},         {"converged", conv}, {"verdict", pass ? "PASS" : "FAIL"},
         {"C_lo", C_lo},     {"C_hi", C_hi},    {"reason", reason}};
  if (pass)
    j["C"] = C;
  else
    j["C"] = nullptr;
  return j;
}

DiniReport dini_condition_check(const GrowthPair& pair, const YoungFunction& eta, const DiniOptions& opt) {
  DiniReport rep;
  rep.C_lo = opt.C_lo;
  rep.C_hi = opt.C_hi;
  const int n = opt.t_points;
  rep.t.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    rep.t[static_cast<std::size_t>(i)] =
        n == 1 ? opt.t_min : opt.t_min * std::pow(opt.t_max / opt.t_min, static_cast<double>(i) / (n - 1));
  std::vector<DiniValue> vals(rep.t.size());
  parallel_for(rep.t.size(), [&](std::size_t i) { vals[i] = dini_integral(pair.a, eta, rep.t[i]); });
  rep.I.resize(vals.size());
  rep.converged.resize(vals.size());
  bool any_div = false;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    rep.I[i] = vals[i].value;
    rep.converged[i] = !vals[i].diverges;
    any_div = any_div || vals[i].diverges;
  }
  if (any_div) {
    rep.reason = "integral diverges";
    return rep;
  }
  auto ok = [&](double C) {
    for (std::size_t i = 0; i < rep.t.size(); ++i)
      if (!(rep.I[i] <= C * pair.b.eval(C * rep.t[i]))) return false;
    return true;
  };
  if (!ok(opt.C_hi)) {
    rep.reason = "no admissible C in the search bracket";
    return rep;
  }
  rep.pass = true;
  if (ok(opt.C_lo)) {
    rep.C = opt.C_lo;
    rep.reason = "lower end of the bracket is admissible";
    return rep;
  }
  double lo = opt.C_lo, hi = opt.C_hi;
  while (hi / lo > 1.01) {
    const double mid = std::sqrt(lo * hi);
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  rep.C = hi;
  return rep;
}

DiniValue bp_reduction(const YoungFunction& eta, double p) {
  require(p > 1.0, ErrorKind::InvalidArgument, "B_p reduction needs p > 1");
  return dini_integral(GrowthFunction::power(p - 1.0), eta, 1.0);
}

}  // namespace rhomax
