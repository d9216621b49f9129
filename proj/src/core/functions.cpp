// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/functions.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "rhomax/core/error.hpp"

namespace rhomax {
namespace {

void only_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  require(j.is_object(), ErrorKind::Config, what + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    require(allowed.count(it.key()) > 0, ErrorKind::Config, "unknown key '" + it.key() + "' in " + what);
}

double num(const Json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  require(j.at(key).is_number(), ErrorKind::Config, std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

Point vec(const Json& j, const char* key, int d) {
  Point p;
  p.dim = d;
  if (!j.contains(key)) return p;
  const Json& a = j.at(key);
  if (a.is_number()) {
    for (int i = 0; i < d; ++i) p[i] = a.get<double>();
    return p;
  }
  require(a.is_array() && static_cast<int>(a.size()) == d, ErrorKind::Config,
          std::string("field '") + key + "' must be a number or an array of length d");
  for (int i = 0; i < d; ++i) {
    require(a[static_cast<std::size_t>(i)].is_number(), ErrorKind::Config,
            std::string("field '") + key + "' must hold numbers");
    p[i] = a[static_cast<std::size_t>(i)].get<double>();
  }
  return p;
}

std::string kind_of(const Json& spec) {
  require(spec.is_object() && spec.contains("kind") && spec.at("kind").is_string(), ErrorKind::Config,
          "function spec needs a string 'kind'");
  return spec.at("kind").get<std::string>();
}

}  // namespace

void validate_function_spec(const Json& spec) {
  const std::string k = kind_of(spec);
  if (k == "zero") return only_keys(spec, {"kind"}, "zero spec");
  if (k == "constant") return only_keys(spec, {"kind", "value"}, "constant spec");
  if (k == "gaussian") return only_keys(spec, {"kind", "center", "width", "amplitude"}, "gaussian spec");
  if (k == "indicator")
    return only_keys(spec, {"kind", "center", "half_side", "lo", "hi", "amplitude"}, "indicator spec");
  if (k == "spike") return only_keys(spec, {"kind", "center", "alpha", "radius", "cap", "amplitude"}, "spike spec");
  if (k == "step") return only_keys(spec, {"kind", "axis", "at", "below", "above", "extent"}, "step spec");
  if (k == "cell_spike") return only_keys(spec, {"kind", "center", "amplitude"}, "cell_spike spec");
  if (k == "raw") {
    only_keys(spec, {"kind", "path"}, "raw spec");
    require(spec.contains("path") && spec.at("path").is_string(), ErrorKind::Config, "raw spec needs 'path'");
    return;
  }
  fail(ErrorKind::Config,
       "unknown function kind '" + k + "' (zero, constant, gaussian, indicator, spike, step, cell_spike, raw)");
}

SampledFunction make_function(const Domain& dom, const Json& spec) {
  validate_function_spec(spec);
  const std::string k = kind_of(spec);
  const int d = dom.dim();
  std::vector<double> v(dom.size(), 0.0);
  if (k == "raw") return SampledFunction(dom, read_raw_grid(spec.at("path").get<std::string>(), dom));
  if (k == "cell_spike") {
    v[dom.nearest(vec(spec, "center", d))] = num(spec, "amplitude", 1.0);
    return SampledFunction(dom, std::move(v));
  }
  const double A = num(spec, "amplitude", 1.0);
  const Point c = vec(spec, "center", d);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const Point x = dom.point(i);
    double val = 0.0;
    if (k == "constant") {
      val = num(spec, "value", 1.0);
    } else if (k == "gaussian") {
      const double w = num(spec, "width", 1.0);
      require(w > 0.0, ErrorKind::Config, "gaussian width must be positive");
      const double r = distance(x, c) / w;
      val = r <= 4.0 ? A * std::exp(-0.5 * r * r) : 0.0;
    } else if (k == "indicator") {
      Point lo = c, hi = c;
      if (spec.contains("lo") || spec.contains("hi")) {
        lo = vec(spec, "lo", d);
        hi = vec(spec, "hi", d);
      } else {
        const double s = num(spec, "half_side", 0.5);
        for (int a = 0; a < d; ++a) {
          lo[a] -= s;
          hi[a] += s;
        }
      }
      bool in = true;
      for (int a = 0; a < d; ++a) in = in && x[a] >= lo[a] - 1e-12 && x[a] <= hi[a] + 1e-12;
      val = in ? A : 0.0;
    } else if (k == "spike") {
      const double alpha = num(spec, "alpha", 0.5), R = num(spec, "radius", 1.0), cap = num(spec, "cap", 1e3);
      require(alpha >= 0.0 && R > 0.0 && cap > 0.0, ErrorKind::Config, "spike needs alpha >= 0, radius > 0, cap > 0");
      const double r = distance(x, c);
      if (r <= R) val = A * (r > 0.0 ? std::min(std::pow(r, -alpha), cap) : cap);
    } else if (k == "step") {
      const int axis = static_cast<int>(num(spec, "axis", 0));
      require(axis >= 0 && axis < d, ErrorKind::Config, "step axis out of range");
      const double e = num(spec, "extent", 0.5 * dom.half_width());
      bool in = true;
      for (int a = 0; a < d; ++a) in = in && std::abs(x[a]) <= e + 1e-12;
      if (in) val = x[axis] < num(spec, "at", 0.0) ? num(spec, "below", 0.0) : num(spec, "above", 1.0);
    }
    v[i] = val;
  }
  return SampledFunction(dom, std::move(v));
}

void validate_weight_spec(const Json& spec) {
  require(spec.is_object() && spec.contains("family") && spec.at("family").is_string(), ErrorKind::Config,
          "weight spec needs a string 'family'");
  const std::string fam = spec.at("family").get<std::string>();
  if (fam == "constant") return only_keys(spec, {"family", "c"}, "constant weight");
  if (fam == "power") return only_keys(spec, {"family", "delta", "c"}, "power weight");
  if (fam == "custom") {
    only_keys(spec, {"family", "path"}, "custom weight");
    require(spec.contains("path") && spec.at("path").is_string(), ErrorKind::Config, "custom weight needs 'path'");
    return;
  }
  fail(ErrorKind::Config, "unknown weight family '" + fam + "' (constant, power, custom)");
}

SampledFunction make_weight(const Domain& dom, const Json& spec) {
  validate_weight_spec(spec);
  const std::string fam = spec.at("family").get<std::string>();
  std::vector<double> v;
  if (fam == "custom") {
    v = read_raw_grid(spec.at("path").get<std::string>(), dom);
  } else {
    const double c = num(spec, "c", 1.0);
    const double delta = fam == "power" ? num(spec, "delta", 1.0) : 0.0;
    v.resize(dom.size());
    for (std::size_t i = 0; i < dom.size(); ++i) v[i] = c * std::pow(1.0 + dom.point(i).norm(), delta);
  }
  for (double x : v) require(x > 0.0 && std::isfinite(x), ErrorKind::Domain, "weights must be positive and finite");
  return SampledFunction(dom, std::move(v));
}

std::vector<double> read_raw_grid(const std::string& path, const Domain& dom) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open raw grid file '" + path + "'");
  std::string header;
  std::getline(in, header);
  int d = 0, N = 0;
  require(std::sscanf(header.c_str(), "# rhomax-grid v1 d=%d N=%d", &d, &N) == 2, ErrorKind::Io,
          "raw grid file '" + path + "' lacks the '# rhomax-grid v1 d=<d> N=<N>' header");
  require(d == dom.dim() && N == dom.cells_per_axis(), ErrorKind::Config,
          "raw grid file '" + path + "' does not match the domain (d, N)");
  std::vector<double> v;
  v.reserve(dom.size());
  double x;
  while (in >> x) v.push_back(x);
  require(in.eof(), ErrorKind::Io, "raw grid file '" + path + "' holds a non-numeric token");
  require(v.size() == dom.size(), ErrorKind::Io,
          "raw grid file '" + path + "' holds " + std::to_string(v.size()) + " values, expected " +
              std::to_string(dom.size()));
  return v;
}

void write_raw_grid(const std::string& path, const SampledFunction& f) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write raw grid file '" + path + "'");
  out << "# rhomax-grid v1 d=" << f.domain().dim() << " N=" << f.domain().cells_per_axis() << "\n";
  out.precision(17);
  for (double x : f.values()) out << x << "\n";
  require(static_cast<bool>(out), ErrorKind::Io, "write to '" + path + "' failed");
}

std::vector<Json> random_battery(int d, double L, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double box = 0.5 * L;
  auto center = [&](double margin) {
    Json c = Json::array();
    for (int i = 0; i < d; ++i) c.push_back((2.0 * U(rng) - 1.0) * (box - margin));
    return c;
  };
  std::vector<Json> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double amp = 0.5 + 2.0 * U(rng);
    switch (i % 3) {
      case 0: {
        const double w = box * (0.05 + 0.15 * U(rng));
        out.push_back(Json{{"kind", "gaussian"}, {"center", center(4 * w)}, {"width", w}, {"amplitude", amp}});
        break;
      }
      case 1: {
        const double s = box * (0.05 + 0.3 * U(rng));
        out.push_back(Json{{"kind", "indicator"}, {"center", center(s)}, {"half_side", s}, {"amplitude", amp}});
        break;
      }
      default: {
        const double R = box * (0.1 + 0.3 * U(rng));
        out.push_back(Json{{"kind", "spike"},
                           {"center", center(R)},
                           {"alpha", d * (0.1 + 0.3 * U(rng))},
                           {"radius", R},
                           {"cap", 50.0},
                           {"amplitude", amp}});
        break;
      }
    }
  }
  return out;
}

}  // namespace rhomax
