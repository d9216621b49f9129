// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>

#include "rhomax/core/error.hpp"
#include "rhomax/core/functions.hpp"

namespace rhomax {

namespace {

std::pair<int, int> line_col(const std::string& text, std::size_t pos) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Offsets of the top-level keys of a JSON object text (string-aware depth scan).
std::map<std::string, std::size_t> top_level_keys(const std::string& text) {
  std::map<std::string, std::size_t> out;
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '"') {
      const std::size_t start = i;
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        s += text[i];
      }
      if (depth == 1) {
        std::size_t k = i + 1;
        while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
        if (k < text.size() && text[k] == ':' && !out.count(s)) out[s] = start;
      }
    } else if (ch == '{' || ch == '[') {
      ++depth;
    } else if (ch == '}' || ch == ']') {
      --depth;
    }
  }
  return out;
}

struct Locator {
  const std::string& text;
  std::map<std::string, std::size_t> keys;

  // Line of the top-level key, refined to the first quoted token of the message
  // found after it (for nested errors such as unknown keys).
  std::string where(const std::string& key, const std::string& message) const {
    if (text.empty()) return "key '" + key + "'";
    auto it = keys.find(key);
    if (it == keys.end()) return "key '" + key + "'";
    std::size_t pos = it->second;
    static const std::regex quoted("'([^']+)'");
    std::smatch m;
    if (std::regex_search(message, m, quoted) && m[1].str() != key) {
      const std::size_t p = text.find('"' + m[1].str() + '"', pos + 1);
      const std::size_t end = next_top_level(pos);
      if (p != std::string::npos && p < end) pos = p;
    }
    return "line " + std::to_string(line_col(text, pos).first);
  }

  std::size_t next_top_level(std::size_t pos) const {
    std::size_t best = text.size();
    for (const auto& [k, p] : keys)
      if (p > pos) best = std::min(best, p);
    return best;
  }
};

double num(const Json& v, const std::string& key) {
  require(v.is_number(), ErrorKind::Config, "'" + key + "' must be a number");
  const double x = v.get<double>();
  require(std::isfinite(x), ErrorKind::Config, "'" + key + "' must be finite");
  return x;
}

int integer(const Json& v, const std::string& key) {
  require(v.is_number_integer(), ErrorKind::Config, "'" + key + "' must be an integer");
  return v.get<int>();
}

bool boolean(const Json& v, const std::string& key) {
  require(v.is_boolean(), ErrorKind::Config, "'" + key + "' must be a boolean");
  return v.get<bool>();
}

std::vector<double> numbers(const Json& v, const std::string& key, bool positive) {
  require(v.is_array(), ErrorKind::Config, "'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    const double d = num(x, key);
    if (positive) require(d > 0.0, ErrorKind::Config, "'" + key + "' entries must be positive");
    else require(d >= 0.0, ErrorKind::Config, "'" + key + "' entries must be nonnegative");
    out.push_back(d);
  }
  return out;
}

std::vector<Json> objects(const Json& v, const std::string& key) {
  require(v.is_array(), ErrorKind::Config, "'" + key + "' must be an array of objects");
  std::vector<Json> out;
  for (const auto& x : v) {
    require(x.is_object(), ErrorKind::Config, "'" + key + "' entries must be objects");
    out.push_back(x);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "schema_version", "seed",         "domain",       "rho",          "eta",         "Phi",
      "phi",            "a",            "b",            "p",            "q",           "sigma",
      "theta",          "gamma",        "power_a",      "c",            "N1",          "C_prime",
      "functions",      "battery_size", "cell_spike",   "weights",      "u",           "lambdas",
      "stability_tol",  "necessity_growth", "override_dini", "unweighted", "dini",      "finiteness",
      "eps_ladder",     "theta_sweep",  "theta_ladder", "sigmas",       "x0",          "t",
      "distances",      "operator",     "pairs",        "C0_lattice",   "N0_lattice",  "include_values"};
  return keys;
}

Json parse_config_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    // Drop nlohmann's "[json.exception...] parse error at line L, column C: " prefix.
    const auto p = msg.find(": ", msg.find("parse error"));
    if (p != std::string::npos) msg = msg.substr(p + 2);
    fail(ErrorKind::Config, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
}

void apply_overrides(Json& j, const std::vector<std::string>& overrides) {
  require(j.is_object(), ErrorKind::Config, "config must be a JSON object");
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    require(eq != std::string::npos && eq > 0, ErrorKind::Config, "override '" + ov + "' is not key=value");
    const std::string path = ov.substr(0, eq);
    const std::string text = ov.substr(eq + 1);
    Json value;
    try {
      value = Json::parse(text);
    } catch (const Json::parse_error&) {
      value = text;
    }
    Json* node = &j;
    std::size_t start = 0;
    while (true) {
      const auto dot = path.find('.', start);
      const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      require(!part.empty(), ErrorKind::Config, "override '" + ov + "' has an empty path segment");
      if (node->is_array()) {
        std::size_t idx = 0;
        try {
          idx = std::stoul(part);
        } catch (const std::exception&) {
          fail(ErrorKind::Config, "override '" + ov + "': '" + part + "' is not an array index");
        }
        require(idx < node->size(), ErrorKind::Config, "override '" + ov + "': index out of range");
        node = &(*node)[idx];
      } else {
        require(node->is_object() || node->is_null(), ErrorKind::Config,
                "override '" + ov + "': '" + part + "' is inside a non-object value");
        node = &(*node)[part];
      }
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    *node = value;
  }
}

RunConfig config_from_json(const Json& j, const std::string& text) {
  require(j.is_object(), ErrorKind::Config, "config must be a JSON object");
  const Locator loc{text, top_level_keys(text)};
  const auto& allowed = config_keys();
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      fail(ErrorKind::Config, loc.where(it.key(), "") + ": unknown key '" + it.key() + "'");
  require(j.contains("schema_version"), ErrorKind::Config, "config needs \"schema_version\": 1");

  RunConfig rc;
  ExperimentConfig& e = rc.exp;
  // Domain first: x0 and the battery depend on its dimension.
  std::vector<std::string> order{"schema_version", "domain"};
  for (const auto& k : allowed)
    if (k != "schema_version" && k != "domain") order.push_back(k);
  for (const auto& key : order) {
    if (!j.contains(key)) continue;
    const Json& v = j.at(key);
    try {
      if (key == "schema_version") {
        require(v.is_number_integer() && v.get<int>() == kSchemaVersion, ErrorKind::Config,
                "unsupported schema_version (expected 1)");
      } else if (key == "seed") {
        require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0), ErrorKind::Config,
                "'seed' must be a nonnegative integer");
        e.seed = v.get<std::uint64_t>();
      } else if (key == "domain") {
        e.domain = Domain::from_json(v);
      } else if (key == "rho") {
        e.rho = CriticalRadius::from_json(v);
      } else if (key == "eta") {
        e.eta = YoungFunction::from_json(v);
      } else if (key == "Phi") {
        e.Phi = YoungFunction::from_json(v);
      } else if (key == "phi") {
        e.phi = YoungFunction::from_json(v);
      } else if (key == "a") {
        e.growth.a = GrowthFunction::from_json(v);
      } else if (key == "b") {
        e.growth.b = GrowthFunction::from_json(v);
      } else if (key == "p") {
        e.p = num(v, key);
        require(e.p >= 1.0, ErrorKind::Config, "'p' must be >= 1");
      } else if (key == "q") {
        e.q = num(v, key);
        require(e.q >= 0.0, ErrorKind::Config, "'q' must be >= 0");
      } else if (key == "sigma") {
        e.sigma = num(v, key);
      } else if (key == "theta") {
        e.theta = num(v, key);
        require(e.theta >= 0.0, ErrorKind::Config, "'theta' must be >= 0");
      } else if (key == "gamma") {
        e.gamma = num(v, key);
      } else if (key == "power_a") {
        e.power_a = num(v, key);
      } else if (key == "c") {
        e.c = num(v, key);
      } else if (key == "N1") {
        e.N1 = num(v, key);
      } else if (key == "C_prime") {
        e.C_prime = num(v, key);
      } else if (key == "functions") {
        e.functions = objects(v, key);
        for (const auto& f : e.functions) validate_function_spec(f);
      } else if (key == "battery_size") {
        e.battery_size = integer(v, key);
        require(e.battery_size >= 0, ErrorKind::Config, "'battery_size' must be >= 0");
      } else if (key == "cell_spike") {
        e.cell_spike = boolean(v, key);
      } else if (key == "weights") {
        e.weights = objects(v, key);
        for (const auto& w : e.weights) validate_weight_spec(w);
      } else if (key == "u") {
        require(v.is_object(), ErrorKind::Config, "'u' must be a weight spec object");
        validate_weight_spec(v);
        e.u = v;
      } else if (key == "lambdas") {
        e.lambdas = numbers(v, key, true);
      } else if (key == "stability_tol") {
        e.stability_tol = num(v, key);
        require(e.stability_tol > 0.0, ErrorKind::Config, "'stability_tol' must be positive");
      } else if (key == "necessity_growth") {
        e.necessity_growth = num(v, key);
      } else if (key == "override_dini") {
        e.override_dini = boolean(v, key);
      } else if (key == "unweighted") {
        e.unweighted = boolean(v, key);
      } else if (key == "dini") {
        e.dini = DiniOptions::from_json(v);
      } else if (key == "finiteness") {
        e.finiteness = FinitenessRule::from_json(v);
      } else if (key == "eps_ladder") {
        e.eps_ladder = numbers(v, key, true);
      } else if (key == "theta_sweep") {
        e.theta_sweep = numbers(v, key, false);
      } else if (key == "theta_ladder") {
        e.theta_ladder = numbers(v, key, false);
      } else if (key == "sigmas") {
        e.sigmas = numbers(v, key, true);
      } else if (key == "x0") {
        require(v.is_array(), ErrorKind::Config, "'x0' must be an array of coordinates");
        require(static_cast<int>(v.size()) == e.domain.dim(), ErrorKind::Config,
                "'x0' must have one coordinate per domain dimension");
        Point p;
        p.dim = e.domain.dim();
        for (int i = 0; i < p.dim; ++i) p[i] = num(v[static_cast<std::size_t>(i)], key);
        e.x0 = p;
      } else if (key == "t") {
        e.t = num(v, key);
        require(e.t > 0.0, ErrorKind::Config, "'t' must be positive");
      } else if (key == "distances") {
        e.distances = numbers(v, key, true);
      } else if (key == "operator") {
        require(v.is_string(), ErrorKind::Config, "'operator' must be a string");
        rc.op = v.get<std::string>();
        require(rc.op == "hl" || rc.op == "orlicz" || rc.op == "centered" || rc.op == "localized",
                ErrorKind::Config, "'operator' must be one of hl, orlicz, centered, localized");
      } else if (key == "pairs") {
        rc.pairs = integer(v, key);
        require(rc.pairs > 0, ErrorKind::Config, "'pairs' must be positive");
      } else if (key == "C0_lattice") {
        rc.C0_lattice = numbers(v, key, true);
      } else if (key == "N0_lattice") {
        rc.N0_lattice = numbers(v, key, false);
      } else if (key == "include_values") {
        rc.include_values = boolean(v, key);
      }
    } catch (const Error& err) {
      fail(ErrorKind::Config, loc.where(key, err.what()) + ": " + err.what());
    } catch (const Json::exception& err) {
      fail(ErrorKind::Config, loc.where(key, "") + ": " + err.what());
    }
  }
  if (!j.contains("x0") && e.x0.dim != e.domain.dim()) {
    e.x0 = Point{};
    e.x0.dim = e.domain.dim();
  }
  if (e.gamma >= 0.0 && e.sigma >= 0.0)
    require(e.gamma >= e.sigma, ErrorKind::Config, loc.where("gamma", "") + ": 'gamma' must be >= 'sigma'");
  rc.raw = j;
  return rc;
}

RunConfig load_config(const std::string& text, const std::vector<std::string>& overrides) {
  Json j = parse_config_text(text);
  apply_overrides(j, overrides);
  return config_from_json(j, text);
}

}  // namespace rhomax
