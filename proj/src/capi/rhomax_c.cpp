// SPDX-License-Identifier: Apache-2.0
#include "rhomax/rhomax.h"

#include <new>
#include <string>

#include "rhomax/core/error.hpp"
#include "rhomax/core/maximal.hpp"
#include "rhomax/core/orlicz.hpp"
#include "rhomax/core/parallel.hpp"
#include "rhomax/core/runner.hpp"

struct rhomax_context {
  unsigned threads = 0;
};

struct rhomax_result {
  std::string json, csv, verdict;
  bool failed = false;
};

namespace {

thread_local std::string g_last_error;

rhomax_status status_of(rhomax::ErrorKind k) {
  using rhomax::ErrorKind;
  switch (k) {
    case ErrorKind::InvalidArgument:
      return RHOMAX_INVALID_ARGUMENT;
    case ErrorKind::Domain:
      return RHOMAX_DOMAIN;
    case ErrorKind::Precondition:
      return RHOMAX_PRECONDITION;
    case ErrorKind::Config:
      return RHOMAX_CONFIG;
    case ErrorKind::Io:
      return RHOMAX_IO;
    case ErrorKind::Internal:
      return RHOMAX_INTERNAL;
  }
  return RHOMAX_INTERNAL;
}

// Runs body, translating exceptions into status codes and the thread-local message.
template <class F>
rhomax_status guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return RHOMAX_OK;
  } catch (const rhomax::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return RHOMAX_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RHOMAX_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RHOMAX_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RHOMAX_INTERNAL;
  }
}

rhomax_status bad_arg(const char* what) {
  g_last_error = what;
  return RHOMAX_INVALID_ARGUMENT;
}

std::vector<std::string> collect(const char* const* overrides, size_t n) {
  std::vector<std::string> v;
  for (size_t i = 0; i < n; ++i) {
    rhomax::require(overrides[i] != nullptr, rhomax::ErrorKind::InvalidArgument, "null override");
    v.emplace_back(overrides[i]);
  }
  return v;
}

rhomax::Json parse_spec(const char* s) {
  rhomax::require(s != nullptr, rhomax::ErrorKind::InvalidArgument, "null spec");
  return rhomax::parse_config_text(s);
}

rhomax::SampledFunction grid(int d, double L, int N, const double* f) {
  rhomax::require(f != nullptr, rhomax::ErrorKind::InvalidArgument, "null grid values");
  const rhomax::Domain dom(d, L, N);
  return rhomax::SampledFunction(dom, std::vector<double>(f, f + dom.size()));
}

const char* const kDefaultConfig = "{\"schema_version\": 1}";

}  // namespace

extern "C" {

const char* rhomax_version(void) { return "0.1.0"; }

const char* rhomax_status_string(rhomax_status s) {
  switch (s) {
    case RHOMAX_OK:
      return "ok";
    case RHOMAX_INVALID_ARGUMENT:
      return "invalid argument";
    case RHOMAX_CONFIG:
      return "config error";
    case RHOMAX_DOMAIN:
      return "domain error";
    case RHOMAX_PRECONDITION:
      return "precondition failed";
    case RHOMAX_IO:
      return "I/O error";
    case RHOMAX_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* rhomax_last_error(void) { return g_last_error.c_str(); }

rhomax_status rhomax_context_create(rhomax_context** out) {
  if (!out) return bad_arg("null output pointer");
  return guard([&] { *out = new rhomax_context(); });
}

void rhomax_context_destroy(rhomax_context* ctx) { delete ctx; }

rhomax_status rhomax_context_set_threads(rhomax_context* ctx, unsigned threads) {
  if (!ctx) return bad_arg("null context");
  ctx->threads = threads;
  return RHOMAX_OK;
}

size_t rhomax_subcommand_count(void) { return rhomax::subcommands().size(); }

const char* rhomax_subcommand_name(size_t index) {
  const auto& s = rhomax::subcommands();
  return index < s.size() ? s[index].c_str() : nullptr;
}

rhomax_status rhomax_validate_config(const char* config_json, const char* const* overrides, size_t n_overrides) {
  if (n_overrides > 0 && !overrides) return bad_arg("null overrides");
  return guard([&] { (void)rhomax::load_config(config_json ? config_json : kDefaultConfig, collect(overrides, n_overrides)); });
}

rhomax_status rhomax_run(rhomax_context* ctx, const char* subcommand, const char* config_json,
                         const char* const* overrides, size_t n_overrides, rhomax_result** out) {
  if (!ctx || !subcommand || !out) return bad_arg("null context, subcommand or output pointer");
  if (n_overrides > 0 && !overrides) return bad_arg("null overrides");
  *out = nullptr;
  return guard([&] {
    const std::string name(subcommand);
    rhomax::require(rhomax::is_subcommand(name), rhomax::ErrorKind::InvalidArgument,
                    "unknown subcommand '" + name + "'");
    rhomax::require(config_json != nullptr || name == "selftest", rhomax::ErrorKind::InvalidArgument,
                    "subcommand '" + name + "' needs a config");
    const rhomax::RunConfig cfg =
        rhomax::load_config(config_json ? config_json : kDefaultConfig, collect(overrides, n_overrides));
    rhomax::ThreadScope scope(ctx->threads);
    const rhomax::RunResult r = rhomax::run_subcommand(name, cfg);
    auto* res = new rhomax_result();
    res->json = r.report.dump(2);
    res->csv = r.csv;
    res->verdict = r.verdict;
    res->failed = r.failed;
    *out = res;
  });
}

const char* rhomax_result_json(const rhomax_result* r) { return r ? r->json.c_str() : nullptr; }
const char* rhomax_result_csv(const rhomax_result* r) { return r ? r->csv.c_str() : nullptr; }
const char* rhomax_result_verdict(const rhomax_result* r) { return r ? r->verdict.c_str() : nullptr; }
int rhomax_result_failed(const rhomax_result* r) { return r && r->failed ? 1 : 0; }
void rhomax_result_destroy(rhomax_result* r) { delete r; }

rhomax_status rhomax_young_eval(const char* spec_json, double t, double* out) {
  if (!out) return bad_arg("null output pointer");
  return guard([&] { *out = rhomax::YoungFunction::from_json(parse_spec(spec_json)).eval(t); });
}

rhomax_status rhomax_young_inverse(const char* spec_json, double y, double* out) {
  if (!out) return bad_arg("null output pointer");
  return guard([&] { *out = rhomax::YoungFunction::from_json(parse_spec(spec_json)).inverse(y); });
}

rhomax_status rhomax_young_conjugate_eval(const char* spec_json, double t, double* out) {
  if (!out) return bad_arg("null output pointer");
  return guard([&] { *out = rhomax::YoungFunction::from_json(parse_spec(spec_json)).complementary().eval(t); });
}

rhomax_status rhomax_sufficient_sigma(double theta, double N0, double N1, double c, double* out) {
  if (!out) return bad_arg("null output pointer");
  return guard([&] { *out = rhomax::sufficient_sigma(theta, N0, N1, c); });
}

rhomax_status rhomax_dini_integral(const char* growth_json, const char* eta_json, double t, double* value,
                                   int* diverges) {
  if (!value || !diverges) return bad_arg("null output pointer");
  return guard([&] {
    const auto v = rhomax::dini_integral(rhomax::GrowthFunction::from_json(parse_spec(growth_json)),
                                         rhomax::YoungFunction::from_json(parse_spec(eta_json)), t);
    *value = v.value;
    *diverges = v.diverges ? 1 : 0;
  });
}

rhomax_status rhomax_hl_maximal(int d, double L, int N, const char* rho_json, double sigma, const double* f,
                                double* out) {
  if (!out) return bad_arg("null output pointer");
  return guard([&] {
    const auto sf = grid(d, L, N, f);
    const auto rho = rhomax::CriticalRadius::from_json(parse_spec(rho_json));
    const auto M = rhomax::hl_maximal(sf, rho, sigma, rhomax::CubeFamily::standard(sf.domain()));
    std::copy(M.values().begin(), M.values().end(), out);
  });
}

rhomax_status rhomax_orlicz_maximal(int d, double L, int N, const char* rho_json, const char* eta_json, double sigma,
                                    const double* f, double* out) {
  if (!out) return bad_arg("null output pointer");
  return guard([&] {
    const auto sf = grid(d, L, N, f);
    const auto rho = rhomax::CriticalRadius::from_json(parse_spec(rho_json));
    const auto eta = rhomax::YoungFunction::from_json(parse_spec(eta_json));
    const auto M = rhomax::orlicz_maximal(sf, eta, rho, sigma, rhomax::CubeFamily::standard(sf.domain()));
    std::copy(M.values().begin(), M.values().end(), out);
  });
}

rhomax_status rhomax_luxemburg_average(int d, double L, int N, const double* f, const double* center,
                                       double half_side, const char* eta_json, double* out) {
  if (!out || !center) return bad_arg("null pointer argument");
  return guard([&] {
    const auto sf = grid(d, L, N, f);
    rhomax::Cube q;
    q.center.dim = d;
    for (int i = 0; i < d; ++i) q.center[i] = center[i];
    q.half_side = half_side;
    *out = rhomax::luxemburg_average(sf, q, rhomax::YoungFunction::from_json(parse_spec(eta_json)));
  });
}

rhomax_status rhomax_critical_radius(const char* rho_json, const double* x, int d, double* out) {
  if (!out || !x) return bad_arg("null pointer argument");
  if (d < 1 || d > rhomax::kMaxDim) return bad_arg("dimension out of range");
  return guard([&] {
    rhomax::Point p;
    p.dim = d;
    for (int i = 0; i < d; ++i) p[i] = x[i];
    *out = rhomax::CriticalRadius::from_json(parse_spec(rho_json))(p);
  });
}

}  // extern "C"
