// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Links only the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rhomax/rhomax.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitFailVerdict = 3;

int exit_for(rhomax_status s) {
  return s == RHOMAX_INTERNAL ? kExitInternal : kExitValidation;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  if (!o) return false;
  o << text;
  return static_cast<bool>(o.flush());
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_path_for(const std::string& out) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".csv";
  return out + ".csv";
}

struct Handles {
  rhomax_context* ctx = nullptr;
  rhomax_result* res = nullptr;
  ~Handles() {
    rhomax_result_destroy(res);
    rhomax_context_destroy(ctx);
  }
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> names;
  for (size_t i = 0; i < rhomax_subcommand_count(); ++i) names.emplace_back(rhomax_subcommand_name(i));

  CLI::App app{"Numerical experiments for rho-localized maximal operators"};
  app.set_version_flag("--version", std::string(rhomax_version()));
  std::string subcommand, config_path, out_path, csv_path;
  std::vector<std::string> overrides, sets;
  int threads = -1;
  bool quiet = false;
  app.add_option("subcommand", subcommand, "Subcommand to run")->required()->check(CLI::IsMember(names));
  app.add_option("overrides", overrides, "Config overrides as key=value (dotted paths)");
  app.add_option("-c,--config", config_path, "Config file (JSON, schema_version 1)");
  app.add_option("-o,--out", out_path, "Report JSON path; also writes <stem>.csv and <out>.meta.json");
  app.add_option("--csv", csv_path, "CSV path (default: next to --out)");
  app.add_option("--set", sets, "Config override key=value (repeatable)");
  app.add_option("-t,--threads", threads, "Worker threads (0 = all cores); falls back to RHO_MAXIMAL_THREADS")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("-q,--quiet", quiet, "Do not print the verdict line");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }
  overrides.insert(overrides.end(), sets.begin(), sets.end());

  if (threads < 0) {
    if (const char* env = std::getenv("RHO_MAXIMAL_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        threads = -1;
      }
      if (threads < 0) {
        std::cerr << "rhomax: error: RHO_MAXIMAL_THREADS must be a nonnegative integer\n";
        return kExitValidation;
      }
    }
  }

  std::string config_text;
  if (!config_path.empty()) {
    if (!read_file(config_path, config_text)) {
      std::cerr << "rhomax: error: cannot read config '" << config_path << "'\n";
      return kExitValidation;
    }
  } else if (subcommand != "selftest") {
    std::cerr << "rhomax: error: subcommand '" << subcommand << "' needs --config\n";
    return kExitValidation;
  }

  std::vector<const char*> ov;
  for (const auto& s : overrides) ov.push_back(s.c_str());

  Handles h;
  if (rhomax_context_create(&h.ctx) != RHOMAX_OK) {
    std::cerr << "rhomax: error: " << rhomax_last_error() << '\n';
    return kExitInternal;
  }
  if (threads >= 0) rhomax_context_set_threads(h.ctx, static_cast<unsigned>(threads));

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const rhomax_status st = rhomax_run(h.ctx, subcommand.c_str(), config_path.empty() ? nullptr : config_text.c_str(),
                                      ov.data(), ov.size(), &h.res);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (st != RHOMAX_OK) {
    std::cerr << "rhomax: error: " << (config_path.empty() ? "" : config_path + ": ") << rhomax_last_error() << '\n';
    return exit_for(st);
  }

  const std::string verdict = rhomax_result_verdict(h.res);
  const int code = rhomax_result_failed(h.res) ? kExitFailVerdict : kExitOk;
  if (out_path.empty()) {
    std::cout << rhomax_result_json(h.res) << '\n';
  } else {
    const std::string csv = csv_path.empty() ? csv_path_for(out_path) : csv_path;
    nlohmann::json meta{{"subcommand", subcommand},
                        {"config", config_path},
                        {"overrides", overrides},
                        {"threads", threads},
                        {"library_version", rhomax_version()},
                        {"started_utc", started},
                        {"wall_seconds", seconds},
                        {"report", out_path},
                        {"csv", csv},
                        {"verdict", verdict},
                        {"exit_code", code}};
    if (!write_file(out_path, std::string(rhomax_result_json(h.res)) + "\n") ||
        !write_file(csv, rhomax_result_csv(h.res)) || !write_file(out_path + ".meta.json", meta.dump(2) + "\n")) {
      std::cerr << "rhomax: error: cannot write outputs next to '" << out_path << "'\n";
      return kExitValidation;
    }
  }
  if (!quiet && !verdict.empty()) std::cerr << subcommand << ": " << verdict << '\n';
  return code;
}
