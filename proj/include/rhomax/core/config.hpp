// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "rhomax/core/harness.hpp"

namespace rhomax {

inline constexpr int kSchemaVersion = 1;

/// Everything a subcommand may read. The experiment parameters plus the few
/// keys only primitives use.
struct RunConfig {
  ExperimentConfig exp;
  std::string op = "hl";  // maximal-eval: hl, orlicz, centered, localized
  int pairs = 1000;       // validate-rho sample size
  std::vector<double> C0_lattice;  // validate-rho constant search; empty skips it
  std::vector<double> N0_lattice;
  bool include_values = true;  // maximal-eval writes the sampled field
  Json raw;                    // validated config after overrides
};

/// Parses JSON text. Syntax errors become Config errors prefixed with "line L, column C".
Json parse_config_text(const std::string& text);

/// Applies key=value overrides. Keys are dotted paths, values are parsed as JSON
/// and fall back to a plain string.
void apply_overrides(Json& j, const std::vector<std::string>& overrides);

/// Validates a config object (unknown keys rejected, schema_version required).
/// `text`, when given, is used to attach line numbers to semantic errors.
RunConfig config_from_json(const Json& j, const std::string& text = {});

/// Full pipeline: text -> overrides -> RunConfig.
RunConfig load_config(const std::string& text, const std::vector<std::string>& overrides);

/// Top-level keys accepted by the schema, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace rhomax
