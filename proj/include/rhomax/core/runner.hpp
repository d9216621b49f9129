// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "rhomax/core/config.hpp"

namespace rhomax {

struct RunResult {
  Json report;
  std::string csv;
  std::string verdict;  // empty for subcommands without a verdict
  bool failed = false;  // true only for a FAIL verdict
};

/// Subcommand names in help order.
const std::vector<std::string>& subcommands();
bool is_subcommand(const std::string& name);

/// Runs a subcommand on an already validated config.
RunResult run_subcommand(const std::string& name, const RunConfig& cfg);

/// Closed-form oracle suite; independent of any config.
RunResult run_selftest();

}  // namespace rhomax
