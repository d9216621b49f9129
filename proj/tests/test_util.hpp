// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "rhomax/core/domain.hpp"

namespace rhomax::testing {

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

inline SampledFunction from_fn(const Domain& dom, double (*fn)(const Point&)) {
  std::vector<double> v(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) v[i] = fn(dom.point(i));
  return SampledFunction(dom, std::move(v));
}

template <class F>
SampledFunction sample(const Domain& dom, F&& fn) {
  std::vector<double> v(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) v[i] = fn(dom.point(i));
  return SampledFunction(dom, std::move(v));
}

inline SampledFunction constant(const Domain& dom, double c) {
  return SampledFunction(dom, std::vector<double>(dom.size(), c));
}

}  // namespace rhomax::testing
