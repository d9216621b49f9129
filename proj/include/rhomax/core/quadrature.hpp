// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace rhomax {

// Adaptive Gauss-Kronrod (7/15) on [a, b]; thin wrapper over Boost.Math.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-12, double* error_estimate = nullptr);

}  // namespace rhomax
