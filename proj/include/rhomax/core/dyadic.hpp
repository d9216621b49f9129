// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "rhomax/core/domain.hpp"

namespace rhomax {

/// Maximal dyadic descendants Q of R with ||f||_{eta,Q} > lambda, in depth-first
/// child order. Requires ||f||_{eta,R} <= lambda. Cubes of side <= h are not split.
std::vector<Cube> cz_decomposition(const SampledFunction& f, const Cube& R, double lambda, const YoungFunction& eta);

/// Grid-point mask of {x in R : sup over the same dyadic tree of ||f||_{eta,Q} > lambda},
/// by exhaustive evaluation of every tree cube (test oracle for cz_decomposition).
std::vector<char> dyadic_superlevel_bruteforce(const SampledFunction& f, const Cube& R, double lambda,
                                               const YoungFunction& eta);

/// Grid-point mask of the union of cubes (closed).
std::vector<char> cover_mask(const Domain& dom, const std::vector<Cube>& cubes);

}  // namespace rhomax
