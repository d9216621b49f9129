// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhomax/core/domain.hpp"

namespace rhomax {

/// Builds sampled test data from JSON specs.
///
/// Function kinds (all compactly supported unless stated):
///   {"kind":"zero"} / {"kind":"constant","value":c}   (constant is not compactly supported)
///   {"kind":"gaussian","center":[..],"width":w,"amplitude":A}   truncated at 4 widths
///   {"kind":"indicator","center":[..],"half_side":s,"amplitude":A}  or "lo":[..],"hi":[..]
///   {"kind":"spike","center":[..],"alpha":a,"radius":R,"cap":c,"amplitude":A}  A min(|x-c|^-a, cap) on |x-c| <= R
///   {"kind":"step","axis":k,"at":t,"below":a,"above":b,"extent":e}  on the box |x|_inf <= e
///   {"kind":"cell_spike","center":[..],"amplitude":A}  A on the single cell nearest to center
///   {"kind":"raw","path":"file"}
SampledFunction make_function(const Domain& dom, const Json& spec);

/// Weight families: {"family":"constant","c":c}, {"family":"power","delta":d,"c":c}
/// giving c (1+|x|)^d, {"family":"custom","path":"file"} (raw grid file, must be > 0).
SampledFunction make_weight(const Domain& dom, const Json& spec);
void validate_function_spec(const Json& spec);
void validate_weight_spec(const Json& spec);

/// Raw grid files: a header line "# rhomax-grid v1 d=<d> N=<N>" followed by N^d
/// whitespace-separated values, row-major with axis 0 slowest.
std::vector<double> read_raw_grid(const std::string& path, const Domain& dom);
void write_raw_grid(const std::string& path, const SampledFunction& f);

/// Seeded battery of n gaussian / indicator / spike specs with support inside [-L/2, L/2]^d.
std::vector<Json> random_battery(int d, double L, std::size_t n, std::uint64_t seed);

}  // namespace rhomax
