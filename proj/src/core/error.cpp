// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/error.hpp"

namespace rhomax {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace rhomax
