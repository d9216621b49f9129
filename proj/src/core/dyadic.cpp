// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/dyadic.hpp"

#include "rhomax/core/error.hpp"
#include "rhomax/core/orlicz.hpp"

namespace rhomax {
namespace {

void descend(const SampledFunction& f, const Cube& q, double lambda, const YoungFunction& eta, std::vector<Cube>& out) {
  if (q.side() <= f.domain().h() * (1.0 + 1e-12)) return;
  for (const Cube& c : dyadic_children(q)) {
    if (luxemburg_average(f, c, eta) > lambda)
      out.push_back(c);
    else
      descend(f, c, lambda, eta, out);
  }
}

void visit_all(const SampledFunction& f, const Cube& q, const YoungFunction& eta, std::vector<Cube>& cubes,
               std::vector<double>& values) {
  if (q.side() <= f.domain().h() * (1.0 + 1e-12)) return;
  for (const Cube& c : dyadic_children(q)) {
    cubes.push_back(c);
    values.push_back(luxemburg_average(f, c, eta));
    visit_all(f, c, eta, cubes, values);
  }
}

}  // namespace

std::vector<Cube> cz_decomposition(const SampledFunction& f, const Cube& R, double lambda, const YoungFunction& eta) {
  require(lambda > 0.0, ErrorKind::InvalidArgument, "cz_decomposition needs lambda > 0");
  require(luxemburg_average(f, R, eta) <= lambda, ErrorKind::Precondition,
          "cz_decomposition needs ||f||_{eta,R} <= lambda");
  std::vector<Cube> out;
  descend(f, R, lambda, eta, out);
  return out;
}

std::vector<char> dyadic_superlevel_bruteforce(const SampledFunction& f, const Cube& R, double lambda,
                                               const YoungFunction& eta) {
  std::vector<Cube> cubes;
  std::vector<double> values;
  cubes.push_back(R);
  values.push_back(luxemburg_average(f, R, eta));
  visit_all(f, R, eta, cubes, values);
  std::vector<Cube> hot;
  for (std::size_t i = 0; i < cubes.size(); ++i)
    if (values[i] > lambda) hot.push_back(cubes[i]);
  return cover_mask(f.domain(), hot);
}

std::vector<char> cover_mask(const Domain& dom, const std::vector<Cube>& cubes) {
  std::vector<char> mask(dom.size(), 0);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const Point x = dom.point(i);
    for (const Cube& c : cubes)
      if (c.contains(x)) {
        mask[i] = 1;
        break;
      }
  }
  return mask;
}

}  // namespace rhomax
