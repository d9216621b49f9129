// SPDX-License-Identifier: Apache-2.0
#include "rhomax/core/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "rhomax/core/error.hpp"

namespace rhomax {

double Point::norm() const {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

Json Point::to_json() const {
  Json a = Json::array();
  for (int i = 0; i < dim; ++i) a.push_back(x[static_cast<std::size_t>(i)]);
  return a;
}

Point make_point(std::initializer_list<double> coords) {
  require(coords.size() >= 1 && coords.size() <= kMaxDim, ErrorKind::InvalidArgument, "point dimension must be 1..3");
  Point p;
  p.dim = static_cast<int>(coords.size());
  std::size_t i = 0;
  for (double c : coords) p.x[i++] = c;
  return p;
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double Cube::radius() const { return std::sqrt(static_cast<double>(dim())) * half_side; }

double Cube::measure() const { return std::pow(2.0 * half_side, dim()); }

bool Cube::contains(const Point& p, double tol) const {
  for (int i = 0; i < dim(); ++i)
    if (std::abs(p[i] - center[i]) > half_side + tol) return false;
  return true;
}

bool Cube::contains(const Cube& q, double tol) const {
  for (int i = 0; i < dim(); ++i)
    if (q.lo(i) < lo(i) - tol || q.hi(i) > hi(i) + tol) return false;
  return true;
}

bool Cube::intersects(const Cube& q) const {
  for (int i = 0; i < dim(); ++i)
    if (q.hi(i) <= lo(i) || q.lo(i) >= hi(i)) return false;
  return true;
}

Json Cube::to_json() const { return Json{{"center", center.to_json()}, {"half_side", half_side}}; }

Cube cube_from_radius(const Point& x, double r) {
  return Cube{x, r / std::sqrt(static_cast<double>(x.dim))};
}

CubeClass classify(const Cube& q, double rho_at_center) {
  const double r = q.radius();
  if (std::abs(r - rho_at_center) <= 1e-12 * rho_at_center) return CubeClass::Critical;
  return r < rho_at_center ? CubeClass::Subcritical : CubeClass::Supercritical;
}

std::vector<Cube> dyadic_children(const Cube& q) {
  const int d = q.dim();
  const double s = 0.5 * q.half_side;
  std::vector<Cube> out;
  out.reserve(std::size_t{1} << d);
  for (int mask = 0; mask < (1 << d); ++mask) {
    Cube c{q.center, s};
    // Axis 0 is the slowest varying bit so children come out in lexicographic order.
    for (int i = 0; i < d; ++i) c.center[i] += ((mask >> (d - 1 - i)) & 1) ? s : -s;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------

Domain::Domain(int d, double L, int N) : d_(d), L_(L), N_(N) {
  require(d >= 1 && d <= kMaxDim, ErrorKind::InvalidArgument, "domain dimension must be 1, 2 or 3");
  require(std::isfinite(L) && L > 0.0, ErrorKind::InvalidArgument, "domain half-width L must be positive");
  require(N >= 8 && (N & (N - 1)) == 0, ErrorKind::InvalidArgument, "cells per axis N must be a power of two >= 8");
  h_ = 2.0 * L / N;
  cell_volume_ = std::pow(h_, d);
  size_ = 1;
  for (int i = 0; i < d; ++i) size_ *= static_cast<std::size_t>(N);
  std::size_t s = 1;
  for (int i = d - 1; i >= 0; --i) {
    strides_[static_cast<std::size_t>(i)] = s;
    s *= static_cast<std::size_t>(N);
  }
}

Index Domain::index(std::size_t flat) const {
  Index idx{0, 0, 0};
  for (int i = 0; i < d_; ++i) {
    idx[static_cast<std::size_t>(i)] = static_cast<int>(flat / strides_[static_cast<std::size_t>(i)]);
    flat %= strides_[static_cast<std::size_t>(i)];
  }
  return idx;
}

std::size_t Domain::flat(const Index& idx) const {
  std::size_t f = 0;
  for (int i = 0; i < d_; ++i)
    f += static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]) * strides_[static_cast<std::size_t>(i)];
  return f;
}

Point Domain::point(std::size_t flat_index) const {
  const Index idx = index(flat_index);
  Point p;
  p.dim = d_;
  for (int i = 0; i < d_; ++i) p[i] = coord(idx[static_cast<std::size_t>(i)]);
  return p;
}

bool Domain::inside(const Cube& q, double tol) const {
  const double t = tol * std::max(1.0, L_);
  for (int i = 0; i < d_; ++i)
    if (q.lo(i) < -L_ - t || q.hi(i) > L_ + t) return false;
  return true;
}

std::pair<int, int> Domain::points_in(double a, double b) const {
  int lo = static_cast<int>(std::ceil((a + L_) / h_ - 0.5 - 1e-9));
  int hi = static_cast<int>(std::floor((b + L_) / h_ - 0.5 + 1e-9));
  return {std::max(lo, 0), std::min(hi, N_ - 1)};
}

std::size_t Domain::nearest(const Point& p) const {
  Index idx{0, 0, 0};
  for (int i = 0; i < d_; ++i) {
    const int k = static_cast<int>(std::floor((p[i] + L_) / h_));
    idx[static_cast<std::size_t>(i)] = std::clamp(k, 0, N_ - 1);
  }
  return flat(idx);
}

Json Domain::to_json() const { return Json{{"d", d_}, {"L", L_}, {"N", N_}}; }

Domain Domain::from_json(const Json& j) {
  require(j.is_object(), ErrorKind::Config, "domain spec must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    require(it.key() == "d" || it.key() == "L" || it.key() == "N", ErrorKind::Config,
            "unknown key '" + it.key() + "' in domain spec");
  require(j.contains("d") && j.at("d").is_number_integer(), ErrorKind::Config, "domain needs integer 'd'");
  require(j.contains("L") && j.at("L").is_number(), ErrorKind::Config, "domain needs numeric 'L'");
  require(j.contains("N") && j.at("N").is_number_integer(), ErrorKind::Config, "domain needs integer 'N'");
  try {
    return Domain(j.at("d").get<int>(), j.at("L").get<double>(), j.at("N").get<int>());
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
}

// ---------------------------------------------------------------------------

bool Overlap::empty() const {
  for (int i = 0; i < dim; ++i)
    if (axes[static_cast<std::size_t>(i)].empty()) return true;
  return false;
}

namespace {
double snap(double u) {
  const double r = std::round(u);
  return std::abs(u - r) < 1e-9 ? r : u;
}
}  // namespace

Overlap overlap(const Domain& dom, const Cube& q) {
  std::array<double, kMaxDim> lo{}, hi{};
  for (int i = 0; i < dom.dim(); ++i) {
    lo[static_cast<std::size_t>(i)] = q.lo(i);
    hi[static_cast<std::size_t>(i)] = q.hi(i);
  }
  return overlap_box(dom, lo, hi);
}

Overlap overlap_box(const Domain& dom, const std::array<double, kMaxDim>& box_lo,
                    const std::array<double, kMaxDim>& box_hi) {
  Overlap ov;
  ov.dim = dom.dim();
  const double L = dom.half_width(), h = dom.h();
  const int N = dom.cells_per_axis();
  for (int i = 0; i < ov.dim; ++i) {
    AxisSpan& ax = ov.axes[static_cast<std::size_t>(i)];
    const double ua = snap((box_lo[static_cast<std::size_t>(i)] + L) / h);
    const double ub = snap((box_hi[static_cast<std::size_t>(i)] + L) / h);
    if (!(ub > ua)) return ov;  // leaves this axis empty
    int lo = static_cast<int>(std::floor(ua));
    int hi = static_cast<int>(std::ceil(ub)) - 1;
    lo = std::max(lo, 0);
    hi = std::min(hi, N - 1);
    if (lo > hi) return ov;
    ax.lo = lo;
    ax.hi = hi;
    ax.w_lo = std::min(ub, lo + 1.0) - std::max(ua, static_cast<double>(lo));
    ax.w_hi = std::min(ub, hi + 1.0) - std::max(ua, static_cast<double>(hi));
  }
  return ov;
}

// ---------------------------------------------------------------------------

SampledFunction::SampledFunction(Domain dom, std::vector<double> values) : dom_(dom), v_(std::move(values)) {
  require(v_.size() == dom_.size(), ErrorKind::InvalidArgument, "sample count does not match the domain");
  for (double x : v_) require(std::isfinite(x), ErrorKind::InvalidArgument, "sampled values must be finite");
  nonneg_ = std::all_of(v_.begin(), v_.end(), [](double x) { return x >= 0.0; });
  const int d = dom_.dim();
  const std::size_t M = static_cast<std::size_t>(dom_.cells_per_axis()) + 1;
  const int N = dom_.cells_per_axis();
  if (d == 1) {
    prefix_.assign(M, 0.0L);
    for (int i = 0; i < N; ++i) prefix_[static_cast<std::size_t>(i) + 1] = prefix_[static_cast<std::size_t>(i)] + v_[static_cast<std::size_t>(i)];
  } else if (d == 2) {
    prefix_.assign(M * M, 0.0L);
    for (std::size_t i = 1; i < M; ++i)
      for (std::size_t j = 1; j < M; ++j)
        prefix_[i * M + j] = v_[(i - 1) * (M - 1) + (j - 1)] + prefix_[(i - 1) * M + j] +
                             prefix_[i * M + j - 1] - prefix_[(i - 1) * M + j - 1];
  } else {
    prefix_.assign(M * M * M, 0.0L);
    auto P = [&](std::size_t i, std::size_t j, std::size_t k) -> long double& { return prefix_[(i * M + j) * M + k]; };
    const std::size_t n = M - 1;
    for (std::size_t i = 1; i < M; ++i)
      for (std::size_t j = 1; j < M; ++j)
        for (std::size_t k = 1; k < M; ++k)
          P(i, j, k) = v_[((i - 1) * n + (j - 1)) * n + (k - 1)] + P(i - 1, j, k) + P(i, j - 1, k) +
                       P(i, j, k - 1) - P(i - 1, j - 1, k) - P(i - 1, j, k - 1) - P(i, j - 1, k - 1) +
                       P(i - 1, j - 1, k - 1);
  }
}

long double SampledFunction::box_sum(const Index& lo, const Index& hi) const {
  const int d = dom_.dim();
  const std::size_t M = static_cast<std::size_t>(dom_.cells_per_axis()) + 1;
  const auto a = [&](int i) { return static_cast<std::size_t>(lo[static_cast<std::size_t>(i)]); };
  const auto b = [&](int i) { return static_cast<std::size_t>(hi[static_cast<std::size_t>(i)]) + 1; };
  if (d == 1) return prefix_[b(0)] - prefix_[a(0)];
  if (d == 2) {
    auto P = [&](std::size_t i, std::size_t j) { return prefix_[i * M + j]; };
    return P(b(0), b(1)) - P(a(0), b(1)) - P(b(0), a(1)) + P(a(0), a(1));
  }
  auto P = [&](std::size_t i, std::size_t j, std::size_t k) { return prefix_[(i * M + j) * M + k]; };
  return P(b(0), b(1), b(2)) - P(a(0), b(1), b(2)) - P(b(0), a(1), b(2)) - P(b(0), b(1), a(2)) +
         P(a(0), a(1), b(2)) + P(a(0), b(1), a(2)) + P(b(0), a(1), a(2)) - P(a(0), a(1), a(2));
}

double SampledFunction::weighted_sum(const Overlap& ov) const {
  if (ov.empty()) return 0.0;
  // Per axis the weight vector is 1 on [lo, hi] corrected at both ends; expand the
  // tensor product into at most 3^d box sums.
  struct Seg {
    int lo, hi;
    double c;
  };
  const int d = ov.dim;
  std::array<std::array<Seg, 3>, kMaxDim> segs{};
  std::array<int, kMaxDim> nseg{};
  for (int i = 0; i < d; ++i) {
    const AxisSpan& ax = ov.axes[static_cast<std::size_t>(i)];
    auto& s = segs[static_cast<std::size_t>(i)];
    int& n = nseg[static_cast<std::size_t>(i)];
    if (ax.lo == ax.hi) {
      s[n++] = {ax.lo, ax.lo, ax.w_lo};
    } else {
      s[n++] = {ax.lo, ax.hi, 1.0};
      if (ax.w_lo != 1.0) s[n++] = {ax.lo, ax.lo, ax.w_lo - 1.0};
      if (ax.w_hi != 1.0) s[n++] = {ax.hi, ax.hi, ax.w_hi - 1.0};
    }
  }
  long double total = 0.0L;
  std::array<int, kMaxDim> pick{0, 0, 0};
  while (true) {
    Index lo{0, 0, 0}, hi{0, 0, 0};
    double c = 1.0;
    for (int i = 0; i < d; ++i) {
      const Seg& s = segs[static_cast<std::size_t>(i)][static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
      lo[static_cast<std::size_t>(i)] = s.lo;
      hi[static_cast<std::size_t>(i)] = s.hi;
      c *= s.c;
    }
    total += c * box_sum(lo, hi);
    int axis = d - 1;
    while (axis >= 0) {
      if (++pick[static_cast<std::size_t>(axis)] < nseg[static_cast<std::size_t>(axis)]) break;
      pick[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  // Inclusion-exclusion can leave rounding residue of either sign on empty boxes.
  if (nonneg_ && total < 0.0L) return 0.0;
  return static_cast<double>(total);
}

double SampledFunction::integrate(const Cube& q) const {
  return dom_.cell_volume() * weighted_sum(overlap(dom_, q));
}

double SampledFunction::total() const { return dom_.cell_volume() * static_cast<double>(prefix_.back()); }

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

bool SampledFunction::nonnegative() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return x >= 0.0; });
}

bool SampledFunction::compactly_inside() const {
  const double margin = dom_.half_width() / 4.0;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (v_[i] == 0.0) continue;
    const Point p = dom_.point(i);
    for (int a = 0; a < dom_.dim(); ++a)
      if (dom_.half_width() - std::abs(p[a]) < margin - 0.5 * dom_.h()) return false;
  }
  return true;
}

SampledFunction SampledFunction::abs() const {
  return map([](double x) { return std::abs(x); });
}

SampledFunction SampledFunction::scaled(double c) const {
  return map([c](double x) { return c * x; });
}

SampledFunction SampledFunction::plus(const SampledFunction& o) const {
  require(o.dom_ == dom_, ErrorKind::InvalidArgument, "functions live on different domains");
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = v_[i] + o.v_[i];
  return SampledFunction(dom_, std::move(out));
}

SampledFunction SampledFunction::times(const SampledFunction& o) const {
  require(o.dom_ == dom_, ErrorKind::InvalidArgument, "functions live on different domains");
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = v_[i] * o.v_[i];
  return SampledFunction(dom_, std::move(out));
}

// ---------------------------------------------------------------------------

CubeFamily CubeFamily::standard(const Domain& dom, BoundaryPolicy policy, double first_factor) {
  require(first_factor > 0.0, ErrorKind::InvalidArgument, "family ladder must start above zero");
  CubeFamily fam;
  fam.policy = policy;
  const double top = std::sqrt(static_cast<double>(dom.dim())) * dom.half_width();
  for (double s = first_factor * dom.h();; s *= 2.0) {
    fam.half_sides.push_back(s);
    if (s >= top * (1.0 - 1e-12)) break;
  }
  return fam;
}

// ---------------------------------------------------------------------------

ShiftedDyadicGrids::ShiftedDyadicGrids(int d) : d_(d), count_(1) {
  require(d >= 1 && d <= kMaxDim, ErrorKind::InvalidArgument, "dyadic grids need d in 1..3");
  for (int i = 0; i < d; ++i) count_ *= 3;
}

Index ShiftedDyadicGrids::shift(int grid) const {
  require(grid >= 0 && grid < count_, ErrorKind::InvalidArgument, "dyadic grid index out of range");
  Index tau{0, 0, 0};
  for (int i = d_ - 1; i >= 0; --i) {
    tau[static_cast<std::size_t>(i)] = grid % 3;
    grid /= 3;
  }
  return tau;
}

double ShiftedDyadicGrids::offset(int grid, int axis, int level) const {
  const int tau = shift(grid)[static_cast<std::size_t>(axis)];
  const double sign = (level % 2 == 0) ? 1.0 : -1.0;
  return sign * tau * std::ldexp(1.0, level) / 3.0;
}

Cube ShiftedDyadicGrids::cube_containing(int grid, int level, const Point& x) const {
  const double S = std::ldexp(1.0, level);
  Cube c{x, 0.5 * S};
  for (int i = 0; i < d_; ++i) {
    const double o = offset(grid, i, level);
    const double m = std::floor((x[i] - o) / S);
    c.center[i] = o + m * S + 0.5 * S;
  }
  return c;
}

DyadicHit find_containing_dyadic(const ShiftedDyadicGrids& grids, const Cube& q) {
  require(q.dim() == grids.dim(), ErrorKind::InvalidArgument, "cube and grids differ in dimension");
  require(q.half_side > 0.0, ErrorKind::InvalidArgument, "cube must have positive side");
  const double ell = q.side();
  const int k_min = static_cast<int>(std::ceil(std::log2(ell) - 1e-12));
  const int k_max = static_cast<int>(std::floor(std::log2(3.0 * ell) + 1e-12));
  double scale = ell;
  for (int i = 0; i < q.dim(); ++i) scale = std::max(scale, std::abs(q.center[i]));
  const double tol = 1e-12 * scale;
  for (int k = k_min; k <= k_max; ++k)
    for (int g = 0; g < grids.count(); ++g) {
      const Cube c = grids.cube_containing(g, k, q.center);
      if (c.contains(q, tol)) return DyadicHit{g, k, c};
    }
  fail(ErrorKind::Internal, "no shifted dyadic cube contains the query cube (construction bug)");
}

std::vector<Point> random_points(int d, std::size_t n, double half_width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-half_width, half_width);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p.dim = d;
    for (int i = 0; i < d; ++i) p[i] = U(rng);
  }
  return pts;
}

}  // namespace rhomax
