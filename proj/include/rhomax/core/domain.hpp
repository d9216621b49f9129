// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rhomax/core/young.hpp"

namespace rhomax {

inline constexpr int kMaxDim = 3;
using Index = std::array<int, kMaxDim>;

struct Point {
  int dim = 1;
  std::array<double, kMaxDim> x{};

  double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }
  double norm() const;
  Json to_json() const;
};

Point make_point(std::initializer_list<double> coords);
double distance(const Point& a, const Point& b);

enum class CubeClass { Subcritical, Critical, Supercritical };

/// Axis-parallel cube. The "radius" is the half-diagonal sqrt(d)*s, which is the
/// quantity inside every (1 + r/rho)^(-sigma) factor.
struct Cube {
  Point center;
  double half_side = 0.0;

  int dim() const { return center.dim; }
  double side() const { return 2.0 * half_side; }
  double radius() const;
  double measure() const;
  double lo(int i) const { return center[i] - half_side; }
  double hi(int i) const { return center[i] + half_side; }
  bool contains(const Point& p, double tol = 0.0) const;  // closed cube
  bool contains(const Cube& q, double tol = 0.0) const;
  bool intersects(const Cube& q) const;  // positive-measure overlap
  Cube scaled(double k) const { return Cube{center, half_side * k}; }
  Json to_json() const;
};

/// Q(x, r): cube centred at x with half-diagonal r.
Cube cube_from_radius(const Point& x, double r);
CubeClass classify(const Cube& q, double rho_at_center);
std::vector<Cube> dyadic_children(const Cube& q);

/// Uniform cell-centred grid on [-L, L]^d with N cells per axis.
class Domain {
 public:
  Domain() = default;
  Domain(int d, double L, int N);

  int dim() const { return d_; }
  double half_width() const { return L_; }
  int cells_per_axis() const { return N_; }
  double h() const { return h_; }
  double cell_volume() const { return cell_volume_; }
  std::size_t size() const { return size_; }

  double coord(int i) const { return -L_ + (i + 0.5) * h_; }
  Index index(std::size_t flat) const;
  std::size_t flat(const Index& idx) const;
  Point point(std::size_t flat) const;
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
  bool inside(const Cube& q, double tol = 1e-12) const;
  // Grid indices along an axis whose centres lie in [a, b] (closed); empty when lo > hi.
  std::pair<int, int> points_in(double a, double b) const;
  std::size_t nearest(const Point& p) const;

  Domain refined() const { return Domain(d_, L_, 2 * N_); }
  Domain with_half_width(double L) const { return Domain(d_, L, N_); }
  Json to_json() const;
  static Domain from_json(const Json& j);
  bool operator==(const Domain& o) const { return d_ == o.d_ && L_ == o.L_ && N_ == o.N_; }

 private:
  int d_ = 1;
  double L_ = 1.0;
  int N_ = 8;
  double h_ = 0.25;
  double cell_volume_ = 0.25;
  std::size_t size_ = 8;
  std::array<std::size_t, kMaxDim> strides_{1, 1, 1};
};

/// Overlap of a cube with the grid cells, per axis: cells lo..hi (clipped to the
/// domain), interior cells fully covered, end cells covered by the given fractions.
struct AxisSpan {
  int lo = 0, hi = -1;
  double w_lo = 0.0, w_hi = 0.0;
  bool empty() const { return hi < lo; }
  double weight(int i) const { return i == lo ? w_lo : (i == hi ? w_hi : 1.0); }
};

struct Overlap {
  int dim = 1;
  std::array<AxisSpan, kMaxDim> axes{};
  bool empty() const;
};

Overlap overlap(const Domain& dom, const Cube& q);
// Same for an axis box [lo, hi] (used for intersections of cubes).
Overlap overlap_box(const Domain& dom, const std::array<double, kMaxDim>& lo, const std::array<double, kMaxDim>& hi);

template <class F>
void for_each_cell(const Domain& dom, const Overlap& ov, F&& f) {
  if (ov.empty()) return;
  const int d = ov.dim;
  const auto& a0 = ov.axes[0];
  if (d == 1) {
    for (int i = a0.lo; i <= a0.hi; ++i) f(static_cast<std::size_t>(i), a0.weight(i));
    return;
  }
  const auto& a1 = ov.axes[1];
  if (d == 2) {
    for (int i = a0.lo; i <= a0.hi; ++i)
      for (int j = a1.lo; j <= a1.hi; ++j)
        f(static_cast<std::size_t>(i) * dom.stride(0) + static_cast<std::size_t>(j), a0.weight(i) * a1.weight(j));
    return;
  }
  const auto& a2 = ov.axes[2];
  for (int i = a0.lo; i <= a0.hi; ++i)
    for (int j = a1.lo; j <= a1.hi; ++j)
      for (int k = a2.lo; k <= a2.hi; ++k)
        f(static_cast<std::size_t>(i) * dom.stride(0) + static_cast<std::size_t>(j) * dom.stride(1) +
              static_cast<std::size_t>(k),
          a0.weight(i) * a1.weight(j) * a2.weight(k));
}

/// Grid samples with immutable d-dimensional prefix sums. Grid values are read as
/// the piecewise-constant interpolant, so cube integrals weight each cell by its
/// overlap with the cube; outside the domain the function is zero.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(Domain dom, std::vector<double> values);

  const Domain& domain() const { return dom_; }
  const std::vector<double>& values() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }
  std::size_t size() const { return v_.size(); }

  double integrate(const Cube& q) const;
  double average(const Cube& q) const { return integrate(q) / q.measure(); }
  // Cell-overlap-weighted sum and total overlap volume, no 1/|Q|.
  double weighted_sum(const Overlap& ov) const;
  double total() const;  // integral over the domain
  double max_abs() const;
  bool nonnegative() const;
  // Support at distance >= L/4 from the boundary.
  bool compactly_inside() const;

  SampledFunction abs() const;
  SampledFunction scaled(double c) const;
  SampledFunction plus(const SampledFunction& o) const;
  SampledFunction times(const SampledFunction& o) const;
  template <class F>
  SampledFunction map(F&& f) const {
    std::vector<double> out(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) out[i] = f(v_[i]);
    return SampledFunction(dom_, std::move(out));
  }

 private:
  long double box_sum(const Index& lo, const Index& hi) const;  // inclusive cell ranges

  Domain dom_;
  std::vector<double> v_;
  bool nonneg_ = true;
  // (N+1)^d, extended precision so that small boxes far from the origin keep
  // ~1e-19 relative accuracy after the inclusion-exclusion differences.
  std::vector<long double> prefix_;
};

enum class BoundaryPolicy { ZeroExtend, InsideOnly };

/// All grid-point centres times a geometric half-side ladder.
struct CubeFamily {
  std::vector<double> half_sides;
  BoundaryPolicy policy = BoundaryPolicy::ZeroExtend;

  // s_k = first * 2^k, first = first_factor * h, up to the first s >= sqrt(d) L.
  static CubeFamily standard(const Domain& dom, BoundaryPolicy policy = BoundaryPolicy::ZeroExtend,
                             double first_factor = 0.5);
};

/// 3^d dyadic grids with per-axis shifts tau/3 (tau in {0,1,2}); at level k the
/// shift is (-1)^k tau 2^k / 3, which keeps every grid nested across levels.
class ShiftedDyadicGrids {
 public:
  explicit ShiftedDyadicGrids(int d);
  int dim() const { return d_; }
  int count() const { return count_; }
  Index shift(int grid) const;
  double offset(int grid, int axis, int level) const;
  // Half-open grid cube of side 2^level containing x.
  Cube cube_containing(int grid, int level, const Point& x) const;

 private:
  int d_;
  int count_;
};

struct DyadicHit {
  int grid = -1;
  int level = 0;
  Cube cube;
};

DyadicHit find_containing_dyadic(const ShiftedDyadicGrids& grids, const Cube& q);

/// Visits the flat indices of grid points inside the closed cube.
template <class F>
void for_each_point_in(const Domain& dom, const Cube& q, F&& f) {
  const int d = dom.dim();
  std::array<std::pair<int, int>, kMaxDim> r{};
  for (int i = 0; i < d; ++i) {
    r[static_cast<std::size_t>(i)] = dom.points_in(q.lo(i), q.hi(i));
    if (r[static_cast<std::size_t>(i)].first > r[static_cast<std::size_t>(i)].second) return;
  }
  if (d == 1) {
    for (int i = r[0].first; i <= r[0].second; ++i) f(static_cast<std::size_t>(i));
    return;
  }
  Index idx{0, 0, 0};
  for (idx[0] = r[0].first; idx[0] <= r[0].second; ++idx[0])
    for (idx[1] = r[1].first; idx[1] <= r[1].second; ++idx[1]) {
      if (d == 2) {
        f(dom.flat(idx));
        continue;
      }
      for (idx[2] = r[2].first; idx[2] <= r[2].second; ++idx[2]) f(dom.flat(idx));
    }
}

/// Deterministic seeded sampling helpers.
std::vector<Point> random_points(int d, std::size_t n, double half_width, std::uint64_t seed);

}  // namespace rhomax
