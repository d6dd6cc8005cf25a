#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pikl/types.hpp"

namespace pikl {

/// Bessel function of the first kind of order one; absolute error below
/// 1e-12 on [0, 1e3].
real bessel_j1(real x);

/// Axis-aligned bounding box.
struct Box {
  std::vector<real> lo;
  std::vector<real> hi;
  real volume() const;
};

/// Symbolic domain Omega inside [-L, L]^d, described by its characteristic
/// function F(k) = (4L)^{-d} \int_Omega exp(i pi <k,x> / (2L)) dx.
///
/// Domains are immutable values built from closed-form leaves (cube, disk,
/// full torus) and composition rules (dilation, translation, disjoint union,
/// Cartesian product). A Monte-Carlo leaf covers shapes given only as an
/// indicator function.
///
/// Disjointness of union parts is NOT checked: the caller declares it. An
/// overlapping union silently counts the overlap twice.
class Domain {
 public:
  using Indicator = std::function<bool(std::span<const real>)>;

  /// [-L, L]^d.
  static Domain cube(int d, real half_width);
  /// Disk of radius L centred at the origin (d = 2).
  static Domain ball2d(real half_width);
  /// The whole extended torus [-2L, 2L]^d. Not a subset of [-L, L]^d; used
  /// for axes that are periodic over the full torus (F vanishes at nonzero
  /// integer frequencies).
  static Domain torus(int d, real half_width);
  /// a * inner, |a| <= 1.
  static Domain scaled(const Domain& inner, real a);
  /// inner + shift; inner must lie in [-L/2, L/2]^d and |shift|_inf < L/2.
  static Domain translated(const Domain& inner, std::vector<real> shift);
  /// Union of parts the caller guarantees to be pairwise disjoint.
  static Domain disjoint_union(const std::vector<Domain>& parts);
  /// left x right; both factors must share L.
  static Domain product(const Domain& left, const Domain& right);
  /// Monte-Carlo estimate from `samples` uniform draws in `box`
  /// (deterministic given `seed`). Requires samples >= 1e4.
  static Domain monte_carlo(Indicator indicator, Box box, real half_width,
                            std::size_t samples, std::uint64_t seed);

  int dim() const noexcept;
  real half_width() const noexcept;
  /// Lebesgue measure (exact for closed-form trees, estimated for Monte-Carlo leaves).
  real volume() const;
  Box bounding_box() const;
  bool contains(std::span<const real> x) const;
  bool is_monte_carlo() const noexcept;
  std::string describe() const;

  /// F at a real frequency vector (dilations evaluate leaves off the integer lattice).
  cplx char_fn(std::span<const real> k) const;
  cplx char_fn(std::span<const int> k) const;

  struct Node;

 private:
  explicit Domain(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

cplx char_fn(const Domain& dom, std::span<const int> k);

/// Direct Monte-Carlo estimate for a Monte-Carlo leaf; throws ConfigError for
/// any other variant.
cplx char_fn_monte_carlo(const Domain& dom, std::span<const int> k);

/// Cube leaf evaluated directly: prod_j sin(pi k_j / 2) / (pi k_j), with the
/// k_j = 0 factor equal to 1/2.
real cube_char_fn(std::span<const real> k);

/// Disk leaf: J1(pi |k| / 2) / (4 |k|), equal to pi/16 at k = 0.
real ball2d_char_fn(std::span<const real> k);

}  // namespace pikl
