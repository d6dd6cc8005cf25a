#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pikl/types.hpp"

namespace pikl {

/// Integer multi-indices k in {-m,...,m}^d of the truncated Fourier basis on
/// the extended torus [-2L, 2L]^d.
///
/// Modes are linearized lexicographically: axis 0 is the most significant
/// digit and every axis runs from -m to m. This ordering is shared by every
/// vector and matrix in the library and is written into serialized files.
class ModeSet {
 public:
  /// Upper bound on (2m+1)^d; a dense complex matrix of this side is ~2 GB.
  static constexpr std::size_t default_budget = 11000;

  ModeSet(int m, int d, real half_width, std::size_t budget = default_budget);

  int m() const noexcept { return m_; }
  int dim() const noexcept { return d_; }
  /// L: half-width of the original box, so the torus is [-2L, 2L]^d.
  real half_width() const noexcept { return half_width_; }
  /// Number of modes per axis, 2m+1.
  std::size_t side() const noexcept { return static_cast<std::size_t>(2 * m_ + 1); }
  /// Total number of modes, (2m+1)^d.
  std::size_t size() const noexcept { return size_; }
  /// pi / (2L): the angular frequency of mode k along an axis is k times this.
  real frequency_scale() const noexcept { return pi / (2.0 * half_width_); }

  /// Multi-index of linear position i.
  std::vector<int> mode(std::size_t i) const;
  void mode(std::size_t i, std::span<int> out) const;
  /// Linear position of multi-index k; throws DimensionError when k is
  /// outside the set.
  std::size_t index_of(std::span<const int> k) const;
  bool contains(std::span<const int> k) const;

  bool operator==(const ModeSet& other) const noexcept {
    return m_ == other.m_ && d_ == other.d_ && half_width_ == other.half_width_;
  }

 private:
  int m_;
  int d_;
  real half_width_;
  std::size_t size_;
};

/// All modes in linear order.
std::vector<std::vector<int>> enumerate_modes(const ModeSet& modes);

/// Phi_m(x): entry k is (4L)^{-d/2} exp(i pi <k,x> / (2L)).
VectorXc feature_map(const ModeSet& modes, std::span<const real> x);

/// Evaluates f(x) = <z, Phi_m(x)> = sum_k z_k conj(Phi_k(x)) at one point.
cplx synthesize(const ModeSet& modes, const VectorXc& z, std::span<const real> x);

/// Evaluates f at every row of `points` (n x d).
std::vector<cplx> synthesize(const ModeSet& modes, const VectorXc& z, const MatrixXr& points);

/// Per-axis phase table: out[j * side + (k + m)] = exp(sign * i pi k x_j / (2L)).
void axis_phases(const ModeSet& modes, std::span<const real> x, real sign, std::span<cplx> out);

}  // namespace pikl
