#pragma once

#include <span>
#include <string>
#include <vector>

#include "pikl/modes.hpp"
#include "pikl/types.hpp"

namespace pikl {

/// One term a_alpha * d^alpha of a differential operator.
struct DiffTerm {
  std::vector<int> alpha;
  real coeff;
};

/// Constant-coefficient linear operator D = sum_alpha a_alpha d^alpha with
/// real coefficients.
class LinearDiffOp {
 public:
  LinearDiffOp(int d, std::vector<DiffTerm> terms);

  int dim() const noexcept { return d_; }
  /// max |alpha| over the terms.
  int order() const noexcept { return order_; }
  const std::vector<DiffTerm>& terms() const noexcept { return terms_; }
  std::string describe() const;

  static LinearDiffOp identity(int d);
  /// d/dx in one dimension.
  static LinearDiffOp ddx();
  /// f'' + f' + f.
  static LinearDiffOp harmonic_oscillator();
  /// d_t - d_xx on (t, x).
  static LinearDiffOp heat();
  /// d_t + beta d_x on (t, x).
  static LinearDiffOp convection(real beta);
  /// d_tt - c2 d_xx on (t, x).
  static LinearDiffOp wave(real c2);
  /// Laplacian in d dimensions.
  static LinearDiffOp laplace(int d);

 private:
  int d_;
  int order_ = 0;
  std::vector<DiffTerm> terms_;
};

/// a * p + b * q, merging equal exponents.
LinearDiffOp linear_combination(real a, const LinearDiffOp& p, real b, const LinearDiffOp& q);

/// Fourier multiplier of D on the basis used by synthesize: for
/// f = sum_k z_k conj(phi_k), D f = sum_k P(k) z_k conj(phi_k) with
/// P(k) = sum_alpha a_alpha (-i pi / (2L))^{|alpha|} prod_l k_l^{alpha_l}.
cplx symbol(const LinearDiffOp& op, std::span<const int> k, real half_width);

/// Coefficients of D f for f with coefficients z.
VectorXc apply_in_hm(const LinearDiffOp& op, const VectorXc& z, const ModeSet& modes);

}  // namespace pikl
