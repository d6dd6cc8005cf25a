#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pikl/diffop.hpp"
#include "pikl/domain.hpp"
#include "pikl/modes.hpp"
#include "pikl/types.hpp"

namespace pikl {

/// Frequency weight w(k) of the periodic Sobolev norm sum_k (1 + w(k)) |z_k|^2.
enum class SobolevScaling {
  /// (|k|^2 / (2L)^2)^s, isotropic per axis. Default.
  PerAxis,
  /// (|k|^2 / (2L)^d)^s.
  Volume,
};

real sobolev_weight(std::span<const int> k, int s, real half_width, SobolevScaling scaling);

/// Hyperparameters and ingredients of the PIKL quadratic form.
struct GramSpec {
  ModeSet modes;
  int s;
  real lambda;
  real mu;
  LinearDiffOp op;
  Domain dom;
  SobolevScaling scaling = SobolevScaling::PerAxis;

  /// Throws ConfigError/DimensionError unless lambda > 0, mu >= 0,
  /// op.order() <= s and all dimensions and half-widths agree.
  void validate() const;
};

/// Dense Hermitian matrix over a mode set.
struct HermitianMatrix {
  ModeSet modes;
  MatrixXc entries;

  Eigen::Index size() const noexcept { return entries.rows(); }
  /// max |A - A*| / max |A|.
  real asymmetry() const;
};

/// F(Delta) for every difference Delta in {-2m..2m}^d, linearized like
/// ModeSet(2m, d, L).
std::vector<cplx> char_fn_table(const Domain& dom, const ModeSet& modes, unsigned threads = 0);

/// Diagonal 1 + w(k) in mode order.
VectorXr sobolev_diagonal(const ModeSet& modes, int s, SobolevScaling scaling);

/// Penalty block T with z* T z = integral over the domain of |D f|^2:
/// T_ab = conj(P(a)) P(b) F(a - b).
HermitianMatrix assemble_penalty(const GramSpec& spec, unsigned threads = 0);

/// M = lambda diag(1 + w) + mu T.
HermitianMatrix assemble_m(const GramSpec& spec, unsigned threads = 0);

/// M from precomputed pieces, for sweeps over (lambda, mu).
HermitianMatrix combine_m(const VectorXr& diagonal, const HermitianMatrix& penalty, real lambda,
                          real mu);

/// C_ab = F(a - b): z* C z is the integral over the domain of |f|^2.
HermitianMatrix assemble_c(const GramSpec& spec, unsigned threads = 0);

/// Real part of z* M z; throws NumericError if the imaginary residue exceeds
/// 1e-10 relative.
real penalty_form(const HermitianMatrix& m, const VectorXc& z);
real penalty_form(const GramSpec& spec, const VectorXc& z);

/// sum_k (1 + w(k)) |z_k|^2.
real sobolev_norm_sq(const ModeSet& modes, int s, SobolevScaling scaling, const VectorXc& z);

/// Text dump: a header line with m, d, L, then one row per line as
/// re,im pairs.
void write_csv(const HermitianMatrix& a, std::ostream& os);
/// Binary dump: magic, m, d, L, size, row-major complex pairs.
void write_binary(const HermitianMatrix& a, std::ostream& os);
HermitianMatrix read_binary_matrix(std::istream& is);

}  // namespace pikl
