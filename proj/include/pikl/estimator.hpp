#pragma once

#include <iosfwd>
#include <memory>
#include <span>

#include "pikl/gram.hpp"
#include "pikl/modes.hpp"
#include "pikl/types.hpp"

namespace pikl {

/// Observations (X_i, Y_i): X is n x d, Y has length n.
struct Dataset {
  MatrixXr X;
  VectorXr Y;

  std::size_t size() const noexcept { return static_cast<std::size_t>(Y.size()); }
  int dim() const noexcept { return static_cast<int>(X.cols()); }
  /// Throws unless rows match and every entry is finite.
  void validate() const;
  Dataset slice(std::size_t begin, std::size_t end) const;
};

Dataset concatenate(const Dataset& a, const Dataset& b);

/// Online statistics A = sum Phi(X_i) Phi(X_i)* and b = sum Phi(X_i) Y_i.
///
/// A_ab depends only on a - b, so the matrix is stored as the moments
/// G(Delta) = sum_i exp(i pi <Delta, X_i> / (2L)) over Delta in {-2m..2m}^d
/// and materialized by gram(). Adding batches one after another is
/// bit-identical to adding their concatenation.
class SufficientStats {
 public:
  explicit SufficientStats(const ModeSet& modes);

  const ModeSet& modes() const noexcept { return modes_; }
  std::size_t count() const noexcept { return n_; }
  const VectorXc& moments() const noexcept { return moments_; }
  const VectorXc& rhs() const noexcept { return b_; }

  /// Adds a batch in row order.
  void accumulate(const Dataset& batch);
  /// Adds a batch split into `threads` contiguous shards merged in order.
  void accumulate_parallel(const Dataset& batch, unsigned threads);
  void merge(const SufficientStats& other);

  /// Dense A.
  MatrixXc gram() const;

 private:
  ModeSet modes_;
  std::size_t n_ = 0;
  VectorXc moments_;
  VectorXc b_;
};

SufficientStats accumulate(SufficientStats stats, const Dataset& batch);

/// Fitted coefficients over a mode set.
struct PiklModel {
  ModeSet modes;
  VectorXc z;
};

/// Diagnostics of the last solve.
struct FitInfo {
  bool used_lu = false;
  /// True when the system was solved in the real cosine/sine basis.
  bool real_basis = false;
  real relative_residual = 0.0;
};

/// Solves (A + n M) z = b: Cholesky first, pivoted LU if Cholesky breaks
/// down. Throws FactorizationError when the relative residual exceeds 1e-8.
///
/// With real observations and real operator coefficients the system is
/// invariant under k -> -k with conjugation, and it is solved in the real
/// basis (z_k +- z_{-k}) / sqrt(2); the solution is then conjugate-symmetric
/// by construction. Other systems are solved in complex arithmetic.
PiklModel fit(const SufficientStats& stats, const HermitianMatrix& m, FitInfo* info = nullptr);

/// Real part of <z, Phi(x)>; throws NumericError if the imaginary part
/// exceeds 1e-8 (1 + |real part|).
real predict(const PiklModel& model, std::span<const real> x);
VectorXr predict(const PiklModel& model, const MatrixXr& points);

/// Kernel K(x, y) = Phi(x)* M^{-1} Phi(y), factorizing M once.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const HermitianMatrix& m);

  cplx operator()(std::span<const real> x, std::span<const real> y) const;
  /// K(X_i, X_j) for the rows of X.
  MatrixXc gram(const MatrixXr& X) const;
  /// K(x_i, Y_j) for rows of x and y.
  MatrixXc cross(const MatrixXr& x, const MatrixXr& y) const;

 private:
  MatrixXc whitened(const MatrixXr& points) const;

  ModeSet modes_;
  std::shared_ptr<const Eigen::LLT<MatrixXc>> llt_;
};

cplx kernel_eval(const HermitianMatrix& m, std::span<const real> x, std::span<const real> y);

/// Prediction through the n x n system (K + n I)^{-1} Y.
VectorXr predict_dual(const HermitianMatrix& m, const Dataset& data, const MatrixXr& queries);

/// Model files: a mode header followed by the coefficients. Both formats
/// round-trip exactly.
void write_csv(const PiklModel& model, std::ostream& os);
PiklModel read_csv_model(std::istream& is);
void write_binary(const PiklModel& model, std::ostream& os);
PiklModel read_binary_model(std::istream& is);

}  // namespace pikl
