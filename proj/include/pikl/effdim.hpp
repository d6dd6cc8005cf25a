#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pikl/gram.hpp"

namespace pikl {

/// Eigenvalues of C M^{-1} C, nonincreasing and clamped at zero.
struct SpectrumReport {
  VectorXr eigenvalues;
  int m = 0;
  real lambda = 0.0;
  real mu = 0.0;
};

/// Spectrum from S* S with S = L^{-1} C, M = L L*.
SpectrumReport compute_spectrum(const HermitianMatrix& m, const HermitianMatrix& c);
SpectrumReport compute_spectrum(const GramSpec& spec, unsigned threads = 0);

/// sum_k sigma_k / (1 + sigma_k).
real effective_dimension(const VectorXr& eigenvalues);
real effective_dimension(const SpectrumReport& report);

/// (lambda_n, mu_n) as functions of n.
struct Schedule {
  std::function<real(real)> lambda;
  std::function<real(real)> mu;

  /// lambda_n = log(n) / n, mu_n = 1 / log(n).
  static Schedule log_default();
};

struct EffDimPoint {
  int m;
  real n;
  real lambda;
  real mu;
  real n_eff;
};

/// N(lambda_n, mu_n) for each n at the mode set of `base`.
std::vector<EffDimPoint> effdim_curve(const GramSpec& base, const Schedule& schedule,
                                      const std::vector<real>& ns, unsigned threads = 0);

struct MConvergence {
  std::vector<EffDimPoint> table;
  /// First m whose N at the largest n moved by at most 1% from the previous m.
  std::optional<int> m_star;
};

/// Sweeps m (increasing) and n. The mode set of `base` supplies d and L.
MConvergence m_convergence_diagnostic(const GramSpec& base, const std::vector<int>& ms,
                                      const std::vector<real>& ns, const Schedule& schedule,
                                      unsigned threads = 0);

/// Least-squares slope of log y against log x.
real loglog_slope(const std::vector<real>& x, const std::vector<real>& y);

/// Columns m,n,lambda,mu,N_eff.
void write_csv(const std::vector<EffDimPoint>& points, std::ostream& os);

}  // namespace pikl
