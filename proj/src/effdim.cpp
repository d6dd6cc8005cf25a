#include "pikl/effdim.hpp"
#include "pikl/real_basis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pikl {

namespace {

// Eigenvalues of S* S, S = L^{-1} C, M = L L*, in increasing order.
template <typename Matrix>
VectorXr gram_eigenvalues(const Matrix& m, const Matrix& c) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw FactorizationError("compute_spectrum: M is not numerically positive definite",
                             m.diagonal().real().minCoeff());
  Matrix s = c;
  llt.matrixL().solveInPlace(s);
  Matrix g = s.adjoint() * s;
  g = 0.5 * (g + g.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericError("compute_spectrum: eigensolver did not converge");
  return eig.eigenvalues();
}

}  // namespace

SpectrumReport compute_spectrum(const HermitianMatrix& m, const HermitianMatrix& c) {
  if (m.size() != c.size()) throw DimensionError("compute_spectrum: M and C sizes differ");
  // Real operators on symmetric domains keep both matrices conjugate
  // invariant; the unitary change to the real basis leaves the spectrum
  // unchanged and makes the dense work about four times cheaper.
  const bool real_path = conjugate_invariant(m.entries) && conjugate_invariant(c.entries);
  VectorXr ev = real_path ? gram_eigenvalues<MatrixXr>(to_real_basis(m.entries), to_real_basis(c.entries))
                          : gram_eigenvalues<MatrixXc>(m.entries, c.entries);
  ev.reverseInPlace();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-10)
      throw NumericError("compute_spectrum: eigenvalue " + std::to_string(ev(i)) + " below -1e-10");
    ev(i) = std::max(ev(i), 0.0);
  }
  return SpectrumReport{std::move(ev), m.modes.m(), 0.0, 0.0};
}

SpectrumReport compute_spectrum(const GramSpec& spec, unsigned threads) {
  SpectrumReport r = compute_spectrum(assemble_m(spec, threads), assemble_c(spec, threads));
  r.lambda = spec.lambda;
  r.mu = spec.mu;
  return r;
}

real effective_dimension(const VectorXr& eigenvalues) {
  real sum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const real s = std::max(eigenvalues(i), 0.0);
    sum += s / (1.0 + s);
  }
  return sum;
}

real effective_dimension(const SpectrumReport& report) { return effective_dimension(report.eigenvalues); }

Schedule Schedule::log_default() {
  return Schedule{[](real n) { return std::log(n) / n; }, [](real n) { return 1.0 / std::log(n); }};
}

std::vector<EffDimPoint> effdim_curve(const GramSpec& base, const Schedule& schedule,
                                      const std::vector<real>& ns, unsigned threads) {
  GramSpec probe = base;
  probe.lambda = 1.0;
  probe.mu = 1.0;
  const VectorXr diag = sobolev_diagonal(probe.modes, probe.s, probe.scaling);
  const HermitianMatrix pen = assemble_penalty(probe, threads);
  const HermitianMatrix c = assemble_c(probe, threads);
  std::vector<EffDimPoint> out;
  for (real n : ns) {
    const real lam = schedule.lambda(n);
    const real mu = schedule.mu(n);
    GramSpec check = probe;
    check.lambda = lam;
    check.mu = mu;
    check.validate();
    const SpectrumReport r = compute_spectrum(combine_m(diag, pen, lam, mu), c);
    out.push_back({base.modes.m(), n, lam, mu, effective_dimension(r)});
  }
  return out;
}

MConvergence m_convergence_diagnostic(const GramSpec& base, const std::vector<int>& ms,
                                      const std::vector<real>& ns, const Schedule& schedule,
                                      unsigned threads) {
  if (ms.empty() || ns.empty()) throw ConfigError("m_convergence_diagnostic: empty m or n list");
  for (std::size_t i = 1; i < ms.size(); ++i)
    if (ms[i] <= ms[i - 1]) throw ConfigError("m_convergence_diagnostic: m list must increase");
  const real n_max = *std::max_element(ns.begin(), ns.end());
  MConvergence out;
  std::optional<real> prev;
  for (int m : ms) {
    GramSpec spec = base;
    spec.modes = ModeSet(m, base.modes.dim(), base.modes.half_width());
    const auto curve = effdim_curve(spec, schedule, ns, threads);
    real at_max = 0.0;
    for (const auto& p : curve) {
      out.table.push_back(p);
      if (p.n == n_max) at_max = p.n_eff;
    }
    if (prev && !out.m_star && std::abs(at_max - *prev) <= 0.01 * std::abs(*prev)) out.m_star = m;
    prev = at_max;
  }
  return out;
}

real loglog_slope(const std::vector<real>& x, const std::vector<real>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("loglog_slope: need two or more points");
  real mx = 0.0;
  real my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<real>(x.size());
  my /= static_cast<real>(x.size());
  real sxy = 0.0;
  real sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const real dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void write_csv(const std::vector<EffDimPoint>& points, std::ostream& os) {
  const auto old = os.precision(17);
  os << "m,n,lambda,mu,N_eff\n";
  for (const auto& p : points) os << p.m << ',' << p.n << ',' << p.lambda << ',' << p.mu << ',' << p.n_eff << '\n';
  os.precision(old);
}

}  // namespace pikl
