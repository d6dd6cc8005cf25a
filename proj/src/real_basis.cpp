#include "pikl/real_basis.hpp"

#include <cmath>

namespace pikl {

namespace {

const real kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

bool conjugate_symmetric(const VectorXc& b) {
  const Eigen::Index n = b.size();
  const real tol = 1e-13 * (b.cwiseAbs().maxCoeff() + 1e-300);
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(b(n - 1 - i) - std::conj(b(i))) > tol) return false;
  return true;
}

bool conjugate_invariant(const MatrixXc& h) {
  const Eigen::Index n = h.rows();
  const real tol = 1e-13 * h.cwiseAbs().maxCoeff();
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      if (std::abs(h(n - 1 - r, n - 1 - c) - std::conj(h(r, c))) > tol) return false;
  return true;
}

// Q w with z_i = (w_i + i w_j) / sqrt2, z_j = (w_i - i w_j) / sqrt2, j = N-1-i < i.
VectorXc from_real_basis(const VectorXr& w) {
  const Eigen::Index n = w.size();
  const Eigen::Index c = (n - 1) / 2;
  VectorXc z(n);
  for (Eigen::Index i = 0; i < c; ++i) {
    const Eigen::Index j = n - 1 - i;
    z(i) = kInvSqrt2 * cplx(w(i), w(j));
    z(j) = kInvSqrt2 * cplx(w(i), -w(j));
  }
  z(c) = w(c);
  return z;
}

// Q* b for conjugate-symmetric b.
VectorXr to_real_basis(const VectorXc& b) {
  const Eigen::Index n = b.size();
  const Eigen::Index c = (n - 1) / 2;
  VectorXr w(n);
  for (Eigen::Index i = 0; i < c; ++i) {
    const Eigen::Index j = n - 1 - i;
    w(i) = kInvSqrt2 * (b(i) + b(j)).real();
    w(j) = kInvSqrt2 * (cplx(0.0, -1.0) * (b(i) - b(j))).real();
  }
  w(c) = b(c).real();
  return w;
}

// Re(Q* H Q) for a conjugate-invariant Hermitian H.
MatrixXr to_real_basis(const MatrixXc& h) {
  const Eigen::Index n = h.rows();
  const Eigen::Index c = (n - 1) / 2;
  MatrixXc hq(n, n);
  for (Eigen::Index i = 0; i < c; ++i) {
    const Eigen::Index j = n - 1 - i;
    hq.col(i) = kInvSqrt2 * (h.col(i) + h.col(j));
    hq.col(j) = cplx(0.0, kInvSqrt2) * (h.col(i) - h.col(j));
  }
  hq.col(c) = h.col(c);
  MatrixXr r(n, n);
  for (Eigen::Index i = 0; i < c; ++i) {
    const Eigen::Index j = n - 1 - i;
    r.row(i) = (kInvSqrt2 * (hq.row(i) + hq.row(j))).real();
    r.row(j) = (cplx(0.0, -kInvSqrt2) * (hq.row(i) - hq.row(j))).real();
  }
  r.row(c) = hq.row(c).real();
  return 0.5 * (r + r.transpose());
}

}  // namespace pikl
