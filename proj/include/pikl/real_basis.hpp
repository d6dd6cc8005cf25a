#pragma once

#include "pikl/types.hpp"

namespace pikl {

/// Coefficient vectors of real-valued functions satisfy z_{-k} = conj(z_k).
/// Pairing mode i with N-1-i (the index of -k) and setting
/// z_i = (w_i + i w_j) / sqrt2, z_j = (w_i - i w_j) / sqrt2 turns such
/// vectors into real ones through a unitary Q; Hermitian matrices with
/// H_{-a,-b} = conj(H_ab) become real symmetric.

/// z_{-k} = conj(z_k) to 1e-13 relative.
bool conjugate_symmetric(const VectorXc& b);
/// H_{-a,-b} = conj(H_ab) to 1e-13 relative.
bool conjugate_invariant(const MatrixXc& h);

/// Q w.
VectorXc from_real_basis(const VectorXr& w);
/// Q* b for conjugate-symmetric b.
VectorXr to_real_basis(const VectorXc& b);
/// Re(Q* H Q), symmetrized, for conjugate-invariant Hermitian H.
MatrixXr to_real_basis(const MatrixXc& h);

}  // namespace pikl
