#pragma once

#include <vector>

#include "etrc/matrix.hpp"

namespace etrc {

/// Induced 2-norm (largest singular value), computed as the square root of
/// the largest eigenvalue of m^T m. Relative accuracy ~1e-10.
/// Throws InvalidMatrix on empty or non-finite input.
double spectral_norm(const Matrix& m);

/// Eigenvalues of a symmetric matrix, ascending. Input asymmetry up to the
/// symmetry tolerance is absorbed by symmetrizing (m + m^T)/2; anything
/// larger throws NotSymmetric.
std::vector<double> sym_eigenvalues(const Matrix& m);

/// Eigenvalues (ascending) together with the orthonormal eigenvectors as
/// columns of `vectors`, matched by position.
struct Eigensystem {
  std::vector<double> values;
  Matrix vectors;
};
Eigensystem sym_eigensystem(const Matrix& m);

/// Cholesky-based definiteness test: true iff the factorization succeeds
/// with every pivot > tol. Never throws; precondition violations (non-square
/// or clearly asymmetric input) simply return false.
bool is_positive_definite(const Matrix& m, double tol);

/// Moore–Penrose pseudo-inverse (B^T B)^{-1} B^T of a full-column-rank
/// matrix. Throws RankDeficient when the smallest eigenvalue of B^T B is at
/// or below the rank tolerance, or when the B+ B = I self-check fails.
Matrix pseudo_inverse(const Matrix& b);

/// Solve A X = B by partial-pivot LU. Throws RankDeficient when a pivot
/// column collapses (singular to working precision).
Matrix lu_solve(const Matrix& a, const Matrix& b);

/// Solve the continuous Lyapunov equation A X + X A^T + Q = 0 by Kronecker
/// vectorization (systems here are tiny, so the n^2 x n^2 solve is cheap).
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// Maximum real part of the eigenvalues of a (possibly nonsymmetric) matrix,
/// located by bisection over the shift beta using the Lyapunov test:
/// all Re(lambda) < beta  iff  (A - beta I) X + X (A - beta I)^T = -I has a
/// positive definite solution. Bracket is +/- (||A||_F + 1).
double spectral_abscissa(const Matrix& a);

}  // namespace etrc
