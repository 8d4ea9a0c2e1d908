#include "etrc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "etrc/errors.hpp"
#include "etrc/tolerances.hpp"

namespace etrc {

namespace {

void check_finite(const Matrix& m, const char* who) {
  if (m.empty())
    throw Error(ErrorCategory::InvalidMatrix, std::string(who) + ": empty matrix");
  if (!m.all_finite())
    throw Error(ErrorCategory::InvalidMatrix, std::string(who) + ": non-finite entries");
}

/// Off-diagonal Frobenius norm, the Jacobi convergence measure.
double offdiag_norm(const Matrix& m) {
  double acc = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j) acc += m(i, j) * m(i, j);
  return std::sqrt(acc);
}

/// Accept m as symmetric (within tolerance) and return the symmetrized copy.
Matrix require_symmetric(const Matrix& m, const char* who) {
  check_finite(m, who);
  if (m.rows() != m.cols())
    throw Error(ErrorCategory::InvalidMatrix, std::string(who) + ": not square");
  const double asym = frobenius_norm(m - m.transpose());
  if (asym > kTol.symmetry_rel * (1.0 + frobenius_norm(m)))
    throw Error(ErrorCategory::NotSymmetric,
                std::string(who) + ": asymmetry " + std::to_string(asym));
  return symmetrize(m);
}

}  // namespace

Eigensystem sym_eigensystem(const Matrix& m) {
  Matrix a = require_symmetric(m, "sym_eigensystem");
  const int n = a.rows();
  Matrix v = Matrix::identity(n);
  const double stop = kTol.jacobi_offdiag_rel * frobenius_norm(a);

  // Cyclic Jacobi sweeps: rotate away each off-diagonal entry in turn until
  // the off-diagonal mass falls below the relative threshold.
  for (int sweep = 0; sweep < 100 && offdiag_norm(a) > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- J^T A J with the rotation in the (p, q) plane.
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Sort eigenpairs ascending by value.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  Eigensystem out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

std::vector<double> sym_eigenvalues(const Matrix& m) { return sym_eigensystem(m).values; }

double spectral_norm(const Matrix& m) {
  check_finite(m, "spectral_norm");
  const std::vector<double> eigs = sym_eigenvalues(m.transpose() * m);
  return std::sqrt(std::max(0.0, eigs.back()));
}

bool is_positive_definite(const Matrix& m, double tol) {
  if (m.empty() || m.rows() != m.cols() || !m.all_finite()) return false;
  if (frobenius_norm(m - m.transpose()) > kTol.symmetry_rel * (1.0 + frobenius_norm(m)))
    return false;
  Matrix a = symmetrize(m);
  const int n = a.rows();
  // In-place Cholesky; the pivot at step k is the residual diagonal before
  // its square root is taken.
  for (int k = 0; k < n; ++k) {
    double pivot = a(k, k);
    for (int j = 0; j < k; ++j) pivot -= a(k, j) * a(k, j);
    if (!(pivot > tol)) return false;  // also rejects NaN
    const double lkk = std::sqrt(pivot);
    a(k, k) = lkk;
    for (int i = k + 1; i < n; ++i) {
      double acc = a(i, k);
      for (int j = 0; j < k; ++j) acc -= a(i, j) * a(k, j);
      a(i, k) = acc / lkk;
    }
  }
  return true;
}

Matrix pseudo_inverse(const Matrix& b) {
  check_finite(b, "pseudo_inverse");
  const Matrix gram = b.transpose() * b;
  const std::vector<double> eigs = sym_eigenvalues(gram);
  if (eigs.front() <= kTol.rank_min_eig)
    throw Error(ErrorCategory::RankDeficient,
                "pseudo_inverse: min eig of B^T B = " + std::to_string(eigs.front()));
  const Matrix pinv = lu_solve(gram, b.transpose());
  // Certify B+ B = I before handing the result out.
  const double err = max_abs_diff(pinv * b, Matrix::identity(b.cols()));
  if (err > kTol.pinv_identity)
    throw Error(ErrorCategory::RankDeficient,
                "pseudo_inverse: B+ B deviates from identity by " + std::to_string(err));
  return pinv;
}

Matrix lu_solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw Error(ErrorCategory::InvalidMatrix, "lu_solve: shape mismatch");
  const int n = a.rows();
  Matrix lu = a;
  Matrix x = b;
  // Scale-aware singularity guard.
  const double tiny = 1e-140 * (1.0 + frobenius_norm(a));

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (std::abs(lu(piv, k)) < tiny)
      throw Error(ErrorCategory::RankDeficient, "lu_solve: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      for (int j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      lu(i, k) = f;
      for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (int j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    for (int j = 0; j < x.cols(); ++j) {
      double acc = x(k, j);
      for (int i = k + 1; i < n; ++i) acc -= lu(k, i) * x(i, j);
      x(k, j) = acc / lu(k, k);
    }
  }
  return x;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
  if (a.rows() != a.cols() || q.rows() != q.cols() || a.rows() != q.rows())
    throw Error(ErrorCategory::InvalidMatrix, "solve_lyapunov: shape mismatch");
  const int n = a.rows();
  // Row-major vec: unknown X(p, q) lives at column p*n + q; the equation for
  // entry (i, j) of A X + X A^T + Q = 0 occupies row i*n + j.
  Matrix sys(n * n, n * n);
  Matrix rhs(n * n, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      for (int k = 0; k < n; ++k) {
        sys(row, k * n + j) += a(i, k);  // (A X)(i,j) term
        sys(row, i * n + k) += a(j, k);  // (X A^T)(i,j) term
      }
      rhs(row, 0) = -q(i, j);
    }
  }
  const Matrix xv = lu_solve(sys, rhs);
  Matrix x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = xv(i * n + j, 0);
  return x;
}

double spectral_abscissa(const Matrix& a) {
  check_finite(a, "spectral_abscissa");
  if (a.rows() != a.cols())
    throw Error(ErrorCategory::InvalidMatrix, "spectral_abscissa: not square");
  const int n = a.rows();
  const double radius = frobenius_norm(a) + 1.0;

  // True iff every eigenvalue real part is < beta.
  const auto stable_at_shift = [&](double beta) {
    Matrix shifted = a;
    for (int i = 0; i < n; ++i) shifted(i, i) -= beta;
    try {
      const Matrix x = symmetrize(solve_lyapunov(shifted, Matrix::identity(n)));
      return x.all_finite() && is_positive_definite(x, 0.0);
    } catch (const Error&) {
      return false;  // singular Lyapunov operator: beta is not strictly above
    }
  };

  double lo = -radius;  // every real part exceeds -||A||_F - 1
  double hi = radius;   // and none reaches ||A||_F + 1
  for (int it = 0; it < 200 && hi - lo > 1e-11 * radius; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (stable_at_shift(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace etrc
