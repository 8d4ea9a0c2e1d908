#pragma once

#include <initializer_list>
#include <vector>

namespace etrc {

/// Dense real matrix in row-major storage — the single numeric carrier of
/// the library. Systems handled here are tiny (n <= ~10), so the design
/// favors clarity and checkability over blocking or expression templates.
class Matrix {
 public:
  Matrix() = default;

  /// rows x cols, zero-initialized.
  Matrix(int rows, int cols);

  /// Brace construction from rows: Matrix{{1, 2}, {3, 4}}.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);
  static Matrix zeros(int rows, int cols);
  static Matrix diagonal(const std::vector<double>& d);
  /// n x 1 column from a vector.
  static Matrix column(const std::vector<double>& v);
  /// 1 x n row from a vector.
  static Matrix row(const std::vector<double>& v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  Matrix transpose() const;
  bool all_finite() const;

  bool operator==(const Matrix&) const = default;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(double s, Matrix m);
Matrix operator-(Matrix m);

/// State/parameter vectors are plain std::vector<double>.
using Vec = std::vector<double>;

/// y = m * x (m must be rows x |x|).
Vec mat_vec(const Matrix& m, const Vec& x);

double dot(const Vec& a, const Vec& b);
/// Euclidean norm.
double norm2(const Vec& v);
/// x^T s x for square s.
double quad_form(const Vec& x, const Matrix& s);

/// [a | b] side by side (same row count).
Matrix hcat(const Matrix& a, const Matrix& b);
/// diag(a, b) block matrix.
Matrix block_diag(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& m);
/// (m + m^T) / 2.
Matrix symmetrize(const Matrix& m);
/// max_ij |a_ij - b_ij| over same-shaped matrices.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace etrc
