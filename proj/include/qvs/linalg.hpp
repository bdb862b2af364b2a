#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qvs {

// Dense row-major matrix. Just enough linear algebra for the eigensolver and
// the GP; anything bigger than a few thousand rows is out of scope.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// In-place lower-triangular Cholesky of a symmetric positive-definite matrix.
// The strict upper triangle is zeroed. Returns false when a pivot is not
// strictly positive (matrix not positive definite at working precision).
bool cholesky_in_place(Matrix& a);

// Forward/back substitution against the lower factor from cholesky_in_place.
void solve_lower(const Matrix& l, std::span<double> b);            // L x = b
void solve_lower_transpose(const Matrix& l, std::span<double> b);  // L^T x = b

}  // namespace qvs
