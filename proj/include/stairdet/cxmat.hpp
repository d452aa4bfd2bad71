#pragma once

#include <complex>
#include <vector>

#include "stairdet/errors.hpp"

namespace stairdet {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Dense row-major complex matrix. Small systems only (U <= 16, B <= 256);
/// clarity over blocked kernels.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
    if (rows <= 0 || cols <= 0) throw ArgumentError("matrix dimensions must be positive");
  }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Complex& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> data_;
};

/// H^H * H + sigma2 * I. sigma2 = 0 gives the zero-forcing normal matrix.
/// The diagonal is written as exactly real.
ComplexMatrix gramian(const ComplexMatrix& H, double sigma2);

/// H^H * y.
ComplexVector matched_filter(const ComplexMatrix& H, const ComplexVector& y);

/// A * x.
ComplexVector mat_vec(const ComplexMatrix& A, const ComplexVector& x);

/// Solves G * x = b for Hermitian positive definite G via Cholesky
/// factorization. Throws NumericError when a pivot is not positive.
ComplexVector solve_hermitian(const ComplexMatrix& G, const ComplexVector& b);

}  // namespace stairdet
