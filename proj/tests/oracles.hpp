// Test-only reference implementations, kept independent of the library code
// paths they check.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "stairdet/cxmat.hpp"
#include "stairdet/detectors.hpp"
#include "stairdet/rng.hpp"

namespace oracles {

using stairdet::Complex;
using stairdet::ComplexMatrix;
using stairdet::ComplexVector;

/// Brute-force triple loop for H^H H + sigma2 I.
inline ComplexMatrix gramian_naive(const ComplexMatrix& H, double sigma2) {
  const int B = H.rows(), U = H.cols();
  ComplexMatrix G(U, U);
  for (int i = 0; i < U; ++i)
    for (int j = 0; j < U; ++j) {
      Complex acc = 0.0;
      for (int b = 0; b < B; ++b) acc += std::conj(H(b, i)) * H(b, j);
      if (i == j) acc += sigma2;
      G(i, j) = acc;
    }
  return G;
}

inline ComplexVector matched_filter_naive(const ComplexMatrix& H, const ComplexVector& y) {
  const int B = H.rows(), U = H.cols();
  ComplexVector out(U, 0.0);
  for (int i = 0; i < U; ++i)
    for (int b = 0; b < B; ++b) out[i] += std::conj(H(b, i)) * y[b];
  return out;
}

/// Dense inverse by Gaussian elimination with partial pivoting, for general
/// complex matrices (the stair inverse oracle).
inline ComplexMatrix dense_inverse(ComplexMatrix a) {
  const int n = a.rows();
  ComplexMatrix inv = ComplexMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a(col, c), a(pivot, c));
        std::swap(inv(col, c), inv(pivot, c));
      }
    const Complex p = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) /= p;
      inv(col, c) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = a(r, col);
      if (f == Complex{}) continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

/// Largest |eigenvalue| estimate by power iteration (for checking that the
/// stair update is a contraction before asserting convergence).
inline double spectral_radius(const ComplexMatrix& A, int iters = 500) {
  const int n = A.rows();
  stairdet::Xoshiro256pp rng(12345);
  ComplexVector v(n);
  for (auto& e : v) e = rng.cn01();
  double lambda = 0.0;
  for (int k = 0; k < iters; ++k) {
    ComplexVector w = stairdet::mat_vec(A, v);
    double norm = 0.0;
    for (const auto& e : w) norm += std::norm(e);
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    lambda = norm;
    for (auto& e : w) e /= norm;
    v = std::move(w);
  }
  return lambda;
}

/// Random stair matrix with a dominant real-positive diagonal.
inline stairdet::StairMatrix random_stair(int dim, stairdet::Xoshiro256pp& rng) {
  stairdet::StairMatrix s;
  s.dim = dim;
  s.diag.resize(dim);
  for (int i = 0; i < dim; ++i) s.diag[i] = 2.0 + rng.uniform01();
  for (int r = 1; r < dim; r += 2) {
    s.off.push_back({r, r - 1, 0.5 * rng.cn01()});
    if (r + 1 < dim) s.off.push_back({r, r + 1, 0.5 * rng.cn01()});
  }
  return s;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

inline double rel_err(const ComplexVector& got, const ComplexVector& want) {
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    diff += std::norm(got[i] - want[i]);
    ref += std::norm(want[i]);
  }
  return std::sqrt(diff / ref);
}

}  // namespace oracles
