#include "stairdet/cxmat.hpp"

#include <cmath>
#include <string>

namespace stairdet {

ComplexMatrix gramian(const ComplexMatrix& H, double sigma2) {
  const int B = H.rows();
  const int U = H.cols();
  if (B < U) throw ArgumentError("gramian: H must be tall (rows >= cols)");
  if (sigma2 < 0.0) throw ArgumentError("gramian: sigma2 must be non-negative");

  ComplexMatrix G(U, U);
  for (int i = 0; i < U; ++i) {
    // Diagonal: sum of |H[b][i]|^2 is real by construction.
    double d = 0.0;
    for (int b = 0; b < B; ++b) d += std::norm(H(b, i));
    G(i, i) = d + sigma2;
    for (int j = i + 1; j < U; ++j) {
      Complex acc = 0.0;
      for (int b = 0; b < B; ++b) acc += std::conj(H(b, i)) * H(b, j);
      G(i, j) = acc;
      G(j, i) = std::conj(acc);
    }
  }
  return G;
}

ComplexVector matched_filter(const ComplexMatrix& H, const ComplexVector& y) {
  const int B = H.rows();
  const int U = H.cols();
  if (static_cast<int>(y.size()) != B)
    throw ArgumentError("matched_filter: len(y) must equal rows(H)");

  ComplexVector out(U, 0.0);
  for (int i = 0; i < U; ++i) {
    Complex acc = 0.0;
    for (int b = 0; b < B; ++b) acc += std::conj(H(b, i)) * y[b];
    out[i] = acc;
  }
  return out;
}

ComplexVector mat_vec(const ComplexMatrix& A, const ComplexVector& x) {
  if (static_cast<int>(x.size()) != A.cols())
    throw ArgumentError("mat_vec: len(x) must equal cols(A)");
  ComplexVector out(A.rows(), 0.0);
  for (int r = 0; r < A.rows(); ++r) {
    Complex acc = 0.0;
    for (int c = 0; c < A.cols(); ++c) acc += A(r, c) * x[c];
    out[r] = acc;
  }
  return out;
}

ComplexVector solve_hermitian(const ComplexMatrix& G, const ComplexVector& b) {
  const int n = G.rows();
  if (G.cols() != n) throw ArgumentError("solve_hermitian: G must be square");
  if (static_cast<int>(b.size()) != n)
    throw ArgumentError("solve_hermitian: len(b) must equal dim(G)");

  // L * L^H factorization, lower triangle.
  ComplexMatrix L(n, n);
  for (int j = 0; j < n; ++j) {
    double d = G(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(L(j, k));
    if (!(d > 0.0) || !std::isfinite(d))
      throw NumericError("solve_hermitian: non-positive pivot at index " + std::to_string(j));
    const double ljj = std::sqrt(d);
    L(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      Complex acc = G(i, j);
      for (int k = 0; k < j; ++k) acc -= L(i, k) * std::conj(L(j, k));
      L(i, j) = acc / ljj;
    }
  }

  // Forward: L z = b.
  ComplexVector z(n);
  for (int i = 0; i < n; ++i) {
    Complex acc = b[i];
    for (int k = 0; k < i; ++k) acc -= L(i, k) * z[k];
    z[i] = acc / L(i, i).real();
  }
  // Backward: L^H x = z.
  ComplexVector x(n);
  for (int i = n - 1; i >= 0; --i) {
    Complex acc = z[i];
    for (int k = i + 1; k < n; ++k) acc -= std::conj(L(k, i)) * x[k];
    x[i] = acc / L(i, i).real();
  }
  return x;
}

}  // namespace stairdet
