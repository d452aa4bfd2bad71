#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stairdet/cxmat.hpp"
#include "stairdet/fxp.hpp"

namespace stairdet {

enum class Algorithm {
  MmseExact,
  ZfExact,
  Nsa,
  GaussSeidel,
  ConjugateGradient,
  Richardson,
  Stair,
};

enum class NumericMode { Float64, Fixed };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct DetectorConfig {
  Algorithm algorithm = Algorithm::MmseExact;
  /// Iteration count: Eq-update applications for stair, sweeps for GS, series
  /// terms for NSA, steps for CG, updates for Richardson. Ignored by the
  /// exact detectors.
  int iterations = 2;
  NumericMode numeric_mode = NumericMode::Float64;
  /// Richardson relaxation; <= 0 selects 1/(B+U) at detection time.
  double richardson_omega = 0.0;
  fxp::FxpProfile fxp_profile{};

  void validate() const;
  std::string label() const;  // e.g. "stair", "stair_fixed", "gs"
};

/// Real-multiplication / division tally for one detector invocation.
/// Convention: 4 real mults per complex*complex, 2 per complex*real,
/// 1 per real*real; divisions counted separately.
struct OpTally {
  std::uint64_t inversion_mults = 0;  // stair-inverse / D^-1 construction
  std::uint64_t init_mults = 0;       // initial-estimate work
  std::uint64_t iteration_mults = 0;  // per-iteration work
  std::uint64_t divisions = 0;

  std::uint64_t total_mults() const { return inversion_mults + init_mults + iteration_mults; }
};

/// Sparse stair container: full diagonal plus the off-diagonal pair on every
/// even row (1-based). The diagonal is real — entries come from a Hermitian
/// Gramian. For dim = 8 there are exactly 7 off-diagonal entries.
struct StairMatrix {
  struct OffEntry {
    int row = 0;  // 0-based; always odd (even 1-based)
    int col = 0;  // row - 1 or row + 1
    Complex value{};
  };

  int dim = 0;
  std::vector<double> diag;
  std::vector<OffEntry> off;

  ComplexMatrix to_dense() const;
};

/// Inverse of a stair matrix; same sparsity support.
struct StairInverse {
  int dim = 0;
  std::vector<double> diag;
  std::vector<StairMatrix::OffEntry> off;

  ComplexMatrix to_dense() const;
};

/// Copies the cross-shaped stair support out of a square Hermitian matrix.
StairMatrix extract_stair(const ComplexMatrix& G);

/// Closed-form stair inversion: reciprocal diagonal, then
/// inv(i,j) = -S(i,j) * inv(i,i) * inv(j,j) on the support.
StairInverse invert_stair(const StairMatrix& S, OpTally* tally = nullptr);

/// Same inversion through the fixed-point datapath: entries quantized to the
/// profile's gram format, diagonal reciprocals via the Newton-Raphson divider,
/// off-diagonal products through the multiplier model. Returned values sit
/// exactly on the sinv quantization grid.
StairInverse invert_stair_fixed(const StairMatrix& S, const fxp::FxpProfile& profile);

ComplexVector apply_stair_inverse(const StairInverse& inv, const ComplexVector& v);

/// Stair-matrix detection: initial estimate inv(S) * xmf, then t updates
/// x <- inv(S) * ((S - G) x + xmf). S - G needs no arithmetic: it is -G off
/// the stair support and zero on it.
ComplexVector detect_stair(const ComplexMatrix& G, const ComplexVector& xmf, int t,
                           OpTally* tally = nullptr);

/// Bit-exact fixed-point stair detection. (G, xmf) are jointly scaled by
/// 2^-prescale before quantization (detected symbols are invariant), the
/// stair inverse uses the Newton divider, every multiplier output lands in
/// the prod format and every symbol estimate in the xhat format.
ComplexVector detect_stair_fixed(const ComplexMatrix& G, const ComplexVector& xmf, int t,
                                 const fxp::FxpProfile& profile);

/// Gauss-Seidel sweeps by forward substitution, x0 = D^-1 xmf.
ComplexVector detect_gs(const ComplexMatrix& G, const ComplexVector& xmf, int sweeps,
                        OpTally* tally = nullptr);

/// K-term Neumann series around the diagonal, evaluated as vector recurrences.
ComplexVector detect_nsa(const ComplexMatrix& G, const ComplexVector& xmf, int terms,
                         OpTally* tally = nullptr);

/// Standard Hermitian conjugate gradient from x0 = 0, exactly K steps.
ComplexVector detect_cg(const ComplexMatrix& G, const ComplexVector& xmf, int steps,
                        OpTally* tally = nullptr);

/// Richardson iteration x <- x + omega (xmf - G x), x0 = omega * xmf.
ComplexVector detect_richardson(const ComplexMatrix& G, const ComplexVector& xmf, int steps,
                                double omega, OpTally* tally = nullptr);

/// Exact detection through the Cholesky solver.
ComplexVector detect_exact(const ComplexMatrix& G, const ComplexVector& xmf);

/// Dispatch on config. G must already be the matching Gramian (with or
/// without the sigma² ridge); bs_antennas feeds the Richardson auto-omega.
ComplexVector run_detector(const DetectorConfig& cfg, const ComplexMatrix& G,
                           const ComplexVector& xmf, int bs_antennas,
                           OpTally* tally = nullptr);

}  // namespace stairdet
