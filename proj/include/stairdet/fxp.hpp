#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "stairdet/cxmat.hpp"
#include "stairdet/errors.hpp"

namespace stairdet::fxp {

/// Signed two's-complement fixed-point format: `width` total bits (2..32),
/// `frac` fraction bits (0..width-1). Resolution 2^-frac, range
/// [-2^(width-1-frac), 2^(width-1-frac) - 2^-frac]. Overflow wraps.
struct QFormat {
  int width = 16;
  int frac = 8;

  bool operator==(const QFormat&) const = default;

  std::int64_t raw_min() const { return -(std::int64_t{1} << (width - 1)); }
  std::int64_t raw_max() const { return (std::int64_t{1} << (width - 1)) - 1; }
  double resolution() const;
  double min_value() const;
  double max_value() const;
  void validate() const;
  std::string to_string() const;  // "W.F"
};

struct FxScalar {
  std::int64_t raw = 0;
  QFormat fmt{};

  double value() const;
};

struct FxComplex {
  std::int64_t re_raw = 0;
  std::int64_t im_raw = 0;
  QFormat fmt{};

  std::complex<double> value() const;
};

/// Raw quantization: wrap_W(round_half_away(x * 2^F)).
std::int64_t quantize_raw(double x, const QFormat& fmt);

FxScalar quantize(double x, const QFormat& fmt);
FxComplex quantize(std::complex<double> x, const QFormat& fmt);

/// Re-represents a raw value in another format: single round (half away
/// from zero) when precision drops, exact when it grows, then wrap.
FxScalar rescale(const FxScalar& x, const QFormat& to);
FxComplex rescale(const FxComplex& x, const QFormat& to);

/// Wrapping add of two values in the same format.
FxScalar fx_add(const FxScalar& a, const FxScalar& b);
FxComplex fx_add(const FxComplex& a, const FxComplex& b);
FxComplex fx_neg(const FxComplex& a);

/// Complex multiply: 4 real multiplies and 2 adds at full precision, then one
/// round+wrap rescale into out_fmt per component (hardware multiplier with a
/// post-scaler).
FxComplex fx_mul(const FxComplex& a, const FxComplex& b, const QFormat& out_fmt);

/// Complex times real scalar (2 real multiplies), same rescale rule.
FxComplex fx_mul_real(const FxComplex& a, const FxScalar& s, const QFormat& out_fmt);

/// Real times real (1 multiply), same rescale rule.
FxScalar fx_mul_scalar(const FxScalar& a, const FxScalar& b, const QFormat& out_fmt);

/// Newton-Raphson reciprocal of a positive fixed-point scalar.
///
/// The input is normalized by a power-of-two shift into [1/2, 1) and carried
/// in Q(recip_bits, recip_bits-1); the reciprocal estimate lives in
/// Q(recip_bits, recip_bits-3) so results in (1, 2] are representable. The
/// seed comes from a (1 << lut_bits)-entry table of interval-midpoint
/// reciprocals; each iteration evaluates y + (y - (x*y)*y). The final value
/// is shifted back and rounded once into out_fmt.
FxScalar newton_reciprocal(const FxScalar& x, int iters, int recip_bits, int lut_bits,
                           const QFormat& out_fmt);

/// Normalized-domain core: xnorm_raw is a Q(recip_bits, recip_bits-1) value
/// in [1/2, 1); returns the reciprocal estimate raw in
/// Q(recip_bits, recip_bits-3). Exposed for exhaustive verification.
std::int64_t newton_reciprocal_normalized(std::int64_t xnorm_raw, int iters, int recip_bits,
                                          int lut_bits);

std::vector<FxComplex> quantize_vector(const ComplexVector& v, const QFormat& fmt);

struct FxMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<FxComplex> entries;  // row-major

  FxComplex& at(int r, int c) { return entries[static_cast<std::size_t>(r) * cols + c]; }
  const FxComplex& at(int r, int c) const {
    return entries[static_cast<std::size_t>(r) * cols + c];
  }
};

FxMatrix quantize_matrix(const ComplexMatrix& m, const QFormat& fmt);

/// Word-length profile of the fixed-point detector datapath.
struct FxpProfile {
  QFormat gram{13, 9};   // Gramian entries and the S-G memory
  QFormat mf{15, 10};    // matched-filter inputs
  QFormat sinv{17, 14};  // stair-inverse entries
  QFormat prod{20, 16};  // multiplier-array outputs / accumulators
  QFormat xhat{12, 8};   // symbol-estimate register file
  int recip_bits = 18;   // Newton-Raphson divider word length
  int newton_iters = 2;
  int recip_lut_bits = 6;
  // Power-of-two prescale applied to (G, x_MF) before quantization; the
  // detected x is invariant under the joint scaling. -1 = resolve
  // automatically (ceil(log2 B) in the harness, largest diagonal standalone).
  int prescale_bits = -1;

  void validate() const;
};

/// Plain-text round-trip: "gram=13.9,mf=15.10,sinv=17.14,prod=20.16,
/// xhat=12.8,recip=18,iters=2,lut=6,prescale=auto".
std::string format_profile(const FxpProfile& p);

/// Applies comma-separated key=value overrides on top of `base`.
FxpProfile parse_profile(const std::string& text, FxpProfile base = {});

}  // namespace stairdet::fxp
