#include "stairdet/fxp.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace stairdet::fxp {

namespace {

using Int128 = __int128;

/// Two's-complement wrap of an arbitrary-width intermediate into `width` bits.
std::int64_t wrap_bits(Int128 v, int width) {
  auto u = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v));
  if (width < 64) {
    const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
    u &= mask;
    if (u >= (std::uint64_t{1} << (width - 1))) u -= (std::uint64_t{1} << width);
  }
  return static_cast<std::int64_t>(u);
}

/// Shifts right by `shift` bits rounding half away from zero; negative shift
/// is an exact left shift. No wrap.
Int128 round_shift(Int128 v, int shift) {
  if (shift <= 0) return v << (-shift);
  const Int128 half = Int128{1} << (shift - 1);
  if (v >= 0) return (v + half) >> shift;
  return -((-v + half) >> shift);
}

std::int64_t rescale_raw(Int128 raw, int from_frac, const QFormat& to) {
  return wrap_bits(round_shift(raw, from_frac - to.frac), to.width);
}

int bit_width_u64(std::uint64_t v) { return 64 - std::countl_zero(v); }

}  // namespace

double QFormat::resolution() const { return std::ldexp(1.0, -frac); }
double QFormat::min_value() const { return std::ldexp(static_cast<double>(raw_min()), -frac); }
double QFormat::max_value() const { return std::ldexp(static_cast<double>(raw_max()), -frac); }

void QFormat::validate() const {
  if (width < 2 || width > 32) throw ArgumentError("QFormat: width must be in [2, 32]");
  if (frac < 0 || frac >= width) throw ArgumentError("QFormat: frac must be in [0, width-1]");
}

std::string QFormat::to_string() const {
  return std::to_string(width) + "." + std::to_string(frac);
}

double FxScalar::value() const { return std::ldexp(static_cast<double>(raw), -fmt.frac); }

std::complex<double> FxComplex::value() const {
  return {std::ldexp(static_cast<double>(re_raw), -fmt.frac),
          std::ldexp(static_cast<double>(im_raw), -fmt.frac)};
}

std::int64_t quantize_raw(double x, const QFormat& fmt) {
  const double scaled = std::round(x * std::ldexp(1.0, fmt.frac));
  if (!std::isfinite(scaled)) throw ArgumentError("quantize: value not finite after scaling");
  // Reduce in the double domain first so the int64 conversion is always in
  // range; fmod is exact and the period 2^width divides 2^64.
  const double period = std::ldexp(1.0, fmt.width);
  const double reduced = std::fmod(scaled, period);
  return wrap_bits(static_cast<Int128>(static_cast<std::int64_t>(reduced)), fmt.width);
}

FxScalar quantize(double x, const QFormat& fmt) { return {quantize_raw(x, fmt), fmt}; }

FxComplex quantize(std::complex<double> x, const QFormat& fmt) {
  return {quantize_raw(x.real(), fmt), quantize_raw(x.imag(), fmt), fmt};
}

FxScalar rescale(const FxScalar& x, const QFormat& to) {
  return {rescale_raw(x.raw, x.fmt.frac, to), to};
}

FxComplex rescale(const FxComplex& x, const QFormat& to) {
  return {rescale_raw(x.re_raw, x.fmt.frac, to), rescale_raw(x.im_raw, x.fmt.frac, to), to};
}

FxScalar fx_add(const FxScalar& a, const FxScalar& b) {
  if (a.fmt != b.fmt) throw ArgumentError("fx_add: operands must share a format");
  return {wrap_bits(Int128{a.raw} + b.raw, a.fmt.width), a.fmt};
}

FxComplex fx_add(const FxComplex& a, const FxComplex& b) {
  if (a.fmt != b.fmt) throw ArgumentError("fx_add: operands must share a format");
  return {wrap_bits(Int128{a.re_raw} + b.re_raw, a.fmt.width),
          wrap_bits(Int128{a.im_raw} + b.im_raw, a.fmt.width), a.fmt};
}

FxComplex fx_neg(const FxComplex& a) {
  return {wrap_bits(-Int128{a.re_raw}, a.fmt.width), wrap_bits(-Int128{a.im_raw}, a.fmt.width),
          a.fmt};
}

FxComplex fx_mul(const FxComplex& a, const FxComplex& b, const QFormat& out_fmt) {
  const int pf = a.fmt.frac + b.fmt.frac;
  const Int128 pr = Int128{a.re_raw} * b.re_raw - Int128{a.im_raw} * b.im_raw;
  const Int128 pi = Int128{a.re_raw} * b.im_raw + Int128{a.im_raw} * b.re_raw;
  return {rescale_raw(pr, pf, out_fmt), rescale_raw(pi, pf, out_fmt), out_fmt};
}

FxComplex fx_mul_real(const FxComplex& a, const FxScalar& s, const QFormat& out_fmt) {
  const int pf = a.fmt.frac + s.fmt.frac;
  return {rescale_raw(Int128{a.re_raw} * s.raw, pf, out_fmt),
          rescale_raw(Int128{a.im_raw} * s.raw, pf, out_fmt), out_fmt};
}

FxScalar fx_mul_scalar(const FxScalar& a, const FxScalar& b, const QFormat& out_fmt) {
  return {rescale_raw(Int128{a.raw} * b.raw, a.fmt.frac + b.fmt.frac, out_fmt), out_fmt};
}

std::int64_t newton_reciprocal_normalized(std::int64_t xnorm_raw, int iters, int recip_bits,
                                          int lut_bits) {
  const int xfrac = recip_bits - 1;  // x in [1/2, 1)
  const int yfrac = recip_bits - 3;  // y in (1, 2]
  if (xnorm_raw < (std::int64_t{1} << (xfrac - 1)) || xnorm_raw >= (std::int64_t{1} << xfrac))
    throw ArgumentError("newton_reciprocal_normalized: input not in [1/2, 1)");

  // Seed: reciprocal of the interval midpoint (2k+1)/2^(lut_bits+1), rounded
  // into the y format. Ties cannot occur (odd denominator).
  const std::int64_t idx = xnorm_raw >> (xfrac - lut_bits);
  const std::int64_t den = 2 * idx + 1;
  const std::int64_t num = std::int64_t{1} << (yfrac + lut_bits + 1);
  std::int64_t y = (2 * num + den) / (2 * den);

  for (int k = 0; k < iters; ++k) {
    // y <- y + (y - (x*y)*y), algebraically 2y - x*y^2; this ordering keeps
    // every intermediate inside the y format's range even for y = 2.
    const std::int64_t u =
        static_cast<std::int64_t>(round_shift(Int128{xnorm_raw} * y, xfrac));
    const std::int64_t t =
        static_cast<std::int64_t>(round_shift(Int128{u} * y, yfrac));
    y = wrap_bits(Int128{y} + (Int128{y} - t), recip_bits);
  }
  return y;
}

FxScalar newton_reciprocal(const FxScalar& x, int iters, int recip_bits, int lut_bits,
                           const QFormat& out_fmt) {
  if (x.raw <= 0) throw NumericError("newton_reciprocal: input must be positive");
  if (iters < 0 || recip_bits < 8 || recip_bits > 32 || lut_bits < 1 ||
      lut_bits >= recip_bits - 2)
    throw ArgumentError("newton_reciprocal: bad iteration/word-length parameters");

  const int xfrac = recip_bits - 1;
  const int yfrac = recip_bits - 3;

  // Normalize: x = xnorm * 2^(b - F) with xnorm in [1/2, 1).
  int b = bit_width_u64(static_cast<std::uint64_t>(x.raw));
  std::int64_t xnorm =
      static_cast<std::int64_t>(round_shift(Int128{x.raw}, b - xfrac));
  if (xnorm == (std::int64_t{1} << xfrac)) {
    // Rounded up to 1.0: renormalize to 1/2 one octave up.
    xnorm >>= 1;
    b += 1;
  }

  const std::int64_t y = newton_reciprocal_normalized(xnorm, iters, recip_bits, lut_bits);

  // 1/x = y * 2^(F - b); one rounded shift into the output format.
  const int shift = yfrac - out_fmt.frac - x.fmt.frac + b;
  return {wrap_bits(round_shift(Int128{y}, shift), out_fmt.width), out_fmt};
}

std::vector<FxComplex> quantize_vector(const ComplexVector& v, const QFormat& fmt) {
  std::vector<FxComplex> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(quantize(e, fmt));
  return out;
}

FxMatrix quantize_matrix(const ComplexMatrix& m, const QFormat& fmt) {
  FxMatrix out;
  out.rows = m.rows();
  out.cols = m.cols();
  out.entries.reserve(m.data().size());
  for (const auto& e : m.data()) out.entries.push_back(quantize(e, fmt));
  return out;
}

void FxpProfile::validate() const {
  gram.validate();
  mf.validate();
  sinv.validate();
  prod.validate();
  xhat.validate();
  if (recip_bits < 8 || recip_bits > 32)
    throw ArgumentError("fxp profile: recip bits must be in [8, 32]");
  if (newton_iters < 0 || newton_iters > 8)
    throw ArgumentError("fxp profile: iters must be in [0, 8]");
  if (recip_lut_bits < 1 || recip_lut_bits >= recip_bits - 2)
    throw ArgumentError("fxp profile: lut bits must be in [1, recip-3]");
  if (prescale_bits < -1 || prescale_bits > 16)
    throw ArgumentError("fxp profile: prescale must be auto (-1) or in [0, 16]");
}

std::string format_profile(const FxpProfile& p) {
  std::ostringstream os;
  os << "gram=" << p.gram.to_string() << ",mf=" << p.mf.to_string()
     << ",sinv=" << p.sinv.to_string() << ",prod=" << p.prod.to_string()
     << ",xhat=" << p.xhat.to_string() << ",recip=" << p.recip_bits
     << ",iters=" << p.newton_iters << ",lut=" << p.recip_lut_bits << ",prescale=";
  if (p.prescale_bits < 0)
    os << "auto";
  else
    os << p.prescale_bits;
  return os.str();
}

namespace {

QFormat parse_qformat(const std::string& v) {
  const auto dot = v.find('.');
  if (dot == std::string::npos)
    throw ArgumentError("fxp profile: expected W.F, got '" + v + "'");
  QFormat f{std::stoi(v.substr(0, dot)), std::stoi(v.substr(dot + 1))};
  f.validate();
  return f;
}

}  // namespace

FxpProfile parse_profile(const std::string& text, FxpProfile base) {
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ArgumentError("fxp profile: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key == "gram")
      base.gram = parse_qformat(val);
    else if (key == "mf")
      base.mf = parse_qformat(val);
    else if (key == "sinv")
      base.sinv = parse_qformat(val);
    else if (key == "prod")
      base.prod = parse_qformat(val);
    else if (key == "xhat")
      base.xhat = parse_qformat(val);
    else if (key == "recip")
      base.recip_bits = std::stoi(val);
    else if (key == "iters")
      base.newton_iters = std::stoi(val);
    else if (key == "lut")
      base.recip_lut_bits = std::stoi(val);
    else if (key == "prescale")
      base.prescale_bits = (val == "auto") ? -1 : std::stoi(val);
    else
      throw ArgumentError("fxp profile: unknown key '" + key + "'");
  }
  base.validate();
  return base;
}

}  // namespace stairdet::fxp
