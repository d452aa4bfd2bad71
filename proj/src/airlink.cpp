#include "stairdet/airlink.hpp"

#include <algorithm>
#include <cmath>

namespace stairdet {

namespace {

unsigned gray_to_binary(unsigned g) {
  unsigned b = g;
  for (unsigned shift = 1; shift < 16; shift <<= 1) b ^= b >> shift;
  return b;
}

}  // namespace

Constellation Constellation::qam(int order) {
  if (order != 4 && order != 16 && order != 64 && order != 256)
    throw ArgumentError("constellation order must be 4, 16, 64 or 256");

  Constellation c;
  c.order_ = order;
  c.bits_per_symbol_ = 0;
  while ((1 << c.bits_per_symbol_) < order) ++c.bits_per_symbol_;
  c.axis_bits_ = c.bits_per_symbol_ / 2;
  c.levels_ = 1 << c.axis_bits_;
  const int L = c.levels_;
  c.scale_ = std::sqrt(2.0 * (static_cast<double>(L) * L - 1.0) / 3.0);
  c.name_ = (order == 4) ? "QPSK" : std::to_string(order) + "-QAM";

  c.points_.resize(order);
  const unsigned axis_mask = (1u << c.axis_bits_) - 1u;
  for (unsigned pattern = 0; pattern < static_cast<unsigned>(order); ++pattern) {
    const unsigned gi = (pattern >> c.axis_bits_) & axis_mask;
    const unsigned gq = pattern & axis_mask;
    const int ki = static_cast<int>(gray_to_binary(gi));
    const int kq = static_cast<int>(gray_to_binary(gq));
    const double re = static_cast<double>(L - 1 - 2 * ki) / c.scale_;
    const double im = static_cast<double>(L - 1 - 2 * kq) / c.scale_;
    c.points_[pattern] = {re, im};
  }
  return c;
}

unsigned Constellation::slice(Complex x) const {
  const int L = levels_;
  auto axis_index = [&](double v) {
    // Clamp before rounding so arbitrarily large finite inputs stay defined.
    const double kd = (static_cast<double>(L - 1) - v * scale_) / 2.0;
    if (!(kd > 0.0)) return 0u;
    if (kd >= static_cast<double>(L - 1)) return static_cast<unsigned>(L - 1);
    return static_cast<unsigned>(std::lround(kd));
  };
  const unsigned ki = axis_index(x.real());
  const unsigned kq = axis_index(x.imag());
  const unsigned gi = ki ^ (ki >> 1);
  const unsigned gq = kq ^ (kq >> 1);
  return (gi << axis_bits_) | gq;
}

ComplexVector modulate(const std::vector<std::uint8_t>& bits, const Constellation& c, int users) {
  const int bps = c.bits_per_symbol();
  if (static_cast<int>(bits.size()) != users * bps)
    throw ArgumentError("modulate: need users * bits_per_symbol bits");

  ComplexVector x(users);
  for (int u = 0; u < users; ++u) {
    unsigned pattern = 0;
    for (int k = 0; k < bps; ++k)
      pattern = (pattern << 1) | (bits[static_cast<std::size_t>(u) * bps + k] & 1u);
    x[u] = c.point(pattern);
  }
  return x;
}

std::vector<std::uint8_t> demodulate_hard(const ComplexVector& xhat, const Constellation& c) {
  const int bps = c.bits_per_symbol();
  std::vector<std::uint8_t> bits(xhat.size() * bps);
  for (std::size_t u = 0; u < xhat.size(); ++u) {
    const unsigned pattern = c.slice(xhat[u]);
    for (int k = 0; k < bps; ++k)
      bits[u * bps + k] = static_cast<std::uint8_t>((pattern >> (bps - 1 - k)) & 1u);
  }
  return bits;
}

ComplexMatrix draw_channel(int bs_antennas, int users, Xoshiro256pp& rng) {
  if (users < 1 || bs_antennas < users)
    throw ArgumentError("draw_channel: need bs_antennas >= users >= 1");
  ComplexMatrix H(bs_antennas, users);
  for (int b = 0; b < bs_antennas; ++b)
    for (int u = 0; u < users; ++u) H(b, u) = rng.cn01();
  return H;
}

double noise_variance_for_snr(double snr_db, int users, const Constellation& c) {
  if (users < 1) throw ArgumentError("noise_variance_for_snr: users must be >= 1");
  double es = 0.0;
  for (const Complex& p : c.points()) es += std::norm(p);
  es /= static_cast<double>(c.order());
  return static_cast<double>(users) * es / std::pow(10.0, snr_db / 10.0);
}

ComplexVector transmit(const ComplexVector& x, const ComplexMatrix& H, double sigma2,
                       Xoshiro256pp& rng) {
  if (static_cast<int>(x.size()) != H.cols())
    throw ArgumentError("transmit: len(x) must equal cols(H)");
  ComplexVector y = mat_vec(H, x);
  if (sigma2 > 0.0) {
    const double amp = std::sqrt(sigma2);
    for (Complex& v : y) v += amp * rng.cn01();
  }
  return y;
}

}  // namespace stairdet
