#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stairdet/cxmat.hpp"
#include "stairdet/rng.hpp"

namespace stairdet {

/// Square Gray-mapped QAM constellation with unit average symbol energy.
///
/// Bit convention: a symbol's pattern is [I-bits | Q-bits], MSB first inside
/// each group. Each axis carries an independent Gray code; the all-zero
/// pattern maps to the most positive level on both axes, so QPSK "00" is
/// (1+i)/sqrt(2). Axis levels are {±1, ±3, ..., ±(L-1)} / sqrt(2(L²-1)/3).
class Constellation {
 public:
  /// order must be one of 4, 16, 64, 256.
  static Constellation qam(int order);

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_per_symbol_; }
  const std::string& name() const { return name_; }

  /// Point for a bit pattern in [0, order).
  Complex point(unsigned pattern) const { return points_[pattern]; }
  const std::vector<Complex>& points() const { return points_; }

  /// Nearest-point hard decision, returns the bit pattern. Per-axis slicing;
  /// exact for square QAM since decision regions are axis-aligned.
  unsigned slice(Complex x) const;

 private:
  Constellation() = default;

  int order_ = 0;
  int bits_per_symbol_ = 0;
  int axis_bits_ = 0;
  int levels_ = 0;
  double scale_ = 1.0;  // amplitude divisor sqrt(2(L²-1)/3)
  std::string name_;
  std::vector<Complex> points_;  // indexed by bit pattern
};

/// Gray-maps U symbols from bits (values 0/1, length U * bits_per_symbol).
ComplexVector modulate(const std::vector<std::uint8_t>& bits, const Constellation& c, int users);

/// Nearest-point hard decisions for every entry, concatenated bit patterns.
std::vector<std::uint8_t> demodulate_hard(const ComplexVector& xhat, const Constellation& c);

/// B x U i.i.d. CN(0,1) channel matrix, drawn row-major from rng.
ComplexMatrix draw_channel(int bs_antennas, int users, Xoshiro256pp& rng);

/// Noise variance for a per-receive-antenna SNR: sigma² = U * Es / 10^(dB/10),
/// with Es the constellation's average symbol energy (1 by construction).
double noise_variance_for_snr(double snr_db, int users, const Constellation& c);

/// y = H x + n with n i.i.d. CN(0, sigma2), drawn from rng.
ComplexVector transmit(const ComplexVector& x, const ComplexMatrix& H, double sigma2,
                       Xoshiro256pp& rng);

}  // namespace stairdet
