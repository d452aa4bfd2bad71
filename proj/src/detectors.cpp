#include "stairdet/detectors.hpp"

#include <cmath>
#include <string>

namespace stairdet {

namespace {

// Counting helpers. Multiplication convention: complex*complex = 4,
// complex*real = 2, real*real = 1; divisions tallied separately.

inline void count(OpTally* t, std::uint64_t OpTally::* slot, std::uint64_t n) {
  if (t) t->*slot += n;
}

inline void count_div(OpTally* t, std::uint64_t n = 1) {
  if (t) t->divisions += n;
}

void check_square(const ComplexMatrix& G, const ComplexVector& xmf, const char* who) {
  if (G.rows() != G.cols()) throw ArgumentError(std::string(who) + ": G must be square");
  if (static_cast<int>(xmf.size()) != G.rows())
    throw ArgumentError(std::string(who) + ": len(xmf) must equal dim(G)");
}

bool on_stair_support(int r, int c, int dim) {
  if (r == c) return true;
  if (r % 2 == 1 && (c == r - 1 || (c == r + 1 && c < dim))) return true;
  return false;
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::MmseExact: return "mmse";
    case Algorithm::ZfExact: return "zf";
    case Algorithm::Nsa: return "nsa";
    case Algorithm::GaussSeidel: return "gs";
    case Algorithm::ConjugateGradient: return "cg";
    case Algorithm::Richardson: return "richardson";
    case Algorithm::Stair: return "stair";
  }
  throw ArgumentError("unknown algorithm enum");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "mmse") return Algorithm::MmseExact;
  if (name == "zf") return Algorithm::ZfExact;
  if (name == "nsa") return Algorithm::Nsa;
  if (name == "gs") return Algorithm::GaussSeidel;
  if (name == "cg") return Algorithm::ConjugateGradient;
  if (name == "richardson") return Algorithm::Richardson;
  if (name == "stair") return Algorithm::Stair;
  throw ArgumentError("unknown algorithm '" + name + "'");
}

void DetectorConfig::validate() const {
  if (iterations < 1) throw ArgumentError("detector config: iterations must be >= 1");
  if (numeric_mode == NumericMode::Fixed && algorithm != Algorithm::Stair)
    throw ArgumentError("detector config: fixed-point mode is only defined for stair");
  if (algorithm == Algorithm::Richardson && richardson_omega < 0.0)
    throw ArgumentError("detector config: richardson omega must be positive (or 0 for auto)");
  fxp_profile.validate();
}

std::string DetectorConfig::label() const {
  std::string l = algorithm_name(algorithm);
  if (numeric_mode == NumericMode::Fixed) l += "_fixed";
  return l;
}

ComplexMatrix StairMatrix::to_dense() const {
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, i) = diag[i];
  for (const auto& e : off) m(e.row, e.col) = e.value;
  return m;
}

ComplexMatrix StairInverse::to_dense() const {
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, i) = diag[i];
  for (const auto& e : off) m(e.row, e.col) = e.value;
  return m;
}

StairMatrix extract_stair(const ComplexMatrix& G) {
  if (G.rows() != G.cols()) throw ArgumentError("extract_stair: G must be square");
  const int dim = G.rows();
  StairMatrix s;
  s.dim = dim;
  s.diag.resize(dim);
  for (int i = 0; i < dim; ++i) s.diag[i] = G(i, i).real();
  for (int r = 1; r < dim; r += 2) {
    s.off.push_back({r, r - 1, G(r, r - 1)});
    if (r + 1 < dim) s.off.push_back({r, r + 1, G(r, r + 1)});
  }
  return s;
}

StairInverse invert_stair(const StairMatrix& S, OpTally* tally) {
  StairInverse inv;
  inv.dim = S.dim;
  inv.diag.resize(S.dim);
  for (int i = 0; i < S.dim; ++i) {
    if (S.diag[i] == 0.0)
      throw NumericError("invert_stair: zero diagonal at index " + std::to_string(i));
    inv.diag[i] = 1.0 / S.diag[i];
    count_div(tally);
  }
  inv.off.reserve(S.off.size());
  for (const auto& e : S.off) {
    const double rr = inv.diag[e.row] * inv.diag[e.col];
    count(tally, &OpTally::inversion_mults, 1);
    inv.off.push_back({e.row, e.col, -e.value * rr});
    count(tally, &OpTally::inversion_mults, 2);
  }
  return inv;
}

namespace {

ComplexVector apply_stair_inverse_counted(const StairInverse& inv, const ComplexVector& v,
                                          OpTally* tally, std::uint64_t OpTally::* slot) {
  ComplexVector out(inv.dim);
  for (int i = 0; i < inv.dim; ++i) {
    out[i] = inv.diag[i] * v[i];
    count(tally, slot, 2);
  }
  for (const auto& e : inv.off) {
    out[e.row] += e.value * v[e.col];
    count(tally, slot, 4);
  }
  return out;
}

}  // namespace

ComplexVector apply_stair_inverse(const StairInverse& inv, const ComplexVector& v) {
  if (static_cast<int>(v.size()) != inv.dim)
    throw ArgumentError("apply_stair_inverse: dimension mismatch");
  return apply_stair_inverse_counted(inv, v, nullptr, &OpTally::init_mults);
}

ComplexVector detect_stair(const ComplexMatrix& G, const ComplexVector& xmf, int t,
                           OpTally* tally) {
  check_square(G, xmf, "detect_stair");
  if (t < 0) throw ArgumentError("detect_stair: t must be >= 0");
  const int dim = G.rows();

  const StairInverse inv = invert_stair(extract_stair(G), tally);
  ComplexVector x =
      apply_stair_inverse_counted(inv, xmf, tally, &OpTally::init_mults);

  ComplexVector w(dim);
  for (int iter = 0; iter < t; ++iter) {
    // w = (S - G) x + xmf; the stair support contributes exactly zero, so it
    // is skipped rather than subtracted.
    for (int r = 0; r < dim; ++r) {
      Complex acc = 0.0;
      for (int c = 0; c < dim; ++c) {
        if (on_stair_support(r, c, dim)) continue;
        acc += -G(r, c) * x[c];
        count(tally, &OpTally::iteration_mults, 4);
      }
      w[r] = acc + xmf[r];
    }
    x = apply_stair_inverse_counted(inv, w, tally, &OpTally::iteration_mults);
  }
  return x;
}

ComplexVector detect_gs(const ComplexMatrix& G, const ComplexVector& xmf, int sweeps,
                        OpTally* tally) {
  check_square(G, xmf, "detect_gs");
  if (sweeps < 1) throw ArgumentError("detect_gs: sweeps must be >= 1");
  const int dim = G.rows();

  std::vector<double> dinv(dim);
  for (int i = 0; i < dim; ++i) {
    const double d = G(i, i).real();
    if (d == 0.0) throw NumericError("detect_gs: zero diagonal at index " + std::to_string(i));
    dinv[i] = 1.0 / d;
    count_div(tally);
  }

  ComplexVector x(dim);
  for (int i = 0; i < dim; ++i) {
    x[i] = dinv[i] * xmf[i];
    count(tally, &OpTally::init_mults, 2);
  }

  for (int s = 0; s < sweeps; ++s) {
    for (int i = 0; i < dim; ++i) {
      Complex acc = xmf[i];
      for (int j = 0; j < dim; ++j) {
        if (j == i) continue;
        acc -= G(i, j) * x[j];  // updated entries for j < i, previous for j > i
        count(tally, &OpTally::iteration_mults, 4);
      }
      x[i] = dinv[i] * acc;
      count(tally, &OpTally::iteration_mults, 2);
    }
  }
  return x;
}

ComplexVector detect_nsa(const ComplexMatrix& G, const ComplexVector& xmf, int terms,
                         OpTally* tally) {
  check_square(G, xmf, "detect_nsa");
  if (terms < 1) throw ArgumentError("detect_nsa: terms must be >= 1");
  const int dim = G.rows();

  std::vector<double> dinv(dim);
  for (int i = 0; i < dim; ++i) {
    const double d = G(i, i).real();
    if (d == 0.0) throw NumericError("detect_nsa: zero diagonal at index " + std::to_string(i));
    dinv[i] = 1.0 / d;
    count_div(tally);
  }

  // x = sum_{n=0}^{terms-1} (-D^-1 E)^n D^-1 xmf, via the term recurrence.
  ComplexVector term(dim);
  for (int i = 0; i < dim; ++i) {
    term[i] = dinv[i] * xmf[i];
    count(tally, &OpTally::init_mults, 2);
  }
  ComplexVector x = term;

  ComplexVector w(dim);
  for (int n = 1; n < terms; ++n) {
    for (int i = 0; i < dim; ++i) {
      Complex acc = 0.0;
      for (int j = 0; j < dim; ++j) {
        if (j == i) continue;
        acc += G(i, j) * term[j];
        count(tally, &OpTally::iteration_mults, 4);
      }
      w[i] = acc;
    }
    for (int i = 0; i < dim; ++i) {
      term[i] = -dinv[i] * w[i];
      count(tally, &OpTally::iteration_mults, 2);
      x[i] += term[i];
    }
  }
  return x;
}

ComplexVector detect_cg(const ComplexMatrix& G, const ComplexVector& xmf, int steps,
                        OpTally* tally) {
  check_square(G, xmf, "detect_cg");
  if (steps < 1) throw ArgumentError("detect_cg: steps must be >= 1");
  const int dim = G.rows();

  ComplexVector x(dim, 0.0);
  ComplexVector r = xmf;
  ComplexVector p = r;
  double rs_old = 0.0;
  for (int i = 0; i < dim; ++i) {
    rs_old += std::norm(r[i]);
    count(tally, &OpTally::init_mults, 2);
  }

  for (int k = 0; k < steps; ++k) {
    ComplexVector gp(dim);
    for (int i = 0; i < dim; ++i) {
      Complex acc = 0.0;
      for (int j = 0; j < dim; ++j) {
        acc += G(i, j) * p[j];
        count(tally, &OpTally::iteration_mults, 4);
      }
      gp[i] = acc;
    }
    double p_gp = 0.0;
    for (int i = 0; i < dim; ++i) {
      p_gp += (std::conj(p[i]) * gp[i]).real();
      count(tally, &OpTally::iteration_mults, 4);
    }
    // A converged system (zero residual, zero direction) keeps iterating as a
    // numeric no-op; genuine non-positive curvature is a breakdown.
    if (p_gp <= 0.0 && rs_old > 0.0)
      throw NumericError("detect_cg: breakdown, non-positive curvature");
    const double alpha = (p_gp > 0.0) ? rs_old / p_gp : 0.0;
    count_div(tally);
    double rs_new = 0.0;
    for (int i = 0; i < dim; ++i) {
      x[i] += alpha * p[i];
      count(tally, &OpTally::iteration_mults, 2);
      r[i] -= alpha * gp[i];
      count(tally, &OpTally::iteration_mults, 2);
      rs_new += std::norm(r[i]);
      count(tally, &OpTally::iteration_mults, 2);
    }
    const double beta = (rs_old > 0.0) ? rs_new / rs_old : 0.0;
    count_div(tally);
    for (int i = 0; i < dim; ++i) {
      p[i] = r[i] + beta * p[i];
      count(tally, &OpTally::iteration_mults, 2);
    }
    rs_old = rs_new;
  }
  return x;
}

ComplexVector detect_richardson(const ComplexMatrix& G, const ComplexVector& xmf, int steps,
                                double omega, OpTally* tally) {
  check_square(G, xmf, "detect_richardson");
  if (steps < 1) throw ArgumentError("detect_richardson: steps must be >= 1");
  if (!(omega > 0.0)) throw ArgumentError("detect_richardson: omega must be positive");
  const int dim = G.rows();

  ComplexVector x(dim);
  for (int i = 0; i < dim; ++i) {
    x[i] = omega * xmf[i];
    count(tally, &OpTally::init_mults, 2);
  }

  for (int k = 0; k < steps; ++k) {
    ComplexVector gx(dim);
    for (int i = 0; i < dim; ++i) {
      Complex acc = 0.0;
      for (int j = 0; j < dim; ++j) {
        acc += G(i, j) * x[j];
        count(tally, &OpTally::iteration_mults, 4);
      }
      gx[i] = acc;
    }
    for (int i = 0; i < dim; ++i) {
      x[i] += omega * (xmf[i] - gx[i]);
      count(tally, &OpTally::iteration_mults, 2);
    }
  }
  return x;
}

ComplexVector detect_exact(const ComplexMatrix& G, const ComplexVector& xmf) {
  return solve_hermitian(G, xmf);
}

// ---------------------------------------------------------------------------
// Fixed-point pipeline
// ---------------------------------------------------------------------------

namespace {

using fxp::FxComplex;
using fxp::FxScalar;
using fxp::FxpProfile;

int resolve_prescale(const FxpProfile& prof, double max_diag) {
  if (prof.prescale_bits >= 0) return prof.prescale_bits;
  if (!(max_diag > 0.0)) return 0;
  int p = 0;
  while ((1 << p) < max_diag && p < 16) ++p;  // smallest p with 2^p >= max_diag
  return p;
}

struct FxStairInverse {
  std::vector<FxScalar> diag;                 // sinv format, real
  std::vector<StairMatrix::OffEntry> support;  // index pairs (values unused)
  std::vector<FxComplex> off;                  // sinv format, aligned with support
};

FxStairInverse invert_quantized_stair(const std::vector<FxScalar>& diag,
                                      const std::vector<StairMatrix::OffEntry>& support,
                                      const std::vector<FxComplex>& off_values,
                                      const FxpProfile& prof) {
  FxStairInverse inv;
  inv.support = support;
  inv.diag.reserve(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i].raw <= 0)
      throw NumericError("invert_stair_fixed: quantized diagonal not positive at index " +
                         std::to_string(i));
    inv.diag.push_back(fxp::newton_reciprocal(diag[i], prof.newton_iters, prof.recip_bits,
                                              prof.recip_lut_bits, prof.sinv));
  }
  inv.off.reserve(off_values.size());
  for (std::size_t k = 0; k < off_values.size(); ++k) {
    const auto& e = support[k];
    const FxScalar rr = fxp::fx_mul_scalar(inv.diag[e.row], inv.diag[e.col], prof.sinv);
    inv.off.push_back(fxp::fx_mul_real(fxp::fx_neg(off_values[k]), rr, prof.sinv));
  }
  return inv;
}

/// out[i] (xhat) = sum of sinv-row products accumulated in prod format.
std::vector<FxComplex> apply_fx_stair_inverse(const FxStairInverse& inv,
                                              const std::vector<FxComplex>& v,
                                              const FxpProfile& prof) {
  const int dim = static_cast<int>(inv.diag.size());
  std::vector<FxComplex> acc(dim);
  for (int i = 0; i < dim; ++i)
    acc[i] = fxp::fx_mul_real(v[i], inv.diag[i], prof.prod);
  for (std::size_t k = 0; k < inv.support.size(); ++k) {
    const auto& e = inv.support[k];
    acc[e.row] = fxp::fx_add(acc[e.row], fxp::fx_mul(inv.off[k], v[e.col], prof.prod));
  }
  std::vector<FxComplex> out(dim);
  for (int i = 0; i < dim; ++i) out[i] = fxp::rescale(acc[i], prof.xhat);
  return out;
}

}  // namespace

StairInverse invert_stair_fixed(const StairMatrix& S, const fxp::FxpProfile& profile) {
  profile.validate();
  std::vector<FxScalar> diag;
  diag.reserve(S.diag.size());
  for (double d : S.diag) diag.push_back(fxp::quantize(d, profile.gram));
  std::vector<FxComplex> off_values;
  off_values.reserve(S.off.size());
  for (const auto& e : S.off) off_values.push_back(fxp::quantize(e.value, profile.gram));

  const FxStairInverse inv = invert_quantized_stair(diag, S.off, off_values, profile);

  StairInverse out;
  out.dim = S.dim;
  out.diag.resize(S.dim);
  for (int i = 0; i < S.dim; ++i) out.diag[i] = inv.diag[i].value();
  out.off.reserve(S.off.size());
  for (std::size_t k = 0; k < S.off.size(); ++k)
    out.off.push_back({S.off[k].row, S.off[k].col, inv.off[k].value()});
  return out;
}

ComplexVector detect_stair_fixed(const ComplexMatrix& G, const ComplexVector& xmf, int t,
                                 const fxp::FxpProfile& profile) {
  check_square(G, xmf, "detect_stair_fixed");
  if (t < 0) throw ArgumentError("detect_stair_fixed: t must be >= 0");
  profile.validate();
  const int dim = G.rows();

  double max_diag = 0.0;
  for (int i = 0; i < dim; ++i) max_diag = std::max(max_diag, G(i, i).real());
  const int prescale = resolve_prescale(profile, max_diag);
  const double scale = std::ldexp(1.0, -prescale);

  // Quantization boundary: everything downstream is integer arithmetic.
  fxp::FxMatrix Gq;
  Gq.rows = Gq.cols = dim;
  Gq.entries.reserve(static_cast<std::size_t>(dim) * dim);
  for (const auto& e : G.data()) Gq.entries.push_back(fxp::quantize(e * scale, profile.gram));

  std::vector<FxComplex> mq;
  mq.reserve(xmf.size());
  for (const auto& e : xmf) mq.push_back(fxp::quantize(e * scale, profile.mf));

  std::vector<FxScalar> diag(dim);
  for (int i = 0; i < dim; ++i) diag[i] = {Gq.at(i, i).re_raw, profile.gram};
  std::vector<StairMatrix::OffEntry> support;
  std::vector<FxComplex> off_values;
  for (int r = 1; r < dim; r += 2) {
    support.push_back({r, r - 1, {}});
    off_values.push_back(Gq.at(r, r - 1));
    if (r + 1 < dim) {
      support.push_back({r, r + 1, {}});
      off_values.push_back(Gq.at(r, r + 1));
    }
  }
  const FxStairInverse inv = invert_quantized_stair(diag, support, off_values, profile);

  std::vector<FxComplex> x = apply_fx_stair_inverse(inv, mq, profile);

  for (int iter = 0; iter < t; ++iter) {
    std::vector<FxComplex> w(dim);
    for (int r = 0; r < dim; ++r) {
      FxComplex acc{0, 0, profile.prod};
      for (int c = 0; c < dim; ++c) {
        if (on_stair_support(r, c, dim)) continue;
        acc = fxp::fx_add(acc, fxp::fx_mul(fxp::fx_neg(Gq.at(r, c)), x[c], profile.prod));
      }
      w[r] = fxp::fx_add(acc, fxp::rescale(mq[r], profile.prod));
    }
    x = apply_fx_stair_inverse(inv, w, profile);
  }

  ComplexVector out(dim);
  for (int i = 0; i < dim; ++i) out[i] = x[i].value();
  return out;
}

ComplexVector run_detector(const DetectorConfig& cfg, const ComplexMatrix& G,
                           const ComplexVector& xmf, int bs_antennas, OpTally* tally) {
  switch (cfg.algorithm) {
    case Algorithm::MmseExact:
    case Algorithm::ZfExact:
      return detect_exact(G, xmf);
    case Algorithm::Nsa:
      return detect_nsa(G, xmf, cfg.iterations, tally);
    case Algorithm::GaussSeidel:
      return detect_gs(G, xmf, cfg.iterations, tally);
    case Algorithm::ConjugateGradient:
      return detect_cg(G, xmf, cfg.iterations, tally);
    case Algorithm::Richardson: {
      const double omega = (cfg.richardson_omega > 0.0)
                               ? cfg.richardson_omega
                               : 1.0 / static_cast<double>(bs_antennas + G.rows());
      return detect_richardson(G, xmf, cfg.iterations, omega, tally);
    }
    case Algorithm::Stair:
      if (cfg.numeric_mode == NumericMode::Fixed)
        return detect_stair_fixed(G, xmf, cfg.iterations, cfg.fxp_profile);
      return detect_stair(G, xmf, cfg.iterations, tally);
  }
  throw ArgumentError("run_detector: unknown algorithm");
}

}  // namespace stairdet
