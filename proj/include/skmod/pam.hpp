#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "numerics.hpp"

namespace skmod {

using Message = std::uint64_t;

// Gray label of a constellation position, and its inverse.
inline std::uint64_t gray_label(std::uint64_t pos) { return pos ^ (pos >> 1); }

inline std::uint64_t gray_rank(std::uint64_t label) {
  std::uint64_t p = label;
  for (int s = 1; s < 64; s <<= 1) p ^= p >> s;
  return p;
}

// Unit-power M-PAM grid, M = 2^rate_bits. Points are generated on demand so
// a 40-bit constellation never materializes 2^40 values.
struct PamConstellation {
  unsigned rate_bits = 1;
  std::uint64_t levels = 2;
  double eta = 1.0;  // half the spacing; points are (2k - (M-1)) * eta

  double point(std::uint64_t position) const {
    return (2.0 * static_cast<double>(position) - static_cast<double>(levels - 1)) * eta;
  }

  // convenience for small M only
  std::vector<double> points() const {
    std::vector<double> out(static_cast<std::size_t>(levels));
    for (std::uint64_t k = 0; k < levels; ++k) out[static_cast<std::size_t>(k)] = point(k);
    return out;
  }
};

inline PamConstellation build_constellation(unsigned rate_bits) {
  if (rate_bits < 1 || rate_bits > 40)
    throw config_error("build_constellation: rate_bits must be in [1, 40]");
  PamConstellation c;
  c.rate_bits = rate_bits;
  c.levels = std::uint64_t{1} << rate_bits;
  c.eta = std::sqrt(3.0 / (std::exp2(2.0 * rate_bits) - 1.0));
  return c;
}

// Message w -> amplitude, with Gray labeling along the grid so adjacent
// points differ in one bit.
inline double gray_encode(Message w, const PamConstellation& c) {
  if (w >= c.levels) throw std::domain_error("gray_encode: message index out of range");
  return c.point(gray_rank(w));
}

// Nearest-point decode. Ties snap to the lower amplitude; estimates beyond
// the grid clamp to the outermost point.
inline Message decode_min_distance(double theta_hat, const PamConstellation& c) {
  if (!std::isfinite(theta_hat)) throw std::domain_error("decode_min_distance: non-finite input");
  double u = (theta_hat / c.eta + static_cast<double>(c.levels - 1)) * 0.5;
  double p = std::ceil(u - 0.5);
  if (p < 0.0) p = 0.0;
  double top = static_cast<double>(c.levels - 1);
  if (p > top) p = top;
  return gray_label(static_cast<std::uint64_t>(p));
}

// Union bound on symbol error for unit-power PAM at the given snr,
// 2*Q(sqrt(3*snr / (2^{2R} - 1))). rate_bits_total may be fractional.
inline double pam_symbol_error_bound(double snr, double rate_bits_total) {
  if (!(snr > 0.0)) throw std::domain_error("pam_symbol_error_bound: snr must be positive");
  if (!(rate_bits_total > 0.0))
    throw std::domain_error("pam_symbol_error_bound: rate must be positive");
  double denom = std::exp2(2.0 * rate_bits_total) - 1.0;
  return 2.0 * qfunc(std::sqrt(3.0 * snr / denom));
}

// One-shot capacity gap in dB implied by a symbol error target:
// the extra snr a single PAM use needs beyond capacity to hit pe.
inline double gamma0_db(double pe) {
  if (!(pe > 0.0 && pe < 1.0)) throw std::domain_error("gamma0_db: pe outside (0,1)");
  double q = qfunc_inv(pe / 2.0);
  return to_db(q * q / 3.0);
}

// Gray-labeled bit error bound: nearest-neighbor errors flip one bit,
// next-nearest at triple the distance flip at most two.
inline double bit_error_bound(double snr, double rate_bits_total) {
  if (!(snr > 0.0)) throw std::domain_error("bit_error_bound: snr must be positive");
  if (!(rate_bits_total > 0.0)) throw std::domain_error("bit_error_bound: rate must be positive");
  double arg = std::sqrt(3.0 * snr / (std::exp2(2.0 * rate_bits_total) - 1.0));
  return (2.0 / rate_bits_total) * qfunc(arg) + 2.0 * qfunc(3.0 * arg);
}

inline int bit_errors_between(Message a, Message b) { return std::popcount(a ^ b); }

}  // namespace skmod
