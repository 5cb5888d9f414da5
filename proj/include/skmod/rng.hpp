#pragma once

#include <cstdint>

#include "numerics.hpp"

namespace skmod {

namespace detail {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based per-trial stream: trial t under a given master seed always
// produces the same variates regardless of which worker runs it, which is
// what makes multi-threaded estimates byte-reproducible.
class TrialRng {
 public:
  TrialRng(std::uint64_t master_seed, std::uint64_t trial)
      : state_(detail::mix64(master_seed + detail::mix64(trial + 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform on (0,1), both endpoints excluded
  double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53; }

  // standard normal via the inverse CDF, so the stream stays one-draw-per-variate
  double next_gaussian() { return qfunc_inv(next_unit()); }

  // uniform dither on (-d/2, d/2)
  double next_dither(double d) { return d * (next_unit() - 0.5); }

  // unbiased integer in [0, m) via 128-bit multiply (m up to 2^40 here,
  // so the modulo bias of the plain multiply is < 2^-24 and irrelevant)
  std::uint64_t next_below(std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(m)) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace skmod
