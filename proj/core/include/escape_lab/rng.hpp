#pragma once

// Seeding and sampling helpers shared by every simulator. Everything here is
// defined bit-for-bit (no std::*_distribution), so outputs are reproducible
// across standard library implementations.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace escape_lab {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive hash of a seed and a list of stream coordinates.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

/// Maps 64 random bits to a double in the open interval (0, 1).
constexpr double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double exponential_from_bits(std::uint64_t bits, double rate) noexcept {
  return -std::log(to_open_unit(bits)) / rate;
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

inline double sample_exponential(Engine& rng, double rate) { return exponential_from_bits(rng(), rate); }

inline double sample_unit(Engine& rng) { return to_open_unit(rng()); }

/// Uniform integer in [0, n) by multiply-shift with rejection (exact).
inline std::uint64_t sample_index(Engine& rng, std::uint64_t n) {
  __extension__ using u128 = unsigned __int128;
  u128 m = static_cast<u128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Poisson arrival times on [0, horizon) at `rate`, in increasing order.
template <typename Out>
void sample_poisson_times(Engine& rng, double rate, double horizon, Out out) {
  if (rate <= 0.0) return;
  double t = sample_exponential(rng, rate);
  while (t < horizon) {
    *out++ = t;
    t += sample_exponential(rng, rate);
  }
}

}  // namespace escape_lab
