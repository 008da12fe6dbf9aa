#pragma once

#include <cstdint>

namespace escape_lab {

/// log P(Gamma(n, rate) <= t), accurate far into the lower tail (no underflow
/// for n up to at least 1e5). Returns -inf at t = 0.
double log_erlang_cdf(std::uint64_t n, double rate, double t);

/// log P(Gamma(n, rate) > t).
double log_erlang_sf(std::uint64_t n, double rate, double t);

/// P(Gamma(n, rate) <= t) = 1 - e^{-rate t} sum_{k<n} (rate t)^k / k!.
/// Throws DomainError for n = 0, rate <= 0 or t < 0.
double erlang_cdf(std::uint64_t n, double rate, double t);

double erlang_sf(std::uint64_t n, double rate, double t);

}  // namespace escape_lab
