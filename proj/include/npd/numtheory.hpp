#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

namespace npd {

inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
  assert(a >= 1 && b >= 1);
  return std::gcd(a, b);
}

inline std::int64_t lcm(std::int64_t a, std::int64_t b) {
  assert(a >= 1 && b >= 1);
  return std::lcm(a, b);
}

/// Euler totient; phi(1) = 1.
inline std::int64_t totient(std::int64_t p) {
  assert(p >= 1);
  std::int64_t result = p;
  std::int64_t n = p;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      result -= result / d;
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

/// All divisors of p in increasing order, including 1 and p.
inline std::vector<std::int64_t> divisors(std::int64_t p) {
  assert(p >= 1);
  std::vector<std::int64_t> low, high;
  for (std::int64_t d = 1; d * d <= p; ++d) {
    if (p % d == 0) {
      low.push_back(d);
      if (d != p / d) high.push_back(p / d);
    }
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

/// Ramanujan sum c_q(n) = sum over k in 1..q with (k,q)=1 of e^{j 2 pi k n / q}.
/// The sum is real and integer-valued; computed from the trigonometric
/// definition and rounded to the nearest integer.
inline std::int64_t ramanujan_sum(std::int64_t q, std::int64_t n) {
  assert(q >= 1 && n >= 0);
  double acc = 0.0;
  for (std::int64_t k = 1; k <= q; ++k) {
    if (std::gcd(k, q) == 1) {
      acc += std::cos(2.0 * std::numbers::pi * static_cast<double>(k) *
                      static_cast<double>(n % q) / static_cast<double>(q));
    }
  }
  return static_cast<std::int64_t>(std::llround(acc));
}

/// Distance between the trigonometric sum and its integer rounding;
/// stays well below 1e-6 for q up to a few hundred.
inline double ramanujan_sum_rounding_error(std::int64_t q, std::int64_t n) {
  double acc = 0.0;
  for (std::int64_t k = 1; k <= q; ++k) {
    if (std::gcd(k, q) == 1) {
      acc += std::cos(2.0 * std::numbers::pi * static_cast<double>(k) *
                      static_cast<double>(n % q) / static_cast<double>(q));
    }
  }
  return std::abs(acc - static_cast<double>(std::llround(acc)));
}

template <class Range>
std::int64_t lcm_of_set(const Range& ps) {
  std::int64_t acc = 1;
  for (std::int64_t p : ps) acc = std::lcm(acc, p);
  return acc;
}

}  // namespace npd
