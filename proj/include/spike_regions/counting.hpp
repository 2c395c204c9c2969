#pragma once

#include <map>
#include <tuple>

#include "spike_regions/errors.hpp"
#include "spike_regions/scalar.hpp"

namespace spike_regions {

inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return BigInt(0);
  BigInt r(1);
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Maximum number of regions cut out of R^d by n families of at most k
/// parallel hyperplanes each: sum_{i=0}^{d} k^i C(n, i).
inline BigInt r_regions_closed(long n, long d, long k) {
  if (n < 0 || d < 0 || k < 1) throw ValidationError("r_regions: need n, d >= 0 and k >= 1");
  BigInt total(0);
  BigInt kp(1);
  for (long i = 0; i <= d; ++i) {
    total += kp * binomial(n, i);
    kp *= k;
  }
  return total;
}

/// Deletion-restriction recursion r_{n,d} = r_{n-1,d} + k r_{n-1,d-1},
/// with r_{0,d} = 1 and r_{n,0} = 1.
inline BigInt r_regions_recursive(long n, long d, long k) {
  if (n < 0 || d < 0 || k < 1) throw ValidationError("r_regions: need n, d >= 0 and k >= 1");
  std::map<std::pair<long, long>, BigInt> memo;
  auto rec = [&](auto&& self, long nn, long dd) -> BigInt {
    if (nn == 0 || dd == 0) return BigInt(1);
    const auto key = std::make_pair(nn, dd);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    BigInt v = self(self, nn - 1, dd) + BigInt(k) * self(self, nn - 1, dd - 1);
    memo.emplace(key, v);
    return v;
  };
  return rec(rec, n, d);
}

/// Upper bound on activation (and constant) regions of a network with n1
/// first-layer neurons, input dimension n_in and latency T.
inline BigInt count_bound(long n1, long n_in, long T) {
  if (n1 < 1 || n_in < 1 || T < 1) throw ValidationError("count_bound: arguments must be >= 1");
  const long hyperplanes = (T * T + T) / 2;
  if (n1 >= n_in) return r_regions_closed(n1, n_in, hyperplanes);
  return boost::multiprecision::pow(BigInt(hyperplanes + 1), static_cast<unsigned>(n1));
}

}  // namespace spike_regions
