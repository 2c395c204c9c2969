#pragma once

#include <string>
#include <vector>

#include "spike_regions/spike_regions.hpp"

namespace testing_util {

using spike_regions::Rational;

inline Rational Q(long p, long q = 1) { return Rational(p) / Rational(q); }
inline Rational R(const std::string& s) { return spike_regions::parse_scalar<Rational>(s); }

inline std::vector<std::uint8_t> bits(const std::string& s) {
  std::vector<std::uint8_t> v;
  for (char c : s) v.push_back(c == '1');
  return v;
}

// Uniform rational p/den with p in [lo*den, hi*den].
inline Rational random_rational(spike_regions::Rng& rng, long lo, long hi, long den) {
  return Q(spike_regions::uniform_int(rng, lo * den, hi * den), den);
}

}  // namespace testing_util
