#pragma once

// Scalar types for the two arithmetic modes.
//
// Exact mode uses arbitrary precision rationals (GMP through
// Boost.Multiprecision, expression templates off so `auto` is safe in
// generic code). Float mode uses double with a fixed comparison tolerance.
// Every template in this library is parameterised on one of the two and a
// computation never mixes them; use scalar_cast<> to convert explicitly.

#include <boost/multiprecision/gmp.hpp>

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "spike_regions/errors.hpp"

namespace spike_regions {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

enum class Mode { Exact, Float };

inline constexpr double kFloatTolerance = 1e-9;

inline std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "exact") return Mode::Exact;
  if (s == "float") return Mode::Float;
  throw ValidationError("unknown numeric mode '" + std::string(s) + "' (expected exact|float)");
}

namespace detail {

// GMP reads a leading 0 as an octal prefix.
inline std::string strip_zeros(const std::string& digits) {
  std::size_t sign = (!digits.empty() && digits[0] == '-') ? 1 : 0;
  std::size_t i = sign;
  while (i + 1 < digits.size() && digits[i] == '0') ++i;
  return digits.substr(0, sign) + digits.substr(i);
}

// Parses "p", "p/q", or a decimal literal such as "-0.125" or "1.5e-3" into an
// exact rational. Decimal input is read digit-by-digit, never through double.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    v = (b == std::string::npos) ? std::string{} : v.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw FormatError("empty number");
  if (s.find('/') != std::string::npos) {
    const auto slash = s.find('/');
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    trim(num);
    trim(den);
    auto integral = [](const std::string& v) {
      if (v.empty()) return false;
      std::size_t i = (v[0] == '-' || v[0] == '+') ? 1 : 0;
      if (i == v.size()) return false;
      for (; i < v.size(); ++i)
        if (v[i] < '0' || v[i] > '9') return false;
      return true;
    };
    if (!integral(num) || !integral(den)) throw FormatError("malformed rational '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    if (den[0] == '+') den.erase(0, 1);
    BigInt n(strip_zeros(num)), d(strip_zeros(den));
    if (d == 0) throw FormatError("zero denominator in '" + s + "'");
    return Rational(n, d);
  }
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '-' || s[i] == '+') {
    negative = s[i] == '-';
    ++i;
  }
  std::string digits;
  long exponent = 0;
  bool seen_digit = false, seen_point = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      throw FormatError("malformed number '" + s + "'");
    }
  }
  if (!seen_digit) throw FormatError("malformed number '" + s + "'");
  if (i < s.size()) {
    long e = 0;
    const char* first = s.data() + i + 1;
    const char* last = s.data() + s.size();
    if (first < last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc{} || ptr != last) throw FormatError("malformed exponent in '" + s + "'");
    exponent += e;
  }
  BigInt mantissa(strip_zeros(digits));
  if (negative) mantissa = -mantissa;
  if (exponent >= 0) {
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent));
    return Rational(mantissa * scale);
  }
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-exponent));
  return Rational(mantissa, scale);
}

}  // namespace detail

template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr Mode mode = Mode::Exact;
  static constexpr bool exact = true;

  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static int sign(const Rational& a) { return a.sign(); }
  static Rational parse(std::string_view s) { return detail::parse_rational(s); }
  static std::string format(const Rational& a) { return a.str(); }
  static double to_double(const Rational& a) { return a.convert_to<double>(); }
  static Rational from_double(double d) {
    if (!std::isfinite(d)) throw ValidationError("non-finite value cannot be made exact");
    return Rational(d);
  }
  // Smallest integer >= a.
  static BigInt ceil(const Rational& a) {
    const BigInt n = boost::multiprecision::numerator(a);
    const BigInt d = boost::multiprecision::denominator(a);
    BigInt q = n / d;  // truncates toward zero
    if (q * d != n && n > 0) q += 1;
    return q;
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr Mode mode = Mode::Float;
  static constexpr bool exact = false;

  static bool equal(double a, double b) { return std::abs(a - b) <= kFloatTolerance; }
  static int sign(double a) { return a > kFloatTolerance ? 1 : (a < -kFloatTolerance ? -1 : 0); }
  static double parse(std::string_view text) {
    std::string s(text);
    if (s.find('/') != std::string::npos) return detail::parse_rational(s).convert_to<double>();
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first < last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw FormatError("malformed number '" + s + "'");
    return v;
  }
  // Shortest representation that round-trips bit-exactly.
  static std::string format(double a) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, a);
    return std::string(buf, ptr);
  }
  static double to_double(double a) { return a; }
  static double from_double(double d) { return d; }
  static BigInt ceil(double a) { return BigInt(std::ceil(a)); }
};

template <typename S>
concept Scalar = requires { ScalarTraits<S>::mode; };

template <Scalar To, Scalar From>
To scalar_cast(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (std::is_same_v<To, double>) {
    return ScalarTraits<From>::to_double(v);
  } else {
    return ScalarTraits<To>::from_double(ScalarTraits<From>::to_double(v));
  }
}

template <Scalar S>
S parse_scalar(std::string_view s) {
  return ScalarTraits<S>::parse(s);
}

template <Scalar S>
std::string format_scalar(const S& v) {
  return ScalarTraits<S>::format(v);
}

template <Scalar S>
bool scalar_equal(const S& a, const S& b) {
  return ScalarTraits<S>::equal(a, b);
}

template <Scalar S>
S abs_value(const S& v) {
  return v < S(0) ? S(-v) : v;
}

// beta^k with beta^0 == 1 (also for beta == 0).
template <Scalar S>
S power(const S& base, int k) {
  S r(1);
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

}  // namespace spike_regions
