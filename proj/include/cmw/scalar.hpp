#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include "cmw/errors.hpp"

namespace cmw {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

// Exact value of a finite double.
inline Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw NumericalError("cannot represent a non-finite value exactly");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num(scaled);
  if (exponent >= 0) return Rational(num << exponent);
  return Rational(num, BigInt(1) << (-exponent));
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <class T>
T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

template <class T>
T from_double(double x) {
  if constexpr (is_exact_v<T>) {
    return exact_from_double(x);
  } else {
    return x;
  }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Decimal literal `[-+]digits[.digits][e[-+]digits]` as an exact rational.
inline Rational parse_decimal_exact(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view ex = s.substr(e + 1);
    s = s.substr(0, e);
    bool eneg = false;
    if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
      eneg = ex.front() == '-';
      ex.remove_prefix(1);
    }
    if (!all_digits(ex) || ex.size() > 6) throw ParseError("malformed exponent");
    exp10 = std::stol(std::string(ex));
    if (eneg) exp10 = -exp10;
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw ParseError("malformed number");
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw ParseError("malformed number");
    digits = std::string(s);
  }
  if (digits.empty()) throw ParseError("malformed number");
  BigInt num(digits);
  if (negative) num = -num;
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0) return Rational(num * ten_pow);
  return Rational(num, ten_pow);
}

}  // namespace detail

// Parses "p/q" or a decimal literal. Exact types keep the value exactly.
template <class T>
T parse_scalar(std::string_view text) {
  std::string_view s = detail::trim(text);
  if (s.empty()) throw ParseError("empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view ps = detail::trim(s.substr(0, slash)), qs = detail::trim(s.substr(slash + 1));
    std::string_view pd = ps;
    if (!pd.empty() && (pd.front() == '-' || pd.front() == '+')) pd.remove_prefix(1);
    if (!detail::all_digits(pd) || !detail::all_digits(qs)) throw ParseError("malformed rational '" + std::string(s) + "'");
    BigInt p{std::string(pd)}, q{std::string(qs)};
    if (q == 0) throw ParseError("zero denominator");
    if (!ps.empty() && ps.front() == '-') p = -p;
    Rational r(p, q);
    if constexpr (is_exact_v<T>) {
      return r;
    } else {
      return to_double(r);
    }
  }
  if constexpr (is_exact_v<T>) {
    if (s == "inf" || s == "nan" || s == "-inf") throw ParseError("non-finite value in exact mode");
    return detail::parse_decimal_exact(s);
  } else {
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number '" + std::string(s) + "'");
    return value;
  }
}

// Shortest round-trip text for doubles, "p/q" for rationals.
inline std::string format_scalar(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline std::string format_scalar(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace cmw
