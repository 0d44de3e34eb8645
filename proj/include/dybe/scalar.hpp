#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace dybe {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

// Raised when a meromorphic formula is evaluated on (or numerically at) a pole.
struct ResonanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex from_int(long n) { return {static_cast<double>(n), 0.0}; }
  static Complex from_rational(const Rational& r) { return {r.convert_to<double>(), 0.0}; }
  static bool is_zero(const Complex& z) { return z == Complex(0.0, 0.0); }
  static double magnitude(const Complex& z) { return std::abs(z); }
  static double pivot_score(const Complex& z) { return std::abs(z); }
  static Complex to_complex(const Complex& z) { return z; }
  static const char* backend() { return "float"; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long n) { return Rational(n); }
  static Rational from_rational(const Rational& r) { return r; }
  static bool is_zero(const Rational& r) { return r == 0; }
  static double magnitude(const Rational& r) {
    if (r == 0) return 0.0;
    double d = std::abs(r.convert_to<double>());
    // a nonzero exact value must never read as zero
    return d > 0.0 ? d : std::numeric_limits<double>::denorm_min();
  }
  static double pivot_score(const Rational& r) { return r == 0 ? 0.0 : 1.0; }
  static Complex to_complex(const Rational& r) { return {r.convert_to<double>(), 0.0}; }
  static const char* backend() { return "exact"; }
};

template <class S>
S ipow(const S& x, long n) {
  if (n < 0) return ScalarTraits<S>::one() / ipow(x, -n);
  S result = ScalarTraits<S>::one();
  S base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

// Parses "3", "-1/2", "0.25" into an exact rational.
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational num(text.substr(0, slash));
    Rational den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return num / den;
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(text);
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("bad number '" + text + "'");
  Rational scale = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) scale *= 10;
  return Rational(digits) / scale;
}

}  // namespace dybe
