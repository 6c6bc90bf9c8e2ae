// Copyright 2026 The mull Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Continuous semirings: Bool, naturals with infinity, non-negative rationals
// with infinity, and a floating variant of the latter. In every instance
// 0·∞ = 0.

#ifndef MULL_SEMIRING_HPP
#define MULL_SEMIRING_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <compare>
#include <concepts>
#include <limits>
#include <sstream>
#include <string>

#include "mull/error.hpp"

namespace mull {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

/// Parses "3", "-2", "0.25", "1e-3", "1/4" exactly.
inline Rational parse_rational(const std::string& text) {
  auto bad = [&]() { return InputError("not a number: '" + text + "'"); };
  if (text.empty()) throw bad();
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Rational d = parse_rational(text.substr(slash + 1));
    if (d == 0) throw InputError("division by zero in '" + text + "'");
    return parse_rational(text.substr(0, slash)) / d;
  }
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
  BigInt num = 0, den = 1;
  bool digits = false, dot = false;
  for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
    char c = text[i];
    if (c == '.' && !dot) {
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      num = num * 10 + (c - '0');
      if (dot) den *= 10;
      digits = true;
    } else {
      throw bad();
    }
  }
  if (!digits) throw bad();
  Rational r(num, den);
  if (i < text.size()) {
    std::string e = text.substr(i + 1);
    if (e.empty()) throw bad();
    long exp = 0;
    try {
      std::size_t used = 0;
      exp = std::stol(e, &used);
      if (used != e.size()) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
    if (std::labs(exp) > 4000) throw InputError("exponent out of range in '" + text + "'");
    BigInt p = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exp)));
    if (exp >= 0) r *= p;
    else r /= p;
  }
  return neg ? -r : r;
}

inline std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// A value of T or +∞.
template <class T>
struct Extended {
  T value{};
  bool inf = false;

  static Extended infinity() { return {T{}, true}; }
  friend bool operator==(const Extended& a, const Extended& b) {
    return a.inf == b.inf && (a.inf || a.value == b.value);
  }
  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
    if (a.inf || b.inf) return a.inf <=> b.inf;
    return a.value == b.value ? std::strong_ordering::equal
                              : (a.value < b.value ? std::strong_ordering::less : std::strong_ordering::greater);
  }
};

namespace detail {

template <class T>
Extended<T> ext_add(const Extended<T>& a, const Extended<T>& b) {
  if (a.inf || b.inf) return Extended<T>::infinity();
  return {a.value + b.value, false};
}

template <class T>
Extended<T> ext_mul(const Extended<T>& a, const Extended<T>& b) {
  bool a0 = !a.inf && a.value == 0, b0 = !b.inf && b.value == 0;
  if (a0 || b0) return {T(0), false};
  if (a.inf || b.inf) return Extended<T>::infinity();
  return {a.value * b.value, false};
}

inline bool is_inf_literal(const std::string& s) { return s == "inf" || s == "∞"; }

}  // namespace detail

template <class S>
concept Semiring = requires(typename S::value_type a, typename S::value_type b, const std::string& s) {
  { S::zero() } -> std::convertible_to<typename S::value_type>;
  { S::one() } -> std::convertible_to<typename S::value_type>;
  { S::add(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::mul(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::leq(a, b) } -> std::convertible_to<bool>;
  { S::parse(s) } -> std::convertible_to<typename S::value_type>;
  { S::to_string(a) } -> std::convertible_to<std::string>;
  { S::name } -> std::convertible_to<const char*>;
  { S::exact } -> std::convertible_to<bool>;
};

struct BoolSemiring {
  using value_type = bool;
  static constexpr const char* name = "bool";
  static constexpr bool exact = true;
  static bool zero() { return false; }
  static bool one() { return true; }
  static bool add(bool a, bool b) { return a || b; }
  static bool mul(bool a, bool b) { return a && b; }
  static bool leq(bool a, bool b) { return !a || b; }
  static bool parse(const std::string& s) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw InputError("not a boolean: '" + s + "'");
  }
  static std::string to_string(bool a) { return a ? "1" : "0"; }
};

struct NatInf {
  using value_type = Extended<BigInt>;
  static constexpr const char* name = "natinf";
  static constexpr bool exact = true;
  static value_type zero() { return {0, false}; }
  static value_type one() { return {1, false}; }
  static value_type inf() { return value_type::infinity(); }
  static value_type of(long n) {
    if (n < 0) throw InputError("negative natural");
    return {BigInt(n), false};
  }
  static value_type add(const value_type& a, const value_type& b) { return detail::ext_add(a, b); }
  static value_type mul(const value_type& a, const value_type& b) { return detail::ext_mul(a, b); }
  static bool leq(const value_type& a, const value_type& b) { return a <= b; }
  static value_type parse(const std::string& s) {
    if (detail::is_inf_literal(s)) return inf();
    Rational r = parse_rational(s);
    if (r < 0 || denominator(r) != 1) throw InputError("not a natural number: '" + s + "'");
    return {numerator(r), false};
  }
  static std::string to_string(const value_type& a) { return a.inf ? "inf" : a.value.str(); }
};

struct RealInf {
  using value_type = Extended<Rational>;
  static constexpr const char* name = "realinf";
  static constexpr bool exact = true;
  static value_type zero() { return {0, false}; }
  static value_type one() { return {1, false}; }
  static value_type inf() { return value_type::infinity(); }
  static value_type of(const Rational& r) {
    if (r < 0) throw InputError("negative weight");
    return {r, false};
  }
  static value_type add(const value_type& a, const value_type& b) { return detail::ext_add(a, b); }
  static value_type mul(const value_type& a, const value_type& b) { return detail::ext_mul(a, b); }
  static bool leq(const value_type& a, const value_type& b) { return a <= b; }
  static value_type parse(const std::string& s) {
    if (detail::is_inf_literal(s)) return inf();
    Rational r = parse_rational(s);
    if (r < 0) throw InputError("negative weight: '" + s + "'");
    return {r, false};
  }
  static std::string to_string(const value_type& a) { return a.inf ? "inf" : rational_to_string(a.value); }
};

/// Inexact R∞ on doubles.
struct FloatInf {
  using value_type = double;
  static constexpr const char* name = "float";
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double inf() { return std::numeric_limits<double>::infinity(); }
  static double add(double a, double b) { return a + b; }
  static double mul(double a, double b) { return a == 0.0 || b == 0.0 ? 0.0 : a * b; }
  static bool leq(double a, double b) { return a <= b; }
  static double parse(const std::string& s) {
    if (detail::is_inf_literal(s)) return inf();
    double d = to_double(parse_rational(s));
    if (d < 0) throw InputError("negative weight: '" + s + "'");
    return d;
  }
  static std::string to_string(double a) {
    if (std::isinf(a)) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << a;
    return os.str();
  }
};

static_assert(Semiring<BoolSemiring> && Semiring<NatInf> && Semiring<RealInf> && Semiring<FloatInf>);

}  // namespace mull

#endif  // MULL_SEMIRING_HPP
