// Copyright 2026 The riskeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace riskeq {

using Rational = mpq_class;

// Arithmetic mode of a Scalar. Exact values are GMP rationals; float values
// are IEEE doubles compared against an explicit tolerance.
enum class Mode { kExact, kFloat };

inline constexpr double kDefaultTol = 1e-9;

inline const char* to_string(Mode m) {
  return m == Mode::kExact ? "exact" : "float";
}

class ModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Thrown when an exact-mode root is requested for a radicand that is not a
// perfect power of a rational.
class InexactRoot : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(Rational v) : value_(std::move(v)) {
    std::get<Rational>(value_).canonicalize();
  }
  explicit Scalar(double v) : value_(v) {}

  static Scalar exact(long num, long den = 1) {
    if (den == 0) throw std::domain_error("zero denominator");
    return Scalar(Rational(num, den));
  }
  static Scalar real(double v) { return Scalar(v); }
  static Scalar from_int(long v, Mode m) {
    return m == Mode::kExact ? Scalar(Rational(v)) : Scalar(double(v));
  }
  static Scalar from_rational(const Rational& q, Mode m) {
    return m == Mode::kExact ? Scalar(q) : Scalar(q.get_d());
  }
  static Scalar zero(Mode m) { return from_int(0, m); }
  static Scalar one(Mode m) { return from_int(1, m); }

  Mode mode() const {
    return std::holds_alternative<Rational>(value_) ? Mode::kExact
                                                    : Mode::kFloat;
  }
  bool is_exact() const { return mode() == Mode::kExact; }

  const Rational& rational() const {
    if (!is_exact()) throw ModeError("rational() on a float scalar");
    return std::get<Rational>(value_);
  }
  double to_double() const {
    if (is_exact()) return std::get<Rational>(value_).get_d();
    return std::get<double>(value_);
  }

  // Explicit conversion; exact -> float rounds, float -> exact is lossless
  // (every finite double is a dyadic rational).
  Scalar as(Mode m) const {
    if (m == mode()) return *this;
    if (m == Mode::kFloat) return Scalar(to_double());
    double d = std::get<double>(value_);
    if (!std::isfinite(d)) throw std::domain_error("non-finite to exact");
    Rational q;
    q = d;
    return Scalar(q);
  }

  int sign() const {
    if (is_exact()) return sgn(std::get<Rational>(value_));
    double d = std::get<double>(value_);
    return (d > 0) - (d < 0);
  }
  bool is_zero() const { return sign() == 0; }

  Scalar operator-() const {
    if (is_exact()) return Scalar(Rational(-std::get<Rational>(value_)));
    return Scalar(-std::get<double>(value_));
  }

  Scalar& operator+=(const Scalar& o) { return apply(o, [](auto& a, const auto& b) { a += b; }); }
  Scalar& operator-=(const Scalar& o) { return apply(o, [](auto& a, const auto& b) { a -= b; }); }
  Scalar& operator*=(const Scalar& o) { return apply(o, [](auto& a, const auto& b) { a *= b; }); }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    return apply(o, [](auto& a, const auto& b) { a /= b; });
  }

  // Plain integers adopt the mode of the scalar they meet.
  Scalar& operator+=(long v) { return *this += from_int(v, mode()); }
  Scalar& operator-=(long v) { return *this -= from_int(v, mode()); }
  Scalar& operator*=(long v) { return *this *= from_int(v, mode()); }
  Scalar& operator/=(long v) { return *this /= from_int(v, mode()); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator+(Scalar a, long b) { return a += b; }
  friend Scalar operator-(Scalar a, long b) { return a -= b; }
  friend Scalar operator*(Scalar a, long b) { return a *= b; }
  friend Scalar operator/(Scalar a, long b) { return a /= b; }
  friend Scalar operator+(long a, const Scalar& b) { return from_int(a, b.mode()) += b; }
  friend Scalar operator-(long a, const Scalar& b) { return from_int(a, b.mode()) -= b; }
  friend Scalar operator*(long a, const Scalar& b) { return from_int(a, b.mode()) *= b; }
  friend Scalar operator/(long a, const Scalar& b) { return from_int(a, b.mode()) /= b; }

  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
    a.require_same(b);
    if (a.is_exact()) {
      int c = cmp(std::get<Rational>(a.value_), std::get<Rational>(b.value_));
      return c <=> 0;
    }
    return std::get<double>(a.value_) <=> std::get<double>(b.value_);
  }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }
  friend std::partial_ordering operator<=>(const Scalar& a, long b) {
    return a <=> from_int(b, a.mode());
  }
  friend bool operator==(const Scalar& a, long b) { return a == from_int(b, a.mode()); }

  Scalar pow(unsigned k) const {
    if (is_exact()) {
      const Rational& q = std::get<Rational>(value_);
      mpz_class num, den;
      mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), k);
      mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), k);
      return Scalar(Rational(num, den));
    }
    double base = std::get<double>(value_), acc = 1.0;
    for (unsigned e = k; e > 0; e >>= 1) {
      if (e & 1U) acc *= base;
      base *= base;
    }
    return Scalar(acc);
  }

  // "p/q" (or "p") in exact mode; shortest round-trip decimal in float mode.
  std::string to_string() const {
    if (is_exact()) return std::get<Rational>(value_).get_str();
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
    return std::string(buf, res.ptr);
  }

  // Accepts "p", "p/q" and finite decimals such as "-0.125"; always exact.
  static Scalar parse(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string& t) {
      while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
      std::size_t b = 0;
      while (b < t.size() && std::isspace(static_cast<unsigned char>(t[b]))) ++b;
      t.erase(0, b);
    };
    trim(s);
    if (s.empty()) throw std::invalid_argument("empty number");
    try {
      if (auto dot = s.find('.'); dot != std::string::npos) {
        if (s.find_first_of("eE/") != std::string::npos)
          throw std::invalid_argument("unsupported number syntax");
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
          throw std::invalid_argument("bad decimal");
        if (digits[0] == '+') digits.erase(0, 1);
        mpz_class num(digits, 10), den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
        return Scalar(Rational(num, den));
      }
      if (s[0] == '+') s.erase(0, 1);
      Rational q(s, 10);
      if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
      return Scalar(q);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
    }
  }

 private:
  void require_same(const Scalar& o) const {
    if (mode() != o.mode())
      throw ModeError("mixed exact and float scalars in one expression");
  }
  template <class Op>
  Scalar& apply(const Scalar& o, Op op) {
    require_same(o);
    if (is_exact()) {
      op(std::get<Rational>(value_), std::get<Rational>(o.value_));
      std::get<Rational>(value_).canonicalize();
    } else {
      op(std::get<double>(value_), std::get<double>(o.value_));
    }
    return *this;
  }

  std::variant<Rational, double> value_;
};

inline Scalar abs(const Scalar& x) { return x.sign() < 0 ? -x : x; }
inline const Scalar& min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
inline const Scalar& max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

namespace detail {

inline bool exact_integer_root(const mpz_class& v, unsigned r, mpz_class& out) {
  if (v < 0) return false;
  return mpz_root(out.get_mpz_t(), v.get_mpz_t(), r) != 0;
}

}  // namespace detail

// r-th root of a nonnegative scalar. Exact mode succeeds only for perfect
// r-th powers of rationals and throws InexactRoot otherwise.
inline Scalar root(const Scalar& x, unsigned r) {
  if (r == 0) throw std::domain_error("zeroth root");
  if (x.sign() < 0) throw std::domain_error("root of a negative number");
  if (r == 1) return x;
  if (!x.is_exact()) {
    double d = x.to_double();
    return Scalar(r == 2 ? std::sqrt(d) : std::pow(d, 1.0 / r));
  }
  const Rational& q = x.rational();
  mpz_class num, den;
  if (!detail::exact_integer_root(q.get_num(), r, num) ||
      !detail::exact_integer_root(q.get_den(), r, den))
    throw InexactRoot("radicand " + x.to_string() + " is not an exact power");
  return Scalar(Rational(num, den));
}

inline Scalar sqrt(const Scalar& x) { return root(x, 2); }

// Tolerance-aware comparisons: exact mode ignores tol.
inline double effective_tol(const Scalar& x, double tol) {
  return x.is_exact() ? 0.0 : tol;
}
inline bool approx_equal(const Scalar& a, const Scalar& b, double tol = kDefaultTol) {
  if (a.is_exact() && b.is_exact()) return a == b;
  return std::abs(a.to_double() - b.to_double()) <= tol;
}
// a < b - tol (a is definitely below b).
inline bool definitely_less(const Scalar& a, const Scalar& b, double tol = kDefaultTol) {
  if (a.is_exact() && b.is_exact()) return a < b;
  return a.to_double() < b.to_double() - tol;
}
inline bool is_positive(const Scalar& x, double tol = kDefaultTol) {
  if (x.is_exact()) return x.sign() > 0;
  return x.to_double() > tol;
}

}  // namespace riskeq
