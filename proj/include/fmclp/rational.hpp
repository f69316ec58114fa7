#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fmclp {

/* Exact rational on int64 with overflow-checked arithmetic. Used for OWA
 * family weights, the fairness exponent alpha, and power-cone exponent
 * extraction, all of which stay tiny; anything larger throws. */
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0 always

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }

  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
    return static_cast<std::int64_t>(v);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    __int128 g = gcd128(n < 0 ? -n : n, d);
    return raw(checked(n / g), checked(d / g));
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num, b.den); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num * b.num;
    __int128 d = (__int128)a.den * b.den;
    __int128 g = gcd128(n < 0 ? -n : n, d);
    return raw(checked(n / g), checked(d / g));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::invalid_argument("rational: divide by zero");
    return a * Rational(b.den, b.num);
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

 private:
  static Rational raw(std::int64_t n, std::int64_t d) { Rational r; r.num = n; r.den = d; return r; }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
};

/* Accepts "3", "-3", "2/5", and plain decimals like "0.25". */
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rational: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::int64_t n = std::stoll(s.substr(0, slash));
    std::int64_t d = std::stoll(s.substr(slash + 1));
    return Rational(n, d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(s));
  std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  if (tail.size() > 15) throw std::invalid_argument("rational: too many decimal digits: " + s);
  std::int64_t den = 1;
  for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
  std::int64_t whole = head.empty() || head == "-" ? 0 : std::stoll(head);
  std::int64_t frac = tail.empty() ? 0 : std::stoll(tail);
  bool neg = !head.empty() && head[0] == '-';
  std::int64_t n = (neg ? -1 : 1) * ((whole < 0 ? -whole : whole) * den + frac);
  return Rational(n, den);
}

}  // namespace fmclp
