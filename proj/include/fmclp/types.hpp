#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmclp {

struct Point {
  std::vector<double> coords;

  Point() = default;
  Point(std::initializer_list<double> c) : coords(c) {}
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t l) const { return coords[l]; }
  double& operator[](std::size_t l) { return coords[l]; }
  friend bool operator==(const Point& a, const Point& b) { return a.coords == b.coords; }
};

inline Point point2(double x, double y) { return Point{x, y}; }

struct NormSpec {
  enum class Kind { Euclidean, L1, LInf, LTau };
  Kind kind = Kind::Euclidean;
  double tau = 2.0;  // only meaningful for LTau, must be >= 1

  static NormSpec euclidean() { return {Kind::Euclidean, 2.0}; }
  static NormSpec l1() { return {Kind::L1, 1.0}; }
  static NormSpec linf() { return {Kind::LInf, std::numeric_limits<double>::infinity()}; }
  static NormSpec ltau(double t) {
    if (!(t >= 1.0)) throw std::invalid_argument("norm: tau must be >= 1");
    return {Kind::LTau, t};
  }
  friend bool operator==(const NormSpec& a, const NormSpec& b) {
    return a.kind == b.kind && (a.kind != Kind::LTau || a.tau == b.tau);
  }
};

/* Extended real with a single -inf sentinel; +inf and NaN are rejected.
 * Covers the alpha >= 1 fairness values at zero coverage. */
class ExtReal {
 public:
  ExtReal() : v_(0), neg_inf_(false) {}
  ExtReal(double v) : v_(v), neg_inf_(false) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw std::invalid_argument("ExtReal: value must be finite or -inf");
    if (v == -std::numeric_limits<double>::infinity()) { neg_inf_ = true; v_ = 0; }
  }
  static ExtReal neg_inf() { ExtReal e; e.neg_inf_ = true; return e; }

  bool is_neg_inf() const { return neg_inf_; }
  bool finite() const { return !neg_inf_; }
  double value() const {
    if (neg_inf_) throw std::logic_error("ExtReal: -inf has no finite value");
    return v_;
  }
  double value_or(double fallback) const { return neg_inf_ ? fallback : v_; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.neg_inf_ || b.neg_inf_) return a.neg_inf_ == b.neg_inf_;
    return a.v_ == b.v_;
  }
  friend bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.neg_inf_) return !b.neg_inf_;
    if (b.neg_inf_) return false;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return a < b || a == b; }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return b <= a; }
  friend std::ostream& operator<<(std::ostream& os, const ExtReal& e) {
    if (e.neg_inf_) return os << "-inf";
    return os << e.v_;
  }

 private:
  double v_;
  bool neg_inf_;
};

struct Instance {
  std::vector<Point> points;     // demand points a_i
  std::vector<double> weights;   // omega_i >= 0
  NormSpec norm = NormSpec::euclidean();
  std::vector<Point> candidates; // optional finite location set for discrete solves
  std::string name;
  std::uint64_t seed = 0;
  bool normalized = false;

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points[0].dim(); }
  double total_weight() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
  }
  void validate() const {
    if (points.size() != weights.size())
      throw std::invalid_argument("instance: points/weights size mismatch");
    for (const auto& p : points) {
      if (p.dim() != dim()) throw std::invalid_argument("instance: mixed dimensions");
      for (double c : p.coords)
        if (!std::isfinite(c)) throw std::invalid_argument("instance: non-finite coordinate");
    }
    for (double w : weights)
      if (!(w >= 0) || !std::isfinite(w)) throw std::invalid_argument("instance: weights must be finite and >= 0");
    for (const auto& c : candidates)
      if (c.dim() != dim()) throw std::invalid_argument("instance: candidate dimension mismatch");
  }
};

/* sha-256 over a canonical text rendering; see instance_io.cpp. */
std::string instance_hash(const Instance& inst);

}  // namespace fmclp
