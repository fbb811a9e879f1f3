#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace essmin {

/// Closed real interval with outward rounding. Every operation returns an
/// interval that contains the exact result for all inputs in the operands.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double v) : lo(v), hi(v) {}  // NOLINT(google-explicit-constructor)
  Interval(double l, double h) : lo(l), hi(h) {}

  static Interval entire() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
};

double round_down(double v);
double round_up(double v);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
/// Natural log. Nonpositive parts map to -inf.
Interval log(const Interval& a);
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);

/// Rectangle in the complex plane; also serves as a complex interval.
struct Box {
  Interval re;
  Interval im;

  std::complex<double> center() const { return {re.mid(), im.mid()}; }
  /// Upper bound on the distance from center() to any point of the box.
  double radius() const;
  double diameter() const { return std::hypot(re.width(), im.width()); }
};

Box operator+(const Box& a, const Box& b);
Box operator-(const Box& a, const Box& b);
Box operator*(const Box& a, const Box& b);
Box operator*(const Interval& a, const Box& b);
/// Range of |z| over the box.
Interval abs(const Box& b);

/// Enclosure of {|p(z)| : z in box} for a polynomial with real coefficients
/// given as enclosing intervals (ascending order). Intersects a disc Taylor
/// form around the centre with plain interval Horner.
Interval poly_abs_range(std::span<const Interval> coeffs, const Box& box);

/// Same for complex interval coefficients.
Interval poly_abs_range(std::span<const Box> coeffs, const Box& box);

}  // namespace essmin
