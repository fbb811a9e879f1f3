#include "essmin/interval.hpp"

#include <algorithm>

namespace essmin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down_n(double v, int n) {
  for (int i = 0; i < n; ++i) v = round_down(v);
  return v;
}

double up_n(double v, int n) {
  for (int i = 0; i < n; ++i) v = round_up(v);
  return v;
}

}  // namespace

double round_down(double v) {
  if (std::isinf(v) || std::isnan(v)) return v;
  return std::nextafter(v, -kInf);
}

double round_up(double v) {
  if (std::isinf(v) || std::isnan(v)) return v;
  return std::nextafter(v, kInf);
}

namespace {

// Rounded sum plus the sign of its rounding error (TwoSum).
double sum_lo(double a, double b) {
  double s = a + b;
  if (!std::isfinite(s)) return std::isnan(s) ? -kInf : s;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return e < 0 ? round_down(s) : s;
}

double sum_hi(double a, double b) {
  double s = a + b;
  if (!std::isfinite(s)) return std::isnan(s) ? kInf : s;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return e > 0 ? round_up(s) : s;
}

double prod_lo(double a, double b) {
  double p = a * b;
  if (std::isnan(p)) return 0.0;
  if (std::isinf(p)) return p;
  double e = std::fma(a, b, -p);
  return e < 0 ? round_down(p) : p;
}

double prod_hi(double a, double b) {
  double p = a * b;
  if (std::isnan(p)) return 0.0;
  if (std::isinf(p)) return p;
  double e = std::fma(a, b, -p);
  return e > 0 ? round_up(p) : p;
}

// a / b for b > 0 with directed rounding via the exact residual.
double quot_lo(double a, double b) {
  double q = a / b;
  if (!std::isfinite(q)) return q;
  double r = std::fma(-q, b, a);  // a - q b, exact
  return r < 0 ? round_down(q) : q;
}

double quot_hi(double a, double b) {
  double q = a / b;
  if (!std::isfinite(q)) return q;
  double r = std::fma(-q, b, a);
  return r > 0 ? round_up(q) : q;
}

}  // namespace

Interval operator+(const Interval& a, const Interval& b) {
  return {sum_lo(a.lo, b.lo), sum_hi(a.hi, b.hi)};
}

Interval operator-(const Interval& a, const Interval& b) {
  return {sum_lo(a.lo, -b.hi), sum_hi(a.hi, -b.lo)};
}

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  double l = std::min({prod_lo(a.lo, b.lo), prod_lo(a.lo, b.hi), prod_lo(a.hi, b.lo),
                       prod_lo(a.hi, b.hi)});
  double h = std::max({prod_hi(a.lo, b.lo), prod_hi(a.lo, b.hi), prod_hi(a.hi, b.lo),
                       prod_hi(a.hi, b.hi)});
  return {l, h};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) return Interval::entire();
  Interval inv{quot_lo(1.0, b.hi), quot_hi(1.0, b.lo)};
  if (b.hi < 0) inv = {quot_lo(-1.0, -b.hi), quot_hi(-1.0, -b.lo)};
  if (a.lo == a.hi && b.lo == b.hi && b.lo > 0) return {quot_lo(a.lo, b.lo), quot_hi(a.hi, b.hi)};
  return a * inv;
}

Interval sqr(const Interval& a) {
  double l = std::min(std::abs(a.lo), std::abs(a.hi));
  double h = std::max(std::abs(a.lo), std::abs(a.hi));
  if (a.contains_zero()) l = 0.0;
  return {l == 0.0 ? 0.0 : round_down(l * l), round_up(h * h)};
}

Interval sqrt(const Interval& a) {
  double l = a.lo <= 0.0 ? 0.0 : std::max(0.0, round_down(std::sqrt(a.lo)));
  double h = a.hi <= 0.0 ? 0.0 : round_up(std::sqrt(a.hi));
  return {l, h};
}

Interval log(const Interval& a) {
  auto lo_of = [](double v) {
    if (v <= 0.0) return -kInf;
    if (v == 1.0) return 0.0;
    return down_n(std::log(v), 2);
  };
  auto hi_of = [](double v) {
    if (v <= 0.0) return -kInf;
    if (v == 1.0) return 0.0;
    return up_n(std::log(v), 2);
  };
  return {lo_of(a.lo), hi_of(a.hi)};
}

Interval max(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval min(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

double Box::radius() const {
  auto c = center();
  double dx = std::max(round_up(c.real() - re.lo), round_up(re.hi - c.real()));
  double dy = std::max(round_up(c.imag() - im.lo), round_up(im.hi - c.imag()));
  return up_n(std::hypot(dx, dy), 2);
}

Box operator+(const Box& a, const Box& b) { return {a.re + b.re, a.im + b.im}; }

Box operator-(const Box& a, const Box& b) { return {a.re - b.re, a.im - b.im}; }

Box operator*(const Box& a, const Box& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Box operator*(const Interval& a, const Box& b) { return {a * b.re, a * b.im}; }

Interval abs(const Box& b) {
  auto nearest = [](const Interval& x) {
    if (x.contains_zero()) return 0.0;
    return std::min(std::abs(x.lo), std::abs(x.hi));
  };
  auto farthest = [](const Interval& x) { return std::max(std::abs(x.lo), std::abs(x.hi)); };
  // hypot is exact when one argument vanishes
  auto lower = [](double x, double y) {
    if (x == 0.0 || y == 0.0) return x + y;
    return std::max(0.0, down_n(std::hypot(x, y), 2));
  };
  auto upper = [](double x, double y) {
    if (x == 0.0 || y == 0.0) return x + y;
    return up_n(std::hypot(x, y), 2);
  };
  return {lower(nearest(b.re), nearest(b.im)), upper(farthest(b.re), farthest(b.im))};
}

namespace {

Interval taylor_form(std::vector<Box> c, const Box& box) {
  const std::size_t n = c.size();
  if (n == 0) return {0.0, 0.0};
  auto z0 = box.center();
  Box z{Interval(z0.real()), Interval(z0.imag())};
  // Repeated synthetic division gives the Taylor coefficients at z0.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t i = n - 1; i-- > k;) c[i] = c[i] + z * c[i + 1];
  }
  double r = box.radius();
  Interval rk(1.0);
  Interval rest(0.0);
  for (std::size_t k = 1; k < n; ++k) {
    rk = rk * Interval(r);
    rest = rest + Interval(0.0, abs(c[k]).hi) * rk;
  }
  Interval b0 = abs(c[0]);
  double lo = b0.lo - rest.hi;
  lo = lo <= 0.0 ? 0.0 : round_down(lo);
  return {lo, round_up(b0.hi + rest.hi)};
}

Interval horner(std::span<const Box> c, const Box& box) {
  Box acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * box + c[i];
  return abs(acc);
}

}  // namespace

Interval poly_abs_range(std::span<const Box> coeffs, const Box& box) {
  if (coeffs.empty()) return {0.0, 0.0};
  Interval t = taylor_form(std::vector<Box>(coeffs.begin(), coeffs.end()), box);
  Interval h = horner(coeffs, box);
  Interval r = intersect(t, h);
  if (r.lo > r.hi) return hull(t, h);  // unreachable with sound inputs
  return r;
}

Interval poly_abs_range(std::span<const Interval> coeffs, const Box& box) {
  std::vector<Box> c;
  c.reserve(coeffs.size());
  for (const auto& v : coeffs) c.push_back({v, Interval(0.0)});
  return poly_abs_range(std::span<const Box>(c), box);
}

}  // namespace essmin
