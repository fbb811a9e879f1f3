#include <gtest/gtest.h>

#include <gmpxx.h>

#include <random>

#include "essmin/interval.hpp"

using essmin::Box;
using essmin::Interval;

namespace {

bool contains_exact(const Interval& iv, const mpq_class& v) {
  return mpq_class(iv.lo) <= v && v <= mpq_class(iv.hi);
}

}  // namespace

TEST(Interval, ArithmeticContainsExactResult) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 20000; ++i) {
    double a = u(rng) / 3.0, b = u(rng) / 7.0;
    Interval A(a), B(b);
    mpq_class qa(a), qb(b);
    EXPECT_TRUE(contains_exact(A + B, qa + qb));
    EXPECT_TRUE(contains_exact(A - B, qa - qb));
    EXPECT_TRUE(contains_exact(A * B, qa * qb));
    if (b != 0) EXPECT_TRUE(contains_exact(A / B, qa / qb));
  }
}

TEST(Interval, ExactOperationsStayPoints) {
  Interval one(1.0);
  EXPECT_EQ((one + Interval(0.0)).lo, 1.0);
  EXPECT_EQ((one + Interval(0.0)).hi, 1.0);
  EXPECT_EQ((Interval(3.0) * Interval(0.5)).width(), 0.0);
  EXPECT_EQ((Interval(1.0) / Interval(4.0)).width(), 0.0);
  EXPECT_EQ(essmin::log(one).lo, 0.0);
  EXPECT_EQ(essmin::log(one).hi, 0.0);
}

TEST(Interval, LogAndSqrt) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-6, 1e6);
  for (int i = 0; i < 5000; ++i) {
    double a = u(rng);
    long double l = std::log(static_cast<long double>(a));
    auto L = essmin::log(Interval(a));
    EXPECT_LE(L.lo, l);
    EXPECT_GE(L.hi, l);
    auto S = essmin::sqrt(Interval(a));
    long double s = std::sqrt(static_cast<long double>(a));
    EXPECT_LE(S.lo, s);
    EXPECT_GE(S.hi, s);
  }
  EXPECT_EQ(essmin::log(Interval(0.0, 1.0)).lo, -std::numeric_limits<double>::infinity());
}

TEST(Interval, DivisionByZeroContainingIsEntire) {
  auto r = Interval(1.0) / Interval(-1.0, 1.0);
  EXPECT_TRUE(std::isinf(r.lo) && std::isinf(r.hi));
  auto n = Interval(1.0) / Interval(-4.0, -2.0);
  EXPECT_LE(n.lo, -0.5);
  EXPECT_GE(n.hi, -0.25);
}

TEST(Interval, BoxAbsRange) {
  Box b{{-1.0, 1.0}, {-1.0, 1.0}};
  auto r = essmin::abs(b);
  EXPECT_EQ(r.lo, 0.0);
  EXPECT_GE(r.hi, std::sqrt(2.0));
  Box c{{3.0, 4.0}, {0.0, 0.0}};
  auto rc = essmin::abs(c);
  EXPECT_LE(rc.lo, 3.0);
  EXPECT_GE(rc.hi, 4.0);
  EXPECT_LE(rc.width(), 1.0 + 1e-12);
}

TEST(Interval, PolyAbsRangeEncloses) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2), w(0.001, 0.5);
  std::vector<Interval> p{Interval(-1.0), Interval(-1.0), Interval(1.0)};  // x^2 - x - 1
  for (int i = 0; i < 2000; ++i) {
    double x0 = u(rng), y0 = u(rng), dx = w(rng), dy = w(rng);
    Box b{{x0, x0 + dx}, {y0, y0 + dy}};
    auto r = essmin::poly_abs_range(p, b);
    for (int s = 0; s < 20; ++s) {
      std::complex<double> z(x0 + dx * s / 19.0, y0 + dy * ((s * 7) % 20) / 19.0);
      double v = std::abs(z * z - z - 1.0);
      EXPECT_LE(r.lo, v * (1 + 1e-15));
      EXPECT_GE(r.hi, v * (1 - 1e-15));
    }
  }
}

TEST(Interval, TaylorFormIsTightOnSmallBoxes) {
  std::vector<Interval> p{Interval(-2.0), Interval(0.0), Interval(1.0)};
  Box b{{1.0, 1.0 + 1e-6}, {0.5, 0.5 + 1e-6}};
  auto r = essmin::poly_abs_range(p, b);
  EXPECT_LE(r.width(), 1e-5);
}
