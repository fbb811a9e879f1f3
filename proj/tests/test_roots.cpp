#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "essmin/errors.hpp"
#include "essmin/roots.hpp"

using essmin::cplx;
using essmin::IntPoly;

namespace {

std::vector<cplx> values(const essmin::RootSet& rs) {
  std::vector<cplx> v;
  for (auto& r : rs.roots)
    for (int k = 0; k < r.multiplicity; ++k) v.push_back(r.value);
  return v;
}

double nearest(const std::vector<cplx>& v, cplx z) {
  double d = 1e300;
  for (auto w : v) d = std::min(d, std::abs(w - z));
  return d;
}

}  // namespace

TEST(Roots, QuadraticUnit) {
  auto rs = essmin::all_roots(IntPoly::parse("x^2 + 1"));
  ASSERT_EQ(rs.roots.size(), 2u);
  auto v = values(rs);
  EXPECT_LE(nearest(v, {0, 1}), 1e-14);
  EXPECT_LE(nearest(v, {0, -1}), 1e-14);
  for (auto& r : rs.roots) EXPECT_LE(r.radius, 1e-14);
}

TEST(Roots, TripleRootClusters) {
  auto rs = essmin::all_roots(IntPoly::parse("x^3 - 3x^2 + 3x - 1"));
  EXPECT_EQ(rs.degree, 3);
  int total = 0;
  for (auto& r : rs.roots) {
    total += r.multiplicity;
    EXPECT_LE(std::abs(r.value - 1.0), 1e-5);
  }
  EXPECT_EQ(total, 3);
  EXPECT_EQ(rs.roots.size(), 1u);
  EXPECT_EQ(rs.roots[0].multiplicity, 3);
}

TEST(Roots, CyclotomicThirteen) {
  auto rs = essmin::all_roots(essmin::cyclotomic(13));
  auto v = values(rs);
  ASSERT_EQ(v.size(), 12u);
  for (int k = 1; k < 13; ++k) EXPECT_LE(nearest(v, std::polar(1.0, 2 * std::numbers::pi * k / 13)), 1e-13);
  for (auto w : v) EXPECT_LE(std::abs(std::abs(w) - 1.0), 1e-12);
}

TEST(Roots, ResidualAndVieta) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> c(-9, 9), d(1, 20);
  for (int i = 0; i < 200; ++i) {
    int n = d(rng);
    std::vector<cplx> co;
    for (int k = 0; k < n; ++k) co.emplace_back(c(rng), c(rng));
    co.emplace_back(c(rng) == 0 ? 1 : 3, 1);
    auto rs = essmin::all_roots(co);
    EXPECT_TRUE(rs.converged);
    auto v = values(rs);
    ASSERT_EQ(static_cast<int>(v.size()), n);
    double maxc = 0;
    for (auto x : co) maxc = std::max(maxc, std::abs(x));
    for (auto& r : rs.roots) {
      cplx p = 0;
      for (std::size_t k = co.size(); k-- > 0;) p = p * r.value + co[k];
      double scale = 0;
      for (std::size_t k = 0; k < co.size(); ++k) scale += std::abs(co[k]) * std::pow(std::abs(r.value), k);
      if (r.multiplicity == 1) EXPECT_LE(std::abs(p), 1e-10 * (1 + maxc) * n * std::max(1.0, scale / (1 + maxc)));
      // disks contain true zeros: every radius is finite and small for simple roots
      EXPECT_TRUE(std::isfinite(r.radius));
    }
    cplx sum = 0, prod = 1;
    for (auto x : v) {
      sum += x;
      prod *= x;
    }
    cplx s_expect = -co[n - 1] / co[n];
    cplx p_expect = (n % 2 ? -1.0 : 1.0) * co[0] / co[n];
    EXPECT_LE(std::abs(sum - s_expect), 1e-9 * std::max(1.0, std::abs(s_expect)) * n);
    EXPECT_LE(std::abs(prod - p_expect), 1e-9 * std::max(1.0, std::abs(p_expect)) * n);
  }
}

TEST(Roots, InclusionDisksContainTrueRoots) {
  // products of known linear factors
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 50; ++i) {
    std::vector<cplx> truth;
    for (int k = 0; k < 8; ++k) truth.emplace_back(u(rng), u(rng));
    std::vector<cplx> co{1.0};
    for (auto t : truth) {
      std::vector<cplx> nx(co.size() + 1, 0.0);
      for (std::size_t k = 0; k < co.size(); ++k) {
        nx[k + 1] += co[k];
        nx[k] -= t * co[k];
      }
      co = nx;
    }
    auto rs = essmin::all_roots(co);
    for (auto t : truth) {
      bool inside = false;
      for (auto& r : rs.roots) inside |= std::abs(r.value - t) <= r.radius + 1e-15;
      EXPECT_TRUE(inside);
    }
  }
}

TEST(Fiber, SquareRootPaths) {
  std::vector<double> nodes;
  for (int k = 0; k < 32; ++k) nodes.push_back(k / 32.0);
  auto paths = essmin::track_family(IntPoly::parse("x^2"), IntPoly::parse("1"), nodes);
  ASSERT_EQ(paths.size(), 32u);
  // follow the path starting at +1: it should be e^{pi i theta}
  int k0 = std::abs(paths[0][0] - 1.0) < 1e-12 ? 0 : 1;
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    cplx expect = std::polar(1.0, std::numbers::pi * nodes[t]);
    EXPECT_LE(std::abs(paths[t][k0] - expect), 1e-13);
    EXPECT_LE(std::abs(paths[t][1 - k0] + expect), 1e-13);
  }
}

TEST(Fiber, GoldenRatio) {
  std::vector<double> nodes{0.0};
  auto paths = essmin::track_family(IntPoly::parse("x^2"), IntPoly::parse("x + 1"), nodes);
  const double phi = (1 + std::sqrt(5.0)) / 2;
  std::vector<cplx> v = paths[0];
  EXPECT_LE(nearest(v, phi), 1e-14);
  EXPECT_LE(nearest(v, -1 / phi), 1e-14);
}

TEST(Fiber, DegenerateFamiliesRejected) {
  std::vector<double> nodes{0.0};
  EXPECT_THROW(essmin::track_family(IntPoly::parse("x"), IntPoly(), nodes), essmin::InvalidArgument);
  EXPECT_THROW(essmin::FiberFamily(IntPoly::parse("x+1"), 1, IntPoly::parse("x"), 1), essmin::InvalidArgument);
  EXPECT_THROW(essmin::FiberFamily(IntPoly::parse("x^2-1"), 1, IntPoly::parse("x-1"), 1), essmin::InvalidArgument);
  EXPECT_NO_THROW(essmin::FiberFamily(IntPoly::parse("2x+1"), 1, IntPoly::parse("x"), 1));
}

TEST(Fiber, PathContinuityUnderRefinement) {
  IntPoly P = IntPoly::parse("x^2 - x - 1"), Q = IntPoly::parse("x^3 - x + 1");
  IntPoly A = P.pow(4), B = Q.pow(2);
  std::vector<double> coarse, fine;
  for (int k = 0; k < 64; ++k) coarse.push_back(k / 64.0);
  for (int k = 0; k < 128; ++k) fine.push_back(k / 128.0);
  auto pc = essmin::track_family(A, B, coarse);
  auto pf = essmin::track_family(A, B, fine);
  // same node theta = k/64 appears in both; multisets agree
  for (int k = 0; k < 64; ++k) {
    for (auto w : pc[k]) EXPECT_LE(nearest(pf[2 * k], w), 1e-9);
  }
}

TEST(Fiber, FactoredSolveMatchesExpanded) {
  IntPoly P = IntPoly::parse("x^3 - x^2 + 1"), Q = IntPoly::parse("x^2 + x - 1");
  essmin::FiberFamily fam(P, 3, Q, 3);
  EXPECT_EQ(fam.degree(), 9);
  cplx y = std::polar(1.0, 0.37);
  auto s = fam.solve(y);
  EXPECT_TRUE(s.converged);
  for (auto w : s.roots) {
    cplx val = P.eval(w) * P.eval(w) * P.eval(w) - y * Q.eval(w) * Q.eval(w) * Q.eval(w);
    EXPECT_LE(std::abs(val), 1e-12);
  }
  auto warm = fam.solve(std::polar(1.0, 0.38), &s.roots);
  EXPECT_TRUE(warm.converged);
}
