#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "essmin/errors.hpp"
#include "essmin/greens.hpp"
#include "essmin/measures.hpp"

using namespace essmin;

namespace {

const double kLog2 = std::numbers::ln2;

std::vector<IntPoly> monic_irreducibles(int deg, int height) {
  std::vector<IntPoly> out;
  PolyEnumerator en(deg, height, PolyFilter::monic_irreducible);
  while (auto p = en.next()) out.push_back(*p);
  return out;
}

std::vector<MuPQ> random_mu_pq(int count, std::mt19937_64& rng) {
  auto pool = monic_irreducibles(3, 3);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<MuPQ> out;
  while (static_cast<int>(out.size()) < count) {
    auto i = pick(rng), j = pick(rng);
    if (i != j) out.emplace_back(pool[i], pool[j]);
  }
  return out;
}

}  // namespace

TEST(Measures, PotentialExamples) {
  MuPQ m(IntPoly::parse("x"), IntPoly::parse("x+1"));
  EXPECT_NEAR(potential_mu_pq(m, 3.0), -std::log(3.0), 1e-15);
  for (double t : {0.3, 1.1, 2.0, 4.5}) {
    // |z|^2 = |z+1| on the ray z = r e^{it}: solve r^4 = r^2 + 2r cos t + 1.
    double lo = 1.0, hi = 3.0;
    for (int k = 0; k < 200; ++k) {
      double r = 0.5 * (lo + hi);
      (r * r * r * r - r * r - 2 * r * std::cos(t) - 1 > 0 ? hi : lo) = r;
    }
    cplx z = std::polar(lo, t);
    EXPECT_NEAR(-std::log(std::abs(z)), -std::log(std::abs(z + 1.0)) / 2, 1e-12);
    EXPECT_NEAR(potential_mu_pq(m, z), -std::log(std::abs(z)), 1e-12);
  }
  MuPQ m0(IntPoly::parse("x-1"), IntPoly::parse("x^2-x+1"));
  EXPECT_NEAR(potential_mu_pq(m0, 0.5), -std::log(0.75) / 3, 1e-15);
  EXPECT_GT(potential_mu_pq(m0, 0.5), 0.0958);
  EXPECT_NEAR(m0.measure().potential(0.5), -std::log(0.75) / 3, 1e-15);
}

TEST(Measures, MuPQValidation) {
  EXPECT_THROW(MuPQ(IntPoly::parse("x"), IntPoly::parse("x")), InvalidArgument);
  EXPECT_THROW(MuPQ(IntPoly::parse("x^2-1"), IntPoly::parse("x")), InvalidArgument);
  EXPECT_THROW(MuPQ(IntPoly::parse("2*x+1"), IntPoly::parse("x")), InvalidArgument);
  EXPECT_THROW(RationalPullbackMeasure::pullback(IntPoly::parse("x+1"), IntPoly::parse("x")), InvalidArgument);
}

TEST(Measures, DiscreteAndCircle) {
  DiscreteMeasure d0{{{0.0, 1.0}}};
  EXPECT_NEAR(potential_discrete(d0, std::numbers::e), -1.0, 1e-15);
  EXPECT_TRUE(std::isinf(potential_discrete(d0, 0.0)));
  DiscreteMeasure pm{{{1.0, 0.5}, {-1.0, 0.5}}};
  EXPECT_EQ(potential_discrete(pm, 0.0), 0.0);
  DiscreteMeasure roots8;
  for (int k = 0; k < 8; ++k) roots8.atoms.push_back({std::polar(1.0, 2 * std::numbers::pi * k / 8), 0.125});
  EXPECT_NEAR(potential_discrete(roots8, 2.0), -std::log(255.0) / 8, 1e-14);

  EXPECT_NEAR(circle_log_kernel(1, 2.0), kLog2, 1e-15);
  EXPECT_NEAR(circle_log_kernel(3, 1.0), std::log(3.0), 1e-15);
  EXPECT_NEAR(circle_log_kernel(1, std::polar(1.0, 0.7)), 0.0, 1e-15);
  for (double R : {0.5, 1.0, 3.0})
    for (cplx z : {cplx(0.2, 0.1), cplx(5.0, -1.0), cplx(-2.0, 2.5)}) {
      auto q = integrate_circle({R}, [z](cplx w) { return std::log(std::abs(z - w)); }, 1e-12);
      ASSERT_TRUE(q.converged);
      EXPECT_NEAR(q.value, circle_log_kernel(R, z), 1e-10);
    }
}

TEST(Measures, JensenAndMass) {
  auto circle = RationalPullbackMeasure::lemniscate(IntPoly::parse("x"));
  auto q = integrate_pullback(circle, [](cplx z) { return std::log(std::abs(z - 2.0)); }, 1e-12);
  ASSERT_TRUE(q.converged);
  EXPECT_NEAR(q.value, kLog2, 1e-10);

  MuPQ m(IntPoly::parse("x"), IntPoly::parse("x+1"));
  auto one = integrate_pullback(m.measure(), [](cplx) { return 1.0; }, 1e-12);
  EXPECT_NEAR(one.value, 1.0, 1e-14);
}

TEST(Measures, SupportOnLemniscate) {
  MuPQ m(IntPoly::parse("x^2-2"), IntPoly::parse("x^3-x-1"));
  PullbackQuadrature q(m.measure());
  double worst = 0.0;
  q.integrate(
      [&](cplx w) {
        double lp = std::log(std::abs(m.P().eval(w))), lq = std::log(std::abs(m.Q().eval(w)));
        worst = std::max(worst, std::abs((m.e() + 1) * lp - m.d() * lq));
        return 0.0;
      },
      1.0);
  EXPECT_LT(worst, 1e-10);
}

TEST(Measures, HultbergPullback) {
  auto m = RationalPullbackMeasure::pullback(IntPoly::parse("2*x+1"), IntPoly::parse("x"));
  auto g = builtin("hultberg");
  auto q = integrate_pullback(m, [&g](cplx z) { return g(z); }, 1e-10);
  ASSERT_TRUE(q.converged);
  EXPECT_NEAR(q.value, -kLog2, 1e-8);
}

TEST(Measures, QuadratureOrder) {
  PullbackQuadrature q(RationalPullbackMeasure::lemniscate(IntPoly::parse("x")));
  auto f = [](cplx z) { return std::log(std::abs(z - 2.0)); };
  double prev = std::abs(q.trapezoid(f, 2) - kLog2);
  for (int n = 4; n <= 32; n *= 2) {
    double cur = std::abs(q.trapezoid(f, n) - kLog2);
    EXPECT_GE(prev, 4.0 * cur) << n;
    prev = cur;
  }
}

TEST(Measures, PotentialMatchesQuadrature) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  auto ms = random_mu_pq(20, rng);
  for (const auto& m : ms) {
    PullbackQuadrature q(m.measure());
    int done = 0;
    while (done < 20) {
      cplx z(box(rng), box(rng));
      double up = -std::log(std::abs(m.P().eval(z))) / m.d();
      double uq = -std::log(std::abs(m.Q().eval(z))) / (m.e() + 1);
      if (std::abs(up - uq) < 0.1) continue;  // too close to the support
      auto r = q.integrate([z](cplx w) { return -std::log(std::abs(z - w)); }, 1e-10);
      ASSERT_TRUE(r.converged) << m.measure().describe();
      EXPECT_NEAR(r.value, potential_mu_pq(m, z), 1e-7) << m.measure().describe() << " z=" << z;
      ++done;
    }
  }
}

TEST(Measures, LogIntegralExamples) {
  MuPQ m(IntPoly::parse("x"), IntPoly::parse("x+1"));
  EXPECT_NEAR(log_integral_exact(m, IntPoly::parse("x-3")), std::log(3.0), 1e-14);
  EXPECT_EQ(log_integral_exact(m, IntPoly{1}), 0.0);
  MuPQ m0(IntPoly::parse("x-1"), IntPoly::parse("x^2-x+1"));
  double want = kLog2 + std::log(0.75) / 3;
  EXPECT_NEAR(log_integral_exact(m0, IntPoly::parse("2*x-1")), want, 1e-14);
  auto q = integrate_pullback(m0.measure(), [](cplx z) { return std::log(std::abs(2.0 * z - 1.0)); }, 1e-11);
  EXPECT_NEAR(q.value, want, 1e-9);
}

TEST(Measures, SmithExamples) {
  MuPQ m(IntPoly::parse("x"), IntPoly::parse("x+1"));
  auto a = smith_check(m, IntPoly::parse("x-3"));
  EXPECT_NEAR(a.margin, std::log(3.0), 1e-14);
  EXPECT_NEAR(a.floor, std::log(3.0), 1e-14);
  auto b = smith_check(m, IntPoly::parse("x"));
  EXPECT_GE(b.margin, -1e-12);
  EXPECT_EQ(b.floor, 0.0);
  auto c = smith_check(m, IntPoly{1});
  EXPECT_EQ(c.margin, 0.0);
}

TEST(Measures, SmithRepeatedRoots) {
  MuPQ m(IntPoly::parse("x^3-2*x^2-1"), IntPoly::parse("x^3+2*x^2-x+1"));
  for (const char* f : {"-5*x^3-3*x^2", "4*x^3+4*x^2+x", "x^4+2*x^3-3*x^2-4*x+4"}) {
    IntPoly F = IntPoly::parse(f);
    auto s = smith_check(m, F);
    EXPECT_GE(s.margin, s.floor - 1e-10) << f;
  }
  IntPoly F = IntPoly::parse("-5*x^3-3*x^2");
  double direct = log_integral_exact(m, IntPoly::parse("x")) * 2 + log_integral_exact(m, IntPoly::parse("5*x+3"));
  EXPECT_NEAR(log_integral_exact(m, F), direct, 1e-12);
}

TEST(Measures, SmithProperty) {
  std::mt19937_64 rng(77);
  auto ms = random_mu_pq(20, rng);
  std::uniform_int_distribution<long> coef(-5, 5);
  std::uniform_int_distribution<int> deg(0, 4);
  int checked = 0;
  while (checked < 200) {
    int d = deg(rng);
    std::vector<mpz_class> c;
    for (int k = 0; k <= d; ++k) c.emplace_back(coef(rng));
    if (c.back() == 0) continue;
    IntPoly F(c);
    for (const auto& m : ms) {
      auto s = smith_check(m, F);
      ASSERT_GE(s.margin, -1e-8) << F.str() << " " << m.measure().describe();
      ASSERT_GE(s.margin, s.floor - 1e-8) << F.str() << " " << m.measure().describe();
    }
    ++checked;
  }
}

TEST(Measures, SweetenExamples) {
  auto s1 = sweeten(DiscreteMeasure{{{3.0, 1.0}}}, 2.0);
  EXPECT_TRUE(s1.restricted.atoms.empty());
  EXPECT_EQ(s1.circle_weight, 1.0);
  EXPECT_EQ(s1.m_R, 0.0);

  DiscreteMeasure pm{{{1.0, 0.5}, {-1.0, 0.5}}};
  auto s2 = sweeten(pm, 2.0);
  EXPECT_EQ(s2.eta, 1.0);
  EXPECT_EQ(s2.circle_weight, 0.0);
  ASSERT_EQ(s2.restricted.atoms.size(), 2u);
  EXPECT_EQ(s2.restricted.atoms[0].weight, 0.5);

  DiscreteMeasure mixed{{{0.0, 0.5}, {4.0, 0.5}}};
  auto s3 = sweeten(mixed, 2.0);
  EXPECT_EQ(s3.m_R, 0.5);
  EXPECT_NEAR(s3.T_R, 0.5 * std::log(4.0), 1e-15);
  EXPECT_NEAR(s3.L_R, 2 * kLog2, 1e-15);
  EXPECT_NEAR(s3.eta, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(s3.mass(), 1.0);
  EXPECT_NEAR(s3.circle_weight, 1.0 - s3.eta / 2, 1e-15);
  EXPECT_THROW(sweeten(mixed, 1.0), InvalidArgument);
}

TEST(Measures, SweetenProperties) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> natoms(1, 12);
  for (int trial = 0; trial < 50; ++trial) {
    DiscreteMeasure m;
    int n = natoms(rng);
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      double r = std::exp(8.0 * u(rng) - 2.0);
      m.atoms.push_back({std::polar(r, 2 * std::numbers::pi * u(rng)), u(rng) + 0.01});
      total += m.atoms.back().weight;
    }
    for (auto& a : m.atoms) a.weight /= total;
    if (!m.is_probability()) continue;
    for (double R = 2.0; R <= 1024.0; R *= 2.0) {
      auto s = sweeten(m, R);
      ASSERT_EQ(s.mass(), 1.0);
      ASSERT_GE(s.circle_weight, 0.0);
      ASSERT_LE(s.circle_weight, 1.0);
      for (const auto& a : s.restricted.atoms) ASSERT_LE(std::abs(a.point), R);
      for (int k = 0; k < 20; ++k) {
        cplx z = std::polar(std::exp(9.0 * u(rng) - 3.0), 2 * std::numbers::pi * u(rng));
        double lhs = potential_discrete(s.restricted, z) - s.circle_weight * circle_log_kernel(R, z);
        ASSERT_LE(lhs, s.eta * potential_discrete(m, z) + 1e-9) << "R=" << R << " z=" << z;
        ASSERT_NEAR(lhs, s.potential(z), 1e-12);
      }
    }
  }
}

TEST(Measures, SweetenConvergence) {
  // The gap itself need not be monotone (it overshoots while R sits below
  // the atom at 700); it is bounded by L_R, which is nonincreasing.
  DiscreteMeasure m{{{0.5, 0.25}, {3.0, 0.25}, {40.0, 0.25}, {std::polar(700.0, 1.0), 0.25}}};
  double target = 0.0;
  for (const auto& a : m.atoms) target += a.weight * std::max(0.0, std::log(std::abs(a.point)));
  double prev_l = std::numeric_limits<double>::infinity();
  double gap = 0.0;
  for (int k = 1; k <= 10; ++k) {
    double R = std::ldexp(1.0, k);
    auto s = sweeten(m, R);
    gap = std::abs(s.log_plus_moment() - target);
    EXPECT_LE(gap, s.L_R + 1e-12) << R;
    EXPECT_LE(s.L_R, prev_l) << R;
    prev_l = s.L_R;
  }
  EXPECT_LT(gap, 1e-12);
}

TEST(Measures, Energy) {
  EXPECT_NEAR(energy(RationalPullbackMeasure::lemniscate(IntPoly::parse("x")), 1e-12).value, 0.0, 1e-12);
  EXPECT_NEAR(energy(RationalPullbackMeasure::lemniscate(IntPoly::parse("x^2-2")), 1e-12).value, 0.0, 1e-8);
  EXPECT_NEAR(energy(RationalPullbackMeasure::lemniscate(IntPoly::parse("2*x")), 1e-12).value, kLog2, 1e-8);
  MuPQ m(IntPoly::parse("x"), IntPoly::parse("x+1"));
  auto e = energy(m.measure(), 1e-9);
  EXPECT_TRUE(e.converged);
  EXPECT_TRUE(std::isfinite(e.value));
}

TEST(Measures, SingularIntegrandRefused) {
  auto circle = RationalPullbackMeasure::lemniscate(IntPoly::parse("x"));
  PullbackQuadrature q(circle);
  EXPECT_THROW(q.integrate([](cplx) { return std::numeric_limits<double>::infinity(); }, 1e-8), SingularIntegrand);
}

TEST(Measures, JsonRoundTrip) {
  for (std::string s : {R"({"kind":"mu_pq","P":"x","Q":"x+1"})", R"({"kind":"lemniscate","P":"x^2-2"})",
                        R"({"kind":"circle","R":2.5})", R"({"kind":"discrete","atoms":[[1.0,0.0,0.5],[-1.0,0.0,0.5]]})",
                        R"({"A":"2*x+1","B":"x","kind":"pullback"})"}) {
    auto m = measure_from_json(s);
    auto again = measure_from_json(measure_to_json(m));
    EXPECT_EQ(measure_to_json(m), measure_to_json(again));
  }
  EXPECT_THROW(measure_from_json(R"({"kind":"blob"})"), UnknownName);
  EXPECT_THROW(measure_from_json("{"), ParseError);
  auto m = measure_from_json(R"({"kind":"discrete","atoms":[[2.0,0.0,1.0]]})");
  EXPECT_NEAR(integrate(m, [](cplx z) { return std::abs(z); }, 1e-9).value, 2.0, 0.0);
}
