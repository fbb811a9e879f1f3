#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "essmin/simplex.hpp"

using namespace essmin;

namespace {

// Solves the square system M y = r by Gaussian elimination; false if singular.
bool solve(std::vector<std::vector<double>> M, std::vector<double> r, std::vector<double>& y) {
  int n = static_cast<int>(r.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int i = c + 1; i < n; ++i)
      if (std::abs(M[i][c]) > std::abs(M[p][c])) p = i;
    if (std::abs(M[p][c]) < 1e-12) return false;
    std::swap(M[p], M[c]);
    std::swap(r[p], r[c]);
    for (int i = 0; i < n; ++i) {
      if (i == c) continue;
      double f = M[i][c] / M[c][c];
      for (int k = c; k < n; ++k) M[i][k] -= f * M[c][k];
      r[i] -= f * r[c];
    }
  }
  y.resize(n);
  for (int i = 0; i < n; ++i) y[i] = r[i] / M[i][i];
  return true;
}

// Maximum of c.x over the vertices of {A x <= b, x >= 0}; -inf if empty.
double vertex_oracle(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                     const std::vector<double>& c) {
  int n = static_cast<int>(c.size()), m = static_cast<int>(A.size());
  std::vector<std::vector<double>> rows = A;
  std::vector<double> rhs = b;
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = -1.0;
    rows.push_back(e);
    rhs.push_back(0.0);
  }
  int total = m + n;
  double best = -INFINITY;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      std::vector<std::vector<double>> M;
      std::vector<double> r;
      for (int k : pick) {
        M.push_back(rows[k]);
        r.push_back(rhs[k]);
      }
      std::vector<double> y;
      if (!solve(M, r, y)) return;
      for (int k = 0; k < total; ++k) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += rows[k][j] * y[j];
        if (s > rhs[k] + 1e-9) return;
      }
      double v = 0;
      for (int j = 0; j < n; ++j) v += c[j] * y[j];
      best = std::max(best, v);
      return;
    }
    for (int k = start; k < total; ++k) {
      pick[depth] = k;
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST(Simplex, TextbookExample) {
  // max 3x + 5y; x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
  auto r = simplex_max({{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5});
  ASSERT_EQ(r.status, LPStatus::optimal);
  EXPECT_NEAR(r.value, 36.0, 1e-12);
  EXPECT_NEAR(r.x[0], 2.0, 1e-12);
  EXPECT_NEAR(r.x[1], 6.0, 1e-12);
}

TEST(Simplex, NegativeRightHandSides) {
  // max -x - y; x + y >= 2 (as -x - y <= -2), x <= 5 -> -2.
  auto r = simplex_max({{-1, -1}, {1, 0}}, {-2, 5}, {-1, -1});
  ASSERT_EQ(r.status, LPStatus::optimal);
  EXPECT_NEAR(r.value, -2.0, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  EXPECT_EQ(simplex_max({{1, 0}}, {-1}, {1, 0}).status, LPStatus::infeasible);
  EXPECT_EQ(simplex_max({{1, -1}}, {1}, {0, 1}).status, LPStatus::unbounded);
}

TEST(Simplex, DegenerateCycleExample) {
  // Beale's cycling example under the largest-coefficient rule.
  auto r = simplex_max({{0.25, -60, -0.04, 9}, {0.5, -90, -0.02, 3}, {0, 0, 1, 0}}, {0, 0, 1},
                       {0.75, -150, 0.02, -6});
  ASSERT_EQ(r.status, LPStatus::optimal);
  EXPECT_NEAR(r.value, 0.05, 1e-12);
}

TEST(Simplex, MatchesVertexEnumeration) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> nn(1, 3), mm(1, 6);
  for (int trial = 0; trial < 400; ++trial) {
    int n = nn(rng), m = mm(rng);
    std::vector<std::vector<double>> A(m, std::vector<double>(n));
    std::vector<double> b(m), c(n);
    for (auto& row : A)
      for (auto& v : row) v = std::round(u(rng) * 2) / 2;
    for (auto& v : b) v = std::round(u(rng) * 2) / 2;
    for (auto& v : c) v = u(rng);
    A.push_back(std::vector<double>(n, 1.0));  // keeps the region bounded
    b.push_back(10.0);
    double want = vertex_oracle(A, b, c);
    auto r = simplex_max(A, b, c);
    if (std::isinf(want)) {
      EXPECT_EQ(r.status, LPStatus::infeasible) << trial;
    } else {
      ASSERT_EQ(r.status, LPStatus::optimal) << trial;
      EXPECT_NEAR(r.value, want, 1e-9) << trial;
      for (std::size_t i = 0; i < A.size(); ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += A[i][j] * r.x[j];
        EXPECT_LE(s, b[i] + 1e-9);
      }
    }
  }
}
