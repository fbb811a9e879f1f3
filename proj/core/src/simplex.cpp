#include "essmin/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "essmin/errors.hpp"

namespace essmin {

namespace {

constexpr double kEps = 1e-11;
constexpr int kDegenerateRun = 50;

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), t_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return t_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  double at(int r, int c) const { return t_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  // Row m_ is the objective row holding reduced costs (maximize: enter on > 0).
  double& obj(int c) { return at(m_, c); }

  void pivot(int pr, int pc) {
    double inv = 1.0 / at(pr, pc);
    double* prow = &at(pr, 0);
    for (int c = 0; c <= n_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      double f = at(r, pc);
      if (f == 0.0) continue;
      double* row = &at(r, 0);
      for (int c = 0; c <= n_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
  }

  int rows() const { return m_; }
  int cols() const { return n_; }

 private:
  int m_, n_;
  std::vector<double> t_;
};

// Runs the simplex on the objective row currently in the tableau, over the
// columns with allowed[c] set. Returns optimal, unbounded or iteration_limit.
LPStatus run(Tableau& t, std::vector<int>& basis, const std::vector<char>& allowed, int& iters, int max_iters) {
  int degenerate = 0;
  while (true) {
    if (iters >= max_iters) return LPStatus::iteration_limit;
    bool bland = degenerate >= kDegenerateRun;
    int pc = -1;
    double best = kEps;
    for (int c = 0; c < t.cols(); ++c) {
      if (!allowed[static_cast<std::size_t>(c)]) continue;
      double rc = t.obj(c);
      if (rc > best) {
        pc = c;
        if (bland) break;
        best = rc;
      }
    }
    if (pc < 0) return LPStatus::optimal;
    int pr = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < t.rows(); ++r) {
      double a = t.at(r, pc);
      if (a <= kEps) continue;
      double q = t.rhs(r) / a;
      if (pr < 0 || q < ratio - kEps) {
        ratio = q;
        pr = r;
      } else if (q <= ratio + kEps && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(pr)]) {
        ratio = std::min(ratio, q);
        pr = r;
      }
    }
    if (pr < 0) return LPStatus::unbounded;
    degenerate = ratio <= kEps ? degenerate + 1 : 0;
    t.pivot(pr, pc);
    basis[static_cast<std::size_t>(pr)] = pc;
    ++iters;
  }
}

}  // namespace

LPResult simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                     const std::vector<double>& c, int max_iterations) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  if (static_cast<int>(b.size()) != m) throw InvalidArgument("simplex: row count mismatch");
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != n) throw InvalidArgument("simplex: column count mismatch");

  std::vector<int> neg;
  for (int i = 0; i < m; ++i)
    if (b[static_cast<std::size_t>(i)] < 0) neg.push_back(i);
  const int nart = static_cast<int>(neg.size());
  const int cols = n + m + nart;  // x, slacks, artificials
  Tableau t(m, cols);
  std::vector<int> basis(static_cast<std::size_t>(m));
  int k = 0;
  for (int i = 0; i < m; ++i) {
    double s = b[static_cast<std::size_t>(i)] < 0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.at(i, j) = s * A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    t.at(i, n + i) = s;
    t.rhs(i) = s * b[static_cast<std::size_t>(i)];
    if (s < 0) {
      t.at(i, n + m + k) = 1.0;
      basis[static_cast<std::size_t>(i)] = n + m + k;
      ++k;
    } else {
      basis[static_cast<std::size_t>(i)] = n + i;
    }
  }

  LPResult res;
  std::vector<char> allowed(static_cast<std::size_t>(cols), 1);
  if (nart > 0) {
    // Phase 1: maximize -sum(artificials); reduced costs after pricing out the basis.
    for (int i = 0; i < m; ++i) {
      if (basis[static_cast<std::size_t>(i)] < n + m) continue;
      for (int cc = 0; cc <= cols; ++cc) t.at(m, cc) += t.at(i, cc);
    }
    for (int a = 0; a < nart; ++a) t.obj(n + m + a) = 0.0;
    LPStatus st = run(t, basis, allowed, res.iterations, max_iterations);
    if (st == LPStatus::iteration_limit) {
      res.status = st;
      return res;
    }
    double infeas = t.rhs(m);
    double scale = 1.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    if (infeas > 1e-9 * scale) {
      res.status = LPStatus::infeasible;
      return res;
    }
    // Drive artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (basis[static_cast<std::size_t>(i)] < n + m) continue;
      int pc = -1;
      for (int cc = 0; cc < n + m; ++cc)
        if (std::abs(t.at(i, cc)) > 1e-9) {
          pc = cc;
          break;
        }
      if (pc >= 0) {
        t.pivot(i, pc);
        basis[static_cast<std::size_t>(i)] = pc;
      }
    }
    for (int a = 0; a < nart; ++a) allowed[static_cast<std::size_t>(n + m + a)] = 0;
  }

  // Phase 2 objective row: reduced costs c_j - c_B B^-1 A_j.
  for (int cc = 0; cc <= cols; ++cc) t.at(m, cc) = 0.0;
  for (int j = 0; j < n; ++j) t.obj(j) = c[static_cast<std::size_t>(j)];
  for (int i = 0; i < m; ++i) {
    int bv = basis[static_cast<std::size_t>(i)];
    double cb = bv < n ? c[static_cast<std::size_t>(bv)] : 0.0;
    if (cb == 0.0) continue;
    for (int cc = 0; cc <= cols; ++cc) t.at(m, cc) -= cb * t.at(i, cc);
  }
  LPStatus st = run(t, basis, allowed, res.iterations, max_iterations);
  res.status = st;
  if (st != LPStatus::optimal) return res;
  res.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < m; ++i) {
    int bv = basis[static_cast<std::size_t>(i)];
    if (bv < n) res.x[static_cast<std::size_t>(bv)] = std::max(0.0, t.rhs(i));
  }
  res.value = 0.0;
  for (int j = 0; j < n; ++j) res.value += c[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
  return res;
}

}  // namespace essmin
