#include "essmin/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "essmin/errors.hpp"

namespace essmin {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 200;
constexpr double kStopRel = 1e-14;

struct HornerResult {
  cplx p;
  cplx dp;
  double mu;  // sum |c_k| |z|^k
};

HornerResult horner(std::span<const cplx> c, std::span<const double> cabs, cplx z) {
  cplx p = 0.0, dp = 0.0;
  double mu = 0.0, az = std::abs(z);
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
    mu = mu * az + cabs[i];
  }
  return {p, dp, mu};
}

cplx ipow(cplx z, int k) {
  cplx r = 1.0;
  while (k) {
    if (k & 1) r *= z;
    k >>= 1;
    if (k) z *= z;
  }
  return r;
}

// Seeds on circles whose radii come from the upper convex hull of
// (k, log|c_k|).
std::vector<cplx> newton_polygon_seeds(std::span<const cplx> c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<int> idx;
  std::vector<double> lg(c.size());
  for (int k = 0; k <= n; ++k) {
    double a = std::abs(c[static_cast<std::size_t>(k)]);
    lg[static_cast<std::size_t>(k)] = a > 0 ? std::log(a) : -std::numeric_limits<double>::infinity();
  }
  for (int k = 0; k <= n; ++k) {
    if (!std::isfinite(lg[static_cast<std::size_t>(k)])) continue;
    while (idx.size() >= 2) {
      int i = idx[idx.size() - 2], j = idx.back();
      double cross = (lg[static_cast<std::size_t>(j)] - lg[static_cast<std::size_t>(i)]) * (k - i) -
                     (lg[static_cast<std::size_t>(k)] - lg[static_cast<std::size_t>(i)]) * (j - i);
      if (cross <= 0) idx.pop_back();
      else break;
    }
    idx.push_back(k);
  }
  std::vector<cplx> z;
  z.reserve(static_cast<std::size_t>(n));
  // Zero roots for a vanishing tail of coefficients.
  for (int k = 0; k < idx.front(); ++k) z.emplace_back(0.0, 0.0);
  const double offset = 0.7;
  for (std::size_t e = 0; e + 1 < idx.size(); ++e) {
    int i = idx[e], j = idx[e + 1];
    int m = j - i;
    double u = std::exp((lg[static_cast<std::size_t>(i)] - lg[static_cast<std::size_t>(j)]) / m);
    for (int t = 0; t < m; ++t) {
      double ang = 2 * std::numbers::pi * t / m + 2 * std::numbers::pi * i / n + offset;
      z.push_back(std::polar(u, ang));
    }
  }
  return z;
}

template <class EvalFn>
bool aberth_core(std::vector<cplx>& z, EvalFn&& eval) {
  const std::size_t n = z.size();
  std::vector<char> done(n, 0);
  std::size_t remaining = n;
  for (int it = 0; it < kMaxIter && remaining > 0; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      auto e = eval(z[k]);
      if (std::abs(e.s) <= e.err) {
        done[k] = 1;
        --remaining;
        continue;
      }
      cplx ratio = e.s / e.ds;
      cplx sum = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      cplx corr = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) {
        // coincident iterates; nudge apart
        z[k] += std::polar(1e-8 * std::max(1.0, std::abs(z[k])), 0.3 + k);
        continue;
      }
      z[k] -= corr;
      if (std::abs(corr) <= kStopRel * std::max(1.0, std::abs(z[k]))) {
        done[k] = 1;
        --remaining;
      }
    }
  }
  return remaining == 0;
}

template <class EvalFn>
std::vector<double> inclusion_radii(const std::vector<cplx>& z, cplx lc, EvalFn&& eval) {
  const std::size_t n = z.size();
  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto e = eval(z[k]);
    double denom = std::abs(lc);
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) denom *= std::abs(z[k] - z[j]);
    double num = static_cast<double>(n) * (std::abs(e.s) + e.err);
    r[k] = denom > 0 ? num / denom * (1 + 4 * n * kEps) : std::numeric_limits<double>::infinity();
  }
  return r;
}

struct SEval {
  cplx s, ds;
  double err;
};

}  // namespace

std::vector<Root> cluster_roots(std::span<const cplx> values, std::span<const double> radii) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= radii[i] + radii[j]) parent[find(i)] = find(j);
  std::vector<Root> out;
  std::vector<std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (std::find(seen.begin(), seen.end(), r) != seen.end()) continue;
    seen.push_back(r);
    cplx c = 0.0;
    int m = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (find(j) == r) {
        c += values[j];
        ++m;
      }
    c /= static_cast<double>(m);
    double rad = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (find(j) == r) rad = std::max(rad, std::abs(values[j] - c) + radii[j]);
    out.push_back({m == 1 ? values[i] : c, rad, m});
  }
  return out;
}

RootSet all_roots(std::span<const cplx> coeffs) {
  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
  if (c.size() < 2) throw InvalidArgument("all_roots needs degree >= 1");
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<double> cabs(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) cabs[i] = std::abs(c[i]);
  auto eval = [&](cplx z) {
    auto h = horner(c, cabs, z);
    return SEval{h.p, h.dp, 4.0 * (n + 1) * kEps * h.mu};
  };
  std::vector<cplx> z = newton_polygon_seeds(c);
  bool ok = aberth_core(z, eval);
  auto r = inclusion_radii(z, c.back(), eval);
  RootSet rs;
  rs.degree = n;
  rs.converged = ok;
  rs.roots = cluster_roots(z, r);
  return rs;
}

RootSet all_roots(const IntPoly& p) {
  auto c = p.to_complex();
  return all_roots(std::span<const cplx>(c));
}

FiberFamily::FiberFamily(IntPoly a, int ea, IntPoly b, int eb)
    : a_(std::move(a)), b_(std::move(b)), ea_(ea), eb_(eb) {
  if (b_.is_zero()) throw InvalidArgument("fiber family with B = 0 has constant fibers");
  if (a_.is_zero()) throw InvalidArgument("fiber family with A = 0");
  if (ea_ < 1 || eb_ < 1) throw InvalidArgument("fiber exponents must be positive");
  const int da = a_.degree() * ea_, db = b_.degree() * eb_;
  if (da < db) throw InvalidArgument("fiber family needs deg A >= deg B");
  if (da == db) {
    mpz_class la, lb;
    mpz_pow_ui(la.get_mpz_t(), a_.lc().get_mpz_t(), static_cast<unsigned long>(ea_));
    mpz_pow_ui(lb.get_mpz_t(), b_.lc().get_mpz_t(), static_cast<unsigned long>(eb_));
    if (::abs(la) == ::abs(lb)) throw InvalidArgument("equal degrees need |lc A| != |lc B|");
  }
  if (gcd(a_, b_).degree() > 0) throw InvalidArgument("A and B must be coprime");
  degree_ = da;
  ac_ = a_.to_complex();
  bc_ = b_.to_complex();
  for (auto& v : ac_) aabs_.push_back(std::abs(v));
  for (auto& v : bc_) babs_.push_back(std::abs(v));
  A_ = A().to_complex();
  B_ = B().to_complex();
}

double FiberFamily::log_abs_A(cplx w) const { return ea_ * std::log(std::abs(a_.eval(w))); }
double FiberFamily::log_abs_B(cplx w) const { return eb_ * std::log(std::abs(b_.eval(w))); }

FiberFamily::Eval FiberFamily::eval(cplx w, cplx y) const {
  auto ha = horner(ac_, aabs_, w);
  auto hb = horner(bc_, babs_, w);
  const double ga = 4.0 * static_cast<double>(ac_.size()) * kEps * ha.mu;
  const double gb = 4.0 * static_cast<double>(bc_.size()) * kEps * hb.mu;
  cplx pa = ipow(ha.p, ea_ - 1), pb = ipow(hb.p, eb_ - 1);
  cplx A = pa * ha.p, B = pb * hb.p;
  cplx dA = static_cast<double>(ea_) * pa * ha.dp;
  cplx dB = static_cast<double>(eb_) * pb * hb.dp;
  double ma = std::abs(ha.p) + ga, mb = std::abs(hb.p) + gb;
  double errA = ea_ * std::pow(ma, ea_ - 1) * ga + 2.0 * ea_ * kEps * std::abs(A);
  double errB = eb_ * std::pow(mb, eb_ - 1) * gb + 2.0 * eb_ * kEps * std::abs(B);
  cplx s = A - y * B;
  return {s, dA - y * dB, errA + errB + 2 * kEps * (std::abs(A) + std::abs(B))};
}

std::vector<cplx> FiberFamily::seeds(cplx y) const {
  std::vector<cplx> c(static_cast<std::size_t>(degree_) + 1, 0.0);
  for (std::size_t i = 0; i < A_.size(); ++i) c[i] += A_[i];
  for (std::size_t i = 0; i < B_.size(); ++i) c[i] -= y * B_[i];
  return newton_polygon_seeds(c);
}

bool FiberFamily::aberth(cplx y, std::vector<cplx>& z) const {
  return aberth_core(z, [&](cplx w) {
    auto e = eval(w, y);
    return SEval{e.s, e.ds, e.err};
  });
}

FiberFamily::Solution FiberFamily::solve(cplx y, const std::vector<cplx>* warm) const {
  Solution sol;
  bool from_warm = warm && static_cast<int>(warm->size()) == degree_;
  sol.roots = from_warm ? *warm : seeds(y);
  sol.converged = aberth(y, sol.roots);
  if (!sol.converged && from_warm) {
    sol.roots = seeds(y);
    sol.converged = aberth(y, sol.roots);
  }
  cplx lc = 0.0;
  if (static_cast<int>(A_.size()) - 1 == degree_) lc += A_.back();
  if (static_cast<int>(B_.size()) - 1 == degree_) lc -= y * B_.back();
  sol.radii = inclusion_radii(sol.roots, lc, [&](cplx w) {
    auto e = eval(w, y);
    return SEval{e.s, e.ds, e.err};
  });
  return sol;
}

std::vector<std::vector<cplx>> track_family(const IntPoly& A, const IntPoly& B,
                                            std::span<const double> theta_nodes) {
  if (A.degree() <= B.degree()) throw InvalidArgument("track_family needs deg A > deg B");
  FiberFamily fam = FiberFamily::plain(A, B);
  std::vector<std::vector<cplx>> paths;
  paths.reserve(theta_nodes.size());
  auto at = [](double theta) { return std::polar(1.0, 2 * std::numbers::pi * theta); };
  auto fail = [](double theta) {
    throw NonConvergence("fiber did not converge at theta = " + std::to_string(theta));
  };
  for (std::size_t t = 0; t < theta_nodes.size(); ++t) {
    cplx y = at(theta_nodes[t]);
    if (t == 0) {
      auto s = fam.solve(y);
      if (!s.converged) fail(theta_nodes[t]);
      paths.push_back(std::move(s.roots));
      continue;
    }
    const auto& prev = paths.back();
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < prev.size(); ++i)
      for (std::size_t j = i + 1; j < prev.size(); ++j) sep = std::min(sep, std::abs(prev[i] - prev[j]));
    auto match = [&](const std::vector<cplx>& cur, bool& ambiguous) {
      const std::size_t n = prev.size();
      std::vector<std::tuple<double, std::size_t, std::size_t>> d;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d.emplace_back(std::abs(prev[i] - cur[j]), i, j);
      std::sort(d.begin(), d.end());
      std::vector<char> pu(n, 0), cu(n, 0);
      std::vector<cplx> out(n);
      ambiguous = false;
      for (auto& [dist, i, j] : d) {
        if (pu[i] || cu[j]) continue;
        pu[i] = cu[j] = 1;
        out[i] = cur[j];
        if (dist > sep / 2) ambiguous = true;
      }
      return out;
    };
    auto s = fam.solve(y, &prev);
    if (!s.converged) fail(theta_nodes[t]);
    bool ambiguous = false;
    auto col = match(s.roots, ambiguous);
    if (ambiguous) {
      auto fresh = fam.solve(y);
      if (!fresh.converged) fail(theta_nodes[t]);
      col = match(fresh.roots, ambiguous);
    }
    paths.push_back(std::move(col));
  }
  return paths;
}

}  // namespace essmin
