#include "essmin/modular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "essmin/errors.hpp"

namespace essmin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailTol = 1e-16;
const cplx kI(0.0, 1.0);
const cplx kRho(-0.5, std::sqrt(3.0) / 2);

cplx q_of(cplx tau) { return std::exp(2.0 * kPi * kI * tau); }

struct Eisenstein {
  cplx e4, e6, delta;
};

// E4, E6 and Delta; the q-sums stop once |q|^n n^5 is below the tail threshold.
Eisenstein eisenstein(cplx tau) {
  cplx q = q_of(tau);
  double aq = std::abs(q);
  cplx s3 = 0.0, s5 = 0.0, prod = 1.0, qn = q;
  double aqn = aq;
  for (int n = 1; n < 4000; ++n) {
    cplx denom = 1.0 - qn;
    double n3 = static_cast<double>(n) * n * n;
    s3 += n3 * qn / denom;
    s5 += n3 * n * n * qn / denom;
    prod *= denom;
    if (aqn * n3 * n * n < kTailTol) break;
    qn *= q;
    aqn *= aq;
  }
  cplx p2 = prod * prod, p4 = p2 * p2, p8 = p4 * p4, p16 = p8 * p8;
  return {1.0 + 240.0 * s3, 1.0 - 504.0 * s5, q * p16 * p8};
}

cplx j_direct(cplx tau) {
  auto e = eisenstein(tau);
  return e.e4 * e.e4 * e.e4 / e.delta;
}

// Taylor data for local inversion around i and rho.
struct LocalInverse {
  cplx c2_i;    // j(i + h) = 1728 + c2 h^2 + ...
  cplx c3_rho;  // j(rho + h) = c3 h^3 + ...
  std::vector<std::pair<cplx, cplx>> table;  // (tau, j(tau))
};

const LocalInverse& local_inverse() {
  static const LocalInverse data = [] {
    LocalInverse d;
    constexpr int M = 64;
    const double r = 0.05;
    cplx c2 = 0.0, c3 = 0.0;
    for (int m = 0; m < M; ++m) {
      cplx w = std::polar(r, 2 * kPi * m / M);
      c2 += j_direct(kI + w) / (w * w);
      c3 += j_direct(kRho + w) / (w * w * w);
    }
    d.c2_i = c2 / static_cast<double>(M);
    d.c3_rho = c3 / static_cast<double>(M);
    for (int a = 0; a <= 40; ++a) {
      for (int b = 0; b <= 60; ++b) {
        cplx tau(-0.5 + a / 40.0, 0.55 + 1.2 * b / 60.0);
        if (std::abs(tau) < 0.98) continue;
        d.table.emplace_back(tau, j_direct(tau));
      }
    }
    return d;
  }();
  return data;
}

// Damped Newton on j(tau) = z.
bool newton(cplx z, cplx& tau) {
  cplx f = j_of(tau) - z;
  for (int it = 0; it < 100; ++it) {
    if (std::abs(f) <= 1e-13 * (1 + std::abs(z))) return true;
    cplx step = f / j_derivative(tau);
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
    double lam = 1.0;
    bool moved = false;
    for (int k = 0; k < 30; ++k) {
      cplx cand = tau - lam * step;
      if (cand.imag() > 1e-3) {
        cplx fc = j_of(cand) - z;
        if (std::abs(fc) < std::abs(f)) {
          tau = cand;
          f = fc;
          moved = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!moved) return std::abs(f) <= 1e-9 * (1 + std::abs(z));
  }
  return std::abs(f) <= 1e-9 * (1 + std::abs(z));
}

}  // namespace

bool in_fundamental_domain(cplx tau, double slack) {
  return tau.imag() > 0 && std::abs(tau.real()) <= 0.5 + slack && std::abs(tau) >= 1.0 - slack;
}

UpperHalfPoint reduce(cplx tau) {
  if (!(tau.imag() > 0)) throw InvalidArgument("tau must lie in the upper half plane");
  for (int it = 0; it < 10000; ++it) {
    tau -= std::round(tau.real());
    if (std::norm(tau) < 1.0 - 1e-15) {
      tau = -1.0 / tau;
      continue;
    }
    break;
  }
  if (tau.real() > 0.5) tau -= 1.0;
  if (tau.real() < -0.5) tau += 1.0;
  return {tau, true};
}

cplx j_value(const UpperHalfPoint& p) {
  if (!(p.tau.imag() > 0)) throw InvalidArgument("tau must lie in the upper half plane");
  if (!p.reduced && p.tau.imag() < 0.5)
    throw NotReduced("Im tau = " + std::to_string(p.tau.imag()) + " needs reduction");
  return j_direct(p.tau);
}

cplx j_of(cplx tau) {
  if (tau.imag() >= 0.5) return j_direct(tau);
  return j_direct(reduce(tau).tau);
}

cplx j_derivative(cplx tau) {
  auto e = eisenstein(tau);
  return -2.0 * kPi * kI * e.e6 * e.e4 * e.e4 / e.delta;
}

double log_abs_delta(cplx tau) {
  if (tau.imag() < 0.25) tau = reduce(tau).tau;
  cplx q = q_of(tau);
  double s = 0.0, aq = std::abs(q), aqn = aq;
  cplx qn = q;
  for (int n = 1; n < 100000; ++n) {
    s += std::log(std::abs(1.0 - qn));
    if (aqn < kTailTol) break;
    qn *= q;
    aqn *= aq;
  }
  return -2 * kPi * tau.imag() + 24.0 * s;
}

double log_delta_pet(cplx tau) {
  if (tau.imag() < 0.25) tau = reduce(tau).tau;
  return log_abs_delta(tau) + 6.0 * std::log(4 * kPi * tau.imag());
}

double delta_pet(cplx tau) { return std::exp(log_delta_pet(tau)); }

UpperHalfPoint inverse_j(cplx z) {
  if (z == cplx(1728.0)) return {kI, true};
  if (z == cplx(0.0)) return {kRho, true};
  const auto& li = local_inverse();
  std::vector<cplx> starts;
  const double az = std::abs(z);
  if (std::abs(z - 1728.0) < 400.0) starts.push_back(kI + std::sqrt((z - 1728.0) / li.c2_i));
  if (az < 400.0) {
    cplx h = std::pow(z / li.c3_rho, 1.0 / 3.0);
    for (int k = 0; k < 3; ++k) starts.push_back(kRho + h * std::polar(1.0, 2 * kPi * k / 3));
  }
  if (az > 2000.0) {
    cplx q = 1.0 / (z - 744.0);
    starts.push_back(std::log(q) / (2 * kPi * kI));
  }
  {
    std::vector<std::pair<double, cplx>> near;
    for (const auto& [t, j] : li.table) near.emplace_back(std::abs(j - z), t);
    std::partial_sort(near.begin(), near.begin() + 4, near.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
    for (int k = 0; k < 4; ++k) starts.push_back(near[static_cast<std::size_t>(k)].second);
  }
  for (cplx tau : starts) {
    if (!(tau.imag() > 0)) continue;
    if (newton(z, tau)) {
      auto r = reduce(tau);
      if (std::abs(j_direct(r.tau) - z) <= 1e-9 * (1 + az)) return r;
    }
  }
  throw NonConvergence("inverse_j failed at z = (" + std::to_string(z.real()) + ", " +
                       std::to_string(z.imag()) + ")");
}

namespace {

class FaltingsGreen final : public GreenImpl {
 public:
  std::string name() const override { return "faltings"; }

  double eval(cplx z) const override {
    if (z.imag() < 0) z = std::conj(z);
    return -log_delta_pet(inverse_j(z).tau);
  }

  // Sampled range widened by a local Lipschitz estimate; not rigorous.
  Interval enclosure(const Box& box) const override {
    constexpr int K = 5;
    std::array<std::array<double, K>, K> v{};
    double hx = box.re.width() / (K - 1), hy = box.im.width() / (K - 1);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) {
        v[a][b] = eval({box.re.lo + a * hx, box.im.lo + b * hy});
        lo = std::min(lo, v[a][b]);
        hi = std::max(hi, v[a][b]);
      }
    double lip = 0.0;
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) {
        if (a + 1 < K && hx > 0) lip = std::max(lip, std::abs(v[a + 1][b] - v[a][b]) / hx);
        if (b + 1 < K && hy > 0) lip = std::max(lip, std::abs(v[a][b + 1] - v[a][b]) / hy);
      }
    double slack = 2.0 * lip * 0.5 * std::hypot(hx, hy);
    return {lo - slack, hi + slack};
  }

  bool enclosure_rigorous() const override { return false; }

  // g - log|z| ~ -6 log(2 log|z|) is unbounded below.
  std::optional<Interval> tail_offset(double) const override { return std::nullopt; }

  double tail_radius_raw(int n) const override {
    constexpr double c = 0.05;
    for (double L = std::max(6.0 * n, 8.0); L < 700.0; L += 0.25) {
      if (L / n >= 6.0 * std::log(2.0 * L) + c) return std::exp(L);
    }
    return std::numeric_limits<double>::infinity();
  }

  std::vector<cplx> feature_points() const override { return {0.0, 1728.0}; }

  std::string spec_json() const override { return R"({"builtin":"faltings"})"; }
};

}  // namespace

GreenFunction g_hyp() {
  static const auto impl = std::make_shared<FaltingsGreen>();
  return GreenFunction(impl);
}

}  // namespace essmin
