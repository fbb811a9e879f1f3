// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed here and are not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "essmin/driver.hpp"
#include "essmin/errors.hpp"
#include "essmin/measures.hpp"
#include "essmin/modular.hpp"
#include "essmin/upperbound.hpp"

using namespace essmin;

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::vector<BoundsLedger> g_ledgers;

BoundsLedger run_recorded(const RunConfig& cfg) {
  auto l = run(cfg);
  g_ledgers.push_back(l);
  return l;
}

RunConfig config(const std::string& green, double eps, int lp, std::size_t witness) {
  RunConfig c;
  c.green = green;
  c.eps = eps;
  c.budget_lp = lp;
  c.budget_witness = witness;
  return c;
}

std::vector<IntPoly> monic_irreducibles(int deg, int height) {
  PolyEnumerator en(deg, height, PolyFilter::monic_irreducible);
  std::vector<IntPoly> out;
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

double pullback_integral(const GreenFunction& g, const RationalPullbackMeasure& m, double tol) {
  return integrate_pullback(m, [&g](cplx z) { return g.eval(z); }, tol).value;
}

// 1. Weil height.
void weil(Outcome& o) {
  Timer t;
  auto l = run_recorded(config("weil", 0.05, 20, 50));
  auto s = search(builtin("weil"), SearchConfig{}, 50);
  double secs = t.seconds();
  o.detail << "lower=" << l.lower() << " upper=" << l.upper() << " search_best=" << s.best.upper()
           << " evals=" << l.rows.back().witnesses << " time=" << secs << "s";
  o.require(l.lower() >= -1e-9, "lower >= -1e-9");
  o.require(std::abs(l.lower()) <= 1e-9, "lower = 0");
  o.require(l.upper() <= 0.02 && s.best.upper() <= 0.02, "upper <= 0.02");
  o.require(l.rows.back().witnesses <= 50 && s.evaluated <= 50, "within 50 witness evaluations");
  o.require(secs <= 60.0, "runtime <= 60 s");
}

// 2. Zhang-Zagier: bracket consistency and desk-scale quality.
void zhang_zagier(Outcome& o) {
  Timer t;
  auto cfg = config("zhang_zagier", 1e-4, 20, 10000);
  cfg.tranche = 500;
  auto l = run_recorded(cfg);
  double secs = t.seconds();
  const auto& last = l.rows.back();
  o.detail << "lower=" << l.lower() << " upper=" << l.upper() << " lp_rounds=" << last.lp_rounds
           << " evals=" << last.witnesses << " time=" << secs << "s";
  o.require(l.lower() <= 0.127228, "(a) lower <= 0.127228");
  o.require(l.upper() >= 0.124110, "(a) upper >= 0.124110");
  o.require(l.lower() >= 0.10 && last.lp_rounds <= 20, "(b) lower >= 0.10 within 20 rounds");
  o.require(l.upper() <= 0.20 && last.witnesses <= 10000, "(b) upper <= 0.20 within 1e4 evaluations");
  o.require(secs <= 1800.0, "runtime <= 30 min");
}

// 3. Hultberg suite.
void hultberg(Outcome& o) {
  auto g = builtin("hultberg");
  double a = pullback_integral(g, RationalPullbackMeasure::pullback(IntPoly::parse("2*x+1"), IntPoly::parse("x")), 1e-10);
  o.detail << "pullback=" << a;
  o.require(std::abs(a + kLog2) <= 1e-6, "(a) pullback integral = -log 2");
  double cap_min = INFINITY;
  for (const char* p : {"x", "x-1", "x+1", "x-2", "x+2", "x^2+1"}) {
    auto w = cap1_bound(g, IntPoly::parse(p), 1e-10);
    cap_min = std::min(cap_min, w.value + w.err);
    o.require(w.value + w.err >= kLog2 - 1e-6, std::string("(b) cap1 ") + p);
  }
  o.detail << " cap1_min=" << cap_min;
  auto w = eval_witness(g, MuPQ(IntPoly::parse("x"), IntPoly::parse("x+1")), 1e-8);
  o.detail << " mu_x_x+1=" << w.upper();
  o.require(w.upper() <= kLog2 - 0.05, "(c) mu_{x,x+1} <= log 2 - 0.05");
  auto l = run_recorded(config("hultberg", 1e-9, 10, 640));
  o.detail << " certified_lower=" << l.lower();
  o.require(l.lower() >= -0.02 && l.lower() <= 1e-6, "(d) lower in [-0.02, 1e-6]");
}

// 4. Quadrature identities.
void quadrature(Outcome& o) {
  Timer t;
  auto j = integrate_circle(CircleMeasure{1.0}, [](cplx z) { return std::log(std::abs(z - 2.0)); }, 1e-13);
  o.detail << "jensen_err=" << std::abs(j.value - kLog2);
  o.require(std::abs(j.value - kLog2) <= 1e-10, "Jensen");

  double kernel_err = 0.0;
  for (double R : {0.5, 1.0, 3.0}) {
    for (cplx z : {cplx(0.1, 0.2), cplx(2.0, -1.0), cplx(-7.0, 0.5), cplx(0.0, 0.0), cplx(0.3, 4.0)}) {
      if (std::abs(std::abs(z) - R) < 0.2 * R) continue;
      auto q = integrate_circle(CircleMeasure{R}, [z](cplx w) { return std::log(std::abs(z - w)); }, 1e-13);
      kernel_err = std::max(kernel_err, std::abs(q.value - circle_log_kernel(R, z)));
    }
  }
  o.detail << " kernel_err=" << kernel_err;
  o.require(kernel_err <= 1e-10, "circle_log_kernel vs quadrature");

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  double pot_err = 0.0;
  int points = 0;
  for (const auto& m : random_mu_pq(20, rng)) {
    PullbackQuadrature q(m.measure());
    int done = 0;
    while (done < 20) {
      cplx z(box(rng), box(rng));
      double up = -std::log(std::abs(m.P().eval(z))) / m.d();
      double uq = -std::log(std::abs(m.Q().eval(z))) / (m.e() + 1);
      if (std::abs(up - uq) < 0.1) continue;  // too close to the support
      auto r = q.integrate([z](cplx w) { return -std::log(std::abs(z - w)); }, 1e-10);
      pot_err = std::max(pot_err, std::abs(r.value - potential_mu_pq(m, z)));
      ++done;
      ++points;
    }
  }
  double secs = t.seconds();
  o.detail << " potential_err=" << pot_err << " points=" << points << " time=" << secs << "s";
  o.require(pot_err <= 1e-7, "potential_mu_pq vs quadrature");
  o.require(secs <= 120.0, "runtime <= 2 min");
}

// 5. Smith-condition property suite.
void smith(Outcome& o) {
  Timer t;
  std::mt19937_64 rng(99);
  auto ms = random_mu_pq(20, rng);
  std::uniform_int_distribution<long> coef(-5, 5);
  std::uniform_int_distribution<int> deg(0, 4);
  double worst_margin = INFINITY, worst_vs_floor = INFINITY;
  int checked = 0;
  while (checked < 200) {
    int d = deg(rng);
    std::vector<mpz_class> c(static_cast<std::size_t>(d) + 1);
    for (auto& v : c) v = coef(rng);
    IntPoly F(c);
    if (F.is_zero() || F.degree() != d) continue;
    F = F.primitive_part();
    for (const auto& m : ms) {
      auto s = smith_check(m, F);
      worst_margin = std::min(worst_margin, s.margin);
      worst_vs_floor = std::min(worst_vs_floor, s.margin - s.floor);
    }
    ++checked;
  }
  double secs = t.seconds();
  o.detail << "pairs=" << checked * 20 << " min_margin=" << worst_margin << " min_margin_minus_floor=" << worst_vs_floor
           << " time=" << secs << "s";
  o.require(worst_margin >= -1e-8, "margin >= -1e-8");
  o.require(worst_vs_floor >= -1e-8, "margin >= floor - 1e-8");
  o.require(secs <= 300.0, "runtime <= 5 min");
}

// 6. Sweetened truncation suite.
void sweetened(Outcome& o) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> natoms(1, 12);
  bool mass = true, support = true, dominated = true, envelope = true, envelope_monotone = true, limit = true;
  int literal_monotone = 0, measures = 0;
  double worst_dom = -INFINITY;
  while (measures < 50) {
    DiscreteMeasure m;
    int n = natoms(rng);
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      double r = std::exp(8.0 * u(rng) - 2.0);
      m.atoms.push_back({std::polar(r, 2 * kPi * u(rng)), u(rng) + 0.01});
      total += m.atoms.back().weight;
    }
    for (auto& a : m.atoms) a.weight /= total;
    if (!m.is_probability()) continue;
    ++measures;
    double target = 0.0, rmax = 0.0;
    for (const auto& a : m.atoms) {
      target += a.weight * std::max(0.0, std::log(std::abs(a.point)));
      rmax = std::max(rmax, std::abs(a.point));
    }
    double prev_gap = INFINITY, prev_l = INFINITY;
    bool mono = true;
    for (double R = 2.0; R <= 1024.0; R *= 2.0) {
      auto s = sweeten(m, R);
      mass = mass && s.mass() == 1.0;
      for (const auto& a : s.restricted.atoms) support = support && std::abs(a.point) <= R;
      for (int k = 0; k < 20; ++k) {
        cplx z = std::polar(std::exp(9.0 * u(rng) - 3.0), 2 * kPi * u(rng));
        double excess = s.potential(z) - s.eta * potential_discrete(m, z);
        worst_dom = std::max(worst_dom, excess);
        dominated = dominated && excess <= 1e-9;
      }
      double gap = std::abs(s.log_plus_moment() - target);
      envelope = envelope && gap <= s.L_R + 1e-12;
      envelope_monotone = envelope_monotone && s.L_R <= prev_l;
      mono = mono && gap <= prev_gap + 1e-12;
      if (R > rmax) limit = limit && gap <= 1e-9;
      prev_gap = gap;
      prev_l = s.L_R;
    }
    literal_monotone += mono;
  }
  o.detail << "measures=" << measures << " max(U_sw - eta U)=" << worst_dom << " gap_monotone_literal=" << literal_monotone
           << "/" << measures;
  o.require(mass, "mass = 1 exactly");
  o.require(support, "support within R");
  o.require(dominated, "U_sw <= eta U + 1e-9");
  o.require(envelope && envelope_monotone, "gap <= L_R with L_R nonincreasing");
  o.require(limit, "gap -> 0 once R exceeds the support");
}

// 7. Capacity one.
void capacity(Outcome& o) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> coef(-3, 3);
  std::uniform_int_distribution<int> deg(1, 4);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    int d = deg(rng);
    std::vector<mpz_class> c(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = coef(rng);
    c[static_cast<std::size_t>(d)] = 1;
    auto e = energy(RationalPullbackMeasure::lemniscate(IntPoly(c)), 1e-11);
    worst = std::max(worst, std::abs(e.value));
  }
  auto two = energy(RationalPullbackMeasure::lemniscate(IntPoly::parse("2*x")), 1e-12);
  o.detail << "max|energy|=" << worst << " energy(2x)-log2=" << two.value - kLog2;
  o.require(worst <= 1e-8, "monic lemniscates have energy 0");
  o.require(std::abs(two.value - kLog2) <= 1e-8, "energy for 2x = log 2");
}

// 8. Faltings.
void faltings(Outcome& o) {
  auto tau = inverse_j(1728.0).tau;
  o.detail << "inverse_j(1728)=" << tau.real() << "+" << tau.imag() << "i";
  o.require(std::abs(tau - cplx(0.0, 1.0)) <= 1e-10, "(a) inverse_j(1728) = i");

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.3, 3.0);
  double inv = 0.0;
  for (int i = 0; i < 200; ++i) {
    cplx t(re(rng), im(rng));
    double a = delta_pet(t);
    inv = std::max(inv, std::abs(a - delta_pet(-1.0 / t)) / a);
    inv = std::max(inv, std::abs(a - delta_pet(t + 1.0)) / a);
  }
  o.detail << " delta_pet_invariance=" << inv;
  o.require(inv <= 1e-10, "(a) delta_pet modular invariance");

  auto g = g_hyp();
  std::uniform_real_distribution<double> lr(4, 100), ang(0, 2 * kPi);
  double band = 0.0;
  for (int i = 0; i < 200; ++i) {
    cplx z = std::polar(std::pow(10.0, lr(rng)), ang(rng));
    double l = std::log(std::abs(z));
    band = std::max(band, std::abs(g(z) - (l - 6 * std::log(l))));
  }
  o.detail << " asymptotic_band=" << band;
  o.require(band <= 10.0, "(a) |g - (log|z| - 6 log log|z|)| <= 10");

  Timer t;
  auto cfg = config("faltings", 1e-9, 4, 256);
  cfg.budget_wall_s = 1800.0;
  auto l = run_recorded(cfg);
  double heur = l.rows.back().heuristic_lower;
  o.detail << " heuristic_lower=" << heur << " certified_lower=" << l.lower() << " upper=" << l.upper()
           << " ess_Ht_F in [" << l.lower() / 12 << ", " << l.upper() / 12 << "] time=" << t.seconds() << "s";
  o.require(heur <= 12 * -0.748622, "(b) heuristic lower <= -8.983464");
  o.require(l.upper() >= 12 * -0.748629, "(b) upper >= -8.983548");
  o.require(l.upper() - heur <= 1.0 && l.upper() - l.lower() <= 1.0, "(b) gap <= 1.0");
}

// 9. Weak duality across every recorded run.
void weak_duality(Outcome& o) {
  std::size_t rows = 0;
  double worst = -INFINITY;
  for (const auto& l : g_ledgers) {
    for (const auto& r : l.rows) {
      ++rows;
      worst = std::max(worst, r.lower - r.upper);
      if (r.lower > r.upper + 1e-7) o.require(false, l.green + " row " + std::to_string(r.iter));
    }
    try {
      l.check_invariants();
    } catch (const WeakDualityViolation& e) {
      o.require(false, e.what());
    }
  }
  o.detail << "runs=" << g_ledgers.size() << " rows=" << rows << " max(lower-upper)=" << worst;
  o.require(!g_ledgers.empty() && rows > 0, "at least one recorded run");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"weil", weil},         {"zhang_zagier", zhang_zagier}, {"hultberg", hultberg},
      {"quadrature", quadrature}, {"smith", smith},           {"sweetened_truncation", sweetened},
      {"capacity", capacity}, {"faltings", faltings},         {"weak_duality", weak_duality},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.str().c_str());
    std::fflush(stdout);
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
