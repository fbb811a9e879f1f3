#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "essmin/greens.hpp"
#include "essmin/intpoly.hpp"

namespace essmin {

enum class Rigor { heuristic, certified };

std::string to_string(Rigor r);
Rigor rigor_from_string(std::string_view s);

struct CertTerm {
  IntPoly Q;
  mpq_class a;
};

/// phi_a = g - sum a_i log|Q_i| together with a lower bound lambda on its
/// infimum over C. Admissible when sum a_i deg Q_i < 1.
struct DualCertificate {
  std::vector<CertTerm> terms;
  double lambda = -std::numeric_limits<double>::infinity();
  Rigor rigor = Rigor::heuristic;
  double inner_tol = 0.0;

  mpq_class degree_sum() const;
  bool admissible() const;
  std::string to_json() const;
  static DualCertificate from_json(std::string_view text);
};

/// g(z) - sum a_i log|Q_i(z)|; +inf at zeros of Q_i with a_i > 0.
double phi_eval(const GreenFunction& g, const DualCertificate& cert, cplx z);

struct InfOptions {
  std::size_t max_boxes = 400000;
};

struct InfResult {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  cplx argmin{0.0, 0.0};
  /// argmin first, then other well-separated near-minimizers.
  std::vector<cplx> minimizers;
  double radius = 0.0;  // inf is attained in |z| <= radius
  std::size_t boxes = 0;
  bool exhausted = false;
  bool rigorous = false;
};

/// lo <= inf phi <= hi with hi - lo <= tol, by a tail bound and best-first
/// interval branch-and-bound. On budget exhaustion lo stays a valid bound and
/// hi is +inf. rigorous is false when g has no rigorous enclosure.
InfResult certified_inf(const GreenFunction& g, const DualCertificate& cert, double tol, const InfOptions& opts = {});

/// Grid sampling plus local pattern search. lo = hi = best value found.
InfResult heuristic_inf(const GreenFunction& g, const DualCertificate& cert);

/// b_i = floor(a_i kappa 2^32) / 2^32 with kappa = (1 - delta) min(1, 1/S),
/// S = sum a_i deg_i. Guarantees b_i <= a_i and sum b_i deg_i <= 1 - delta.
std::vector<mpq_class> rationalize(const std::vector<double>& weights, const std::vector<int>& degrees,
                                   const mpq_class& delta);

/// Integer polynomials of degree <= max_degree and height <= max_height that
/// nearly vanish at z, best first. Only primitive irreducible ones.
std::vector<IntPoly> recognize_algebraic(cplx z, int max_degree, int max_height);

struct PoolGrowOptions {
  int max_degree = 4;
  int max_height = 12;
  int per_minimizer = 2;
  int enumeration_batch = 4;
  int enumeration_max_degree = 4;
  int enumeration_max_height = 6;
};

/// Proposes new pool polynomials from minimizers and from a persistent
/// enumeration stream.
class PoolGrower {
 public:
  explicit PoolGrower(PoolGrowOptions opts = {});

  std::vector<IntPoly> from_minimizers(const std::vector<cplx>& minimizers, const std::vector<IntPoly>& pool) const;
  std::vector<IntPoly> next_batch(const std::vector<IntPoly>& pool);

  std::uint64_t position() const { return en_.position(); }
  void seek(std::uint64_t n) { en_.seek(n); }

 private:
  PoolGrowOptions opts_;
  PolyEnumerator en_;
};

/// Recognized candidates for the minimizers, or the next enumeration batch
/// when there are none. Never returns pool members.
std::vector<IntPoly> pool_grow(const GreenFunction& g, const DualCertificate& cert,
                               const std::vector<cplx>& minimizers, const std::vector<IntPoly>& pool = {});

struct ExchangeOptions {
  int max_rounds = 20;
  double tol = 1e-3;
  mpq_class delta{1, 1 << 20};
  Rigor rigor = Rigor::certified;
  double inner_tol = 1e-4;
  std::size_t max_boxes = 400000;
  bool grow_pool = true;
  std::size_t max_pool = 64;
  PoolGrowOptions grow;
};

struct ExchangeRound {
  int round = 0;
  double lp_value = 0.0;
  double lambda = 0.0;       // inner lower bound of this round's certificate
  double best_lambda = 0.0;  // best so far, nondecreasing
  std::size_t pool_size = 0;
  std::size_t points = 0;
};

/// The exchange (cutting-plane) loop for the dual LP, one round per step().
/// The zero certificate is always evaluated first, so best() dominates it.
class ExchangeSolver {
 public:
  ExchangeSolver(GreenFunction g, std::vector<IntPoly> pool, std::vector<cplx> seed_grid, ExchangeOptions opts = {});

  ExchangeRound step();
  bool done() const { return done_; }
  int rounds() const { return round_; }
  const DualCertificate& best() const { return best_; }
  const std::vector<IntPoly>& pool() const { return pool_; }
  const std::vector<cplx>& points() const { return points_; }
  const std::vector<cplx>& minimizers() const { return minimizers_; }
  const std::vector<ExchangeRound>& history() const { return history_; }
  const ExchangeOptions& options() const { return opts_; }

  std::string state_json() const;
  void load_state(std::string_view text);

 private:
  InfResult inner(const DualCertificate& c) const;
  void add_point(cplx z);

  GreenFunction g_;
  std::vector<IntPoly> pool_;
  std::vector<cplx> points_;
  ExchangeOptions opts_;
  PoolGrower grower_;
  DualCertificate best_;
  std::vector<cplx> minimizers_;
  std::vector<ExchangeRound> history_;
  int round_ = 0;
  int stale_ = 0;
  bool done_ = false;
};

/// Default seed grid: g's feature points and a coarse grid around them.
std::vector<cplx> default_seed_grid(const GreenFunction& g);

DualCertificate exchange_solve(const GreenFunction& g, const std::vector<IntPoly>& pool,
                               const std::vector<cplx>& seed_grid, int max_rounds, double tol,
                               ExchangeOptions opts = {});

}  // namespace essmin
