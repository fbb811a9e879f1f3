#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "essmin/intpoly.hpp"
#include "essmin/roots.hpp"

namespace essmin {

struct Atom {
  cplx point;
  double weight = 0.0;
};

/// Finite sum of weighted point masses.
struct DiscreteMeasure {
  std::vector<Atom> atoms;

  double mass() const;
  bool is_probability(double tol = 1e-12) const;
  /// -sum w log|z - p|; +inf at atoms.
  double potential(cplx z) const;
};

/// Normalized arc length on the circle |z| = R.
struct CircleMeasure {
  double R = 1.0;
};

/// log max(|z|, R): the log kernel integrated against the circle measure.
double circle_log_kernel(double R, cplx z);

/// Pullback of the unit-circle Haar measure under A/B, normalized by
/// deg = max(deg A, deg B). A and B are kept as powers a^ea, b^eb.
class RationalPullbackMeasure {
 public:
  enum class Kind { pullback, lemniscate, mu_pq };

  static RationalPullbackMeasure pullback(const IntPoly& A, const IntPoly& B);
  /// Equilibrium measure of {|P| <= 1}.
  static RationalPullbackMeasure lemniscate(const IntPoly& P);

  Kind kind() const { return kind_; }
  const FiberFamily& family() const { return *family_; }
  int degree() const { return family_->degree(); }
  /// Closed-form logarithmic potential.
  double potential(cplx z) const;
  /// The polynomials that name the measure: (A, B), (P, 1) or (P, Q).
  const IntPoly& first() const { return first_; }
  const IntPoly& second() const { return second_; }
  std::string describe() const;

 private:
  friend class MuPQ;
  RationalPullbackMeasure(Kind k, IntPoly first, IntPoly second, std::shared_ptr<const FiberFamily> fam);

  Kind kind_;
  IntPoly first_, second_;
  std::shared_ptr<const FiberFamily> family_;
  double log_lead_ = 0.0;  // log max(|a_N|, |b_N|)
};

/// mu_{P,Q} for distinct monic irreducible P, Q: the pullback under
/// P^(e+1) / Q^d with d = deg P, e = deg Q.
class MuPQ {
 public:
  MuPQ(IntPoly P, IntPoly Q);

  const IntPoly& P() const { return P_; }
  const IntPoly& Q() const { return Q_; }
  int d() const { return P_.degree(); }
  int e() const { return Q_.degree(); }
  const RationalPullbackMeasure& measure() const { return measure_; }
  /// min(-log|P|/d, -log|Q|/(e+1)).
  double potential(cplx z) const;

 private:
  IntPoly P_, Q_;
  RationalPullbackMeasure measure_;
};

double potential_mu_pq(const MuPQ& m, cplx z);
double potential_discrete(const DiscreteMeasure& m, cplx z);

struct QuadResult {
  double value = 0.0;
  double error = std::numeric_limits<double>::infinity();
  bool converged = false;
  int nodes = 0;
};

struct QuadratureOptions {
  int min_nodes = 64;
  int max_nodes = 1 << 16;
  int adaptive_levels = 8;
};

/// Periodic trapezoid rule for rho(theta) = (1/deg) sum_{fiber} f(w) with
/// node doubling. Fiber roots are cached per node, so one object can
/// integrate many functions against the same measure.
class PullbackQuadrature {
 public:
  explicit PullbackQuadrature(RationalPullbackMeasure m, QuadratureOptions opts = {});

  /// Doubles from min_nodes until two successive levels differ by < tol.
  /// Throws SingularIntegrand if f is not finite at a fiber point.
  QuadResult integrate(const std::function<double(cplx)>& f, double tol);
  /// Plain trapezoid sum on exactly n nodes (n a power of two).
  double trapezoid(const std::function<double(cplx)>& f, int n);

  const RationalPullbackMeasure& measure() const { return m_; }
  std::size_t cached_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    std::vector<cplx> roots;
    bool flagged = false;
  };
  const Node& node(std::uint32_t key);
  double rho(const Node& n, const std::function<double(cplx)>& f) const;
  double level_sum(const std::function<double(cplx)>& f, int n, double tol);
  double panel(const std::function<double(cplx)>& f, std::uint32_t a, std::uint32_t b, double ra, double rb,
               double tol, int depth);

  RationalPullbackMeasure m_;
  QuadratureOptions opts_;
  std::uint32_t grid_;  // finest key resolution
  std::map<std::uint32_t, Node> nodes_;
};

QuadResult integrate_pullback(const RationalPullbackMeasure& m, const std::function<double(cplx)>& f,
                              double tol);
/// Trapezoid integral over a circle with the same doubling ladder.
QuadResult integrate_circle(const CircleMeasure& c, const std::function<double(cplx)>& f, double tol);

/// Energy I(mu) = integral of the closed-form potential against mu.
QuadResult energy(const RationalPullbackMeasure& m, double tol);

/// log|lc F| - sum over roots of F of U^{mu_{P,Q}}.
double log_integral_exact(const MuPQ& m, const IntPoly& F);

struct SmithResult {
  double margin = 0.0;
  /// max{log|Res(P,F)|/d, log|Res(Q,F)|/(e+1)} over nonzero resultants.
  double floor = -std::numeric_limits<double>::infinity();
};

SmithResult smith_check(const MuPQ& m, const IntPoly& F);

/// eta mu restricted to |z| <= R plus a circle measure on |z| = R.
struct SweetenedMeasure {
  DiscreteMeasure restricted;
  CircleMeasure circle;
  double circle_weight = 0.0;
  double m_R = 0.0, T_R = 0.0, L_R = 0.0, eta = 1.0;

  double mass() const;
  double potential(cplx z) const;
  /// Integral of log^+|z|.
  double log_plus_moment() const;
};

SweetenedMeasure sweeten(const DiscreteMeasure& m, double R);

using Measure = std::variant<DiscreteMeasure, CircleMeasure, RationalPullbackMeasure, MuPQ>;

Measure measure_from_json(const std::string& text);
std::string measure_to_json(const Measure& m);
/// Integral of f against any supported measure.
QuadResult integrate(const Measure& m, const std::function<double(cplx)>& f, double tol);

}  // namespace essmin
