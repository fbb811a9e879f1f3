#pragma once

#include <complex>
#include <span>
#include <vector>

#include "essmin/intpoly.hpp"

namespace essmin {

using cplx = std::complex<double>;

struct Root {
  cplx value;
  double radius = 0.0;  // disk (value, radius) contains `multiplicity` zeros
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Root> roots;
  int degree = 0;
  bool converged = true;
};

/// Roots of sum coeffs[k] z^k by Aberth-Ehrlich iteration with Newton polygon
/// seeds. Error radii from the inclusion theorem for simultaneous
/// approximations; overlapping disks are merged into clusters.
RootSet all_roots(std::span<const cplx> coeffs);
RootSet all_roots(const IntPoly& p);

/// Groups approximations whose inclusion disks overlap.
std::vector<Root> cluster_roots(std::span<const cplx> values, std::span<const double> radii);

/// The one-parameter family of fibers A(w) - y B(w) with A = a^ea, B = b^eb
/// kept in factored form for accurate evaluation.
class FiberFamily {
 public:
  FiberFamily(IntPoly a, int ea, IntPoly b, int eb);
  static FiberFamily plain(const IntPoly& A, const IntPoly& B) { return {A, 1, B, 1}; }

  int degree() const { return degree_; }
  const IntPoly& a() const { return a_; }
  const IntPoly& b() const { return b_; }
  int ea() const { return ea_; }
  int eb() const { return eb_; }
  IntPoly A() const { return a_.pow(static_cast<unsigned>(ea_)); }
  IntPoly B() const { return b_.pow(static_cast<unsigned>(eb_)); }

  /// log|A(w)| and log|B(w)|, computed from the factors.
  double log_abs_A(cplx w) const;
  double log_abs_B(cplx w) const;

  struct Solution {
    std::vector<cplx> roots;
    std::vector<double> radii;
    bool converged = true;
  };
  /// Roots of A - y B. A warm start, when given, must have degree() entries.
  Solution solve(cplx y, const std::vector<cplx>* warm = nullptr) const;

 private:
  struct Eval {
    cplx s;      // A - yB
    cplx ds;     // derivative
    double err;  // rounding error bound on s
  };
  Eval eval(cplx w, cplx y) const;
  std::vector<cplx> seeds(cplx y) const;
  bool aberth(cplx y, std::vector<cplx>& z) const;

  IntPoly a_, b_;
  int ea_, eb_;
  int degree_ = 0;
  std::vector<cplx> ac_, bc_, da_, db_;  // factor coefficients and derivatives
  std::vector<double> aabs_, babs_;
  std::vector<cplx> A_, B_;              // expanded, for seeding
};

/// Root multisets of A - e^{2 pi i theta} B at each node, with consecutive
/// columns matched into continuous paths. paths[node][k].
std::vector<std::vector<cplx>> track_family(const IntPoly& A, const IntPoly& B,
                                            std::span<const double> theta_nodes);

}  // namespace essmin
