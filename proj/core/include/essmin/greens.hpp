#pragma once

#include <gmpxx.h>

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "essmin/interval.hpp"
#include "essmin/intpoly.hpp"

namespace essmin {

using cplx = std::complex<double>;

/// Backend of a Green function. Implementations are immutable.
class GreenImpl {
 public:
  virtual ~GreenImpl() = default;
  virtual std::string name() const = 0;
  virtual double eval(cplx z) const = 0;
  virtual bool conjugation_invariant() const { return true; }

  /// Range of g over a box. Throws EnclosureUnavailable when unsupported.
  virtual Interval enclosure(const Box& box) const = 0;
  virtual bool enclosure_rigorous() const = 0;

  /// Bounds on g(z) - log|z| valid for all |z| >= r, if such bounds are finite.
  virtual std::optional<Interval> tail_offset(double r) const = 0;
  /// Radius beyond which |g(z) - log|z|| <= log|z| / n; before validation.
  virtual double tail_radius_raw(int n) const;

  /// Points worth seeding minimizers and grids with.
  virtual std::vector<cplx> feature_points() const { return {}; }
  /// Canonical JSON text identifying g (used for hashing and reports).
  virtual std::string spec_json() const = 0;
};

/// A Green function g: C -> R, g(z) = log|z| + o(log|z|) at infinity.
/// Cheap to copy; safe to share between threads.
class GreenFunction {
 public:
  explicit GreenFunction(std::shared_ptr<const GreenImpl> impl);

  std::string name() const { return impl_->name(); }
  double eval(cplx z) const { return impl_->eval(z); }
  double operator()(cplx z) const { return impl_->eval(z); }
  bool conjugation_invariant() const { return impl_->conjugation_invariant(); }
  Interval enclosure(const Box& box) const { return impl_->enclosure(box); }
  bool enclosure_rigorous() const { return impl_->enclosure_rigorous(); }
  std::optional<Interval> tail_offset(double r) const { return impl_->tail_offset(r); }
  std::vector<cplx> feature_points() const { return impl_->feature_points(); }
  std::string spec_json() const { return impl_->spec_json(); }

  /// R >= 1 with |g(z) - log|z|| <= log|z| / n for |z| > R; validated on
  /// 2^12 boundary points, cached, nondecreasing in n. +inf if unavailable.
  double tail_radius(int n) const;

  const GreenImpl& impl() const { return *impl_; }

 private:
  struct TailCache;
  std::shared_ptr<const GreenImpl> impl_;
  std::shared_ptr<TailCache> cache_;
};

enum class TermKind { log_plus, log_abs };

struct CompositeTerm {
  mpq_class w;
  TermKind kind = TermKind::log_plus;
  IntPoly num;
  IntPoly den;
};

/// Sum of weighted log^+|A/B| and log|A/B| terms plus a constant.
struct CompositeSpec {
  std::vector<CompositeTerm> terms;
  double offset = 0.0;

  static CompositeSpec from_json(std::string_view text);
  std::string to_json() const;
  /// Sum of w * (effective degree at infinity) over the terms.
  mpq_class degree_sum() const;
  CompositeSpec concat(const CompositeSpec& other) const;
};

struct CompositeOptions {
  bool require_unit_degree = true;
  std::string name = "composite";
};

/// Builds g from a spec, rewriting it as c + sum w_i log max(|A_i|, |B_i|)
/// with coprime A_i, B_i. Throws DegreeMismatch, ZeroDenominator, or
/// NotContinuous when the expression has a logarithmic singularity.
GreenFunction make_composite(const CompositeSpec& spec, const CompositeOptions& opts = {});

/// weil, zhang_zagier, hultberg, faltings.
GreenFunction builtin(std::string_view name);
CompositeSpec builtin_spec(std::string_view name);
std::vector<std::string> builtin_names();

/// log|p(z)| evaluated without overflow for large |z|.
double log_abs_poly(const std::vector<double>& coeffs, cplx z);

}  // namespace essmin
