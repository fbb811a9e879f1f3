#include "essmin/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "essmin/errors.hpp"
#include "essmin/modular.hpp"
#include "essmin/roots.hpp"
#include "json_util.hpp"

namespace essmin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval rational_interval(const mpq_class& q) {
  double d = q.get_d();
  if (cmp(q, d) == 0) return Interval(d);
  return {round_down(d), round_up(d)};
}

std::vector<double> to_doubles(const IntPoly& p) {
  std::vector<double> v;
  for (const auto& c : p.coeffs()) v.push_back(c.get_d());
  return v;
}

// w * log max(|A|, |B|) with gcd(A, B) = 1.
struct MaxTerm {
  mpq_class w;
  double wd = 0.0;
  Interval wi;
  IntPoly A, B;
  std::vector<double> a, b;
  std::vector<Interval> ai, bi;
  int N = 0;
};

// Bounds on |p(z)| / |z|^N for |z| >= r, p of degree <= N.
Interval scaled_modulus(const std::vector<Interval>& c, int N, double r) {
  if (c.empty()) return {0.0, 0.0};
  const int d = static_cast<int>(c.size()) - 1;
  Interval inv = Interval(1.0) / Interval(r);
  Interval tail(0.0), pw(1.0);
  for (int k = N - 1; k >= 0; --k) {
    pw = pw * inv;  // r^{k-N}
    if (k <= d) tail = tail + Interval(0.0, std::max(std::abs(c[k].lo), std::abs(c[k].hi))) * pw;
  }
  if (d < N) return {0.0, tail.hi};
  double lead_lo = std::min(std::abs(c[d].lo), std::abs(c[d].hi));
  double lead_hi = std::max(std::abs(c[d].lo), std::abs(c[d].hi));
  Interval lo = Interval(lead_lo) - Interval(tail.hi);
  Interval hi = Interval(lead_hi) + Interval(tail.hi);
  return {std::max(0.0, lo.lo), hi.hi};
}

class CompositeGreen final : public GreenImpl {
 public:
  CompositeGreen(std::string name, CompositeSpec spec, std::vector<MaxTerm> terms, Interval c0)
      : name_(std::move(name)), spec_(std::move(spec)), terms_(std::move(terms)), c0_(c0), c0d_(c0.mid()) {}

  std::string name() const override { return name_; }

  double eval(cplx z) const override {
    double s = c0d_;
    for (const auto& t : terms_) s += t.wd * std::max(log_abs_poly(t.a, z), log_abs_poly(t.b, z));
    return s;
  }

  Interval enclosure(const Box& box) const override {
    Interval s = c0_;
    for (const auto& t : terms_) {
      Interval ma = poly_abs_range(std::span<const Interval>(t.ai), box);
      Interval mb = poly_abs_range(std::span<const Interval>(t.bi), box);
      s = s + t.wi * log(max(ma, mb));
    }
    return s;
  }

  bool enclosure_rigorous() const override { return true; }

  std::optional<Interval> tail_offset(double r) const override {
    if (!(r >= 1.0)) return std::nullopt;
    Interval s = c0_;
    for (const auto& t : terms_) {
      Interval ma = scaled_modulus(t.ai, t.N, r), mb = scaled_modulus(t.bi, t.N, r);
      Interval l = log(max(ma, mb));
      if (!std::isfinite(l.lo)) return std::nullopt;
      s = s + t.wi * l;
    }
    return s;
  }

  std::vector<cplx> feature_points() const override {
    std::vector<cplx> pts;
    for (const auto& t : terms_) {
      for (const IntPoly* p : {&t.A, &t.B}) {
        if (p->degree() < 1) continue;
        for (const auto& r : all_roots(*p).roots) pts.push_back(r.value);
      }
      // where |A| = |B| on the real line between the two zero sets
      IntPoly s = t.A - t.B, d = t.A + t.B;
      for (const IntPoly* p : {&s, &d}) {
        if (p->degree() < 1) continue;
        for (const auto& r : all_roots(*p).roots) pts.push_back(r.value);
      }
    }
    return pts;
  }

  std::string spec_json() const override { return spec_.to_json(); }

 private:
  std::string name_;
  CompositeSpec spec_;
  std::vector<MaxTerm> terms_;
  Interval c0_;
  double c0d_;
};

}  // namespace

double log_abs_poly(const std::vector<double>& c, cplx z) {
  if (c.empty()) return -kInf;
  const int d = static_cast<int>(c.size()) - 1;
  double az = std::abs(z);
  if (az <= 1.0 || d == 0) {
    cplx acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return std::log(std::abs(acc));
  }
  cplx w = 1.0 / z, acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) acc = acc * w + c[i];
  return d * std::log(az) + std::log(std::abs(acc));
}

double GreenImpl::tail_radius_raw(int n) const {
  auto dev = [&](double r) {
    auto t = tail_offset(r);
    if (!t) return kInf;
    return std::max(std::abs(t->lo), std::abs(t->hi));
  };
  if (dev(1.0) <= 0.0) return 1.0;
  for (int k = 1; k <= 8 * 1000; ++k) {
    double R = std::exp2(k / 8.0);
    double lhs = log(Interval(R)).lo / n;
    if (dev(R) <= lhs) return R;
  }
  return kInf;
}

struct GreenFunction::TailCache {
  std::mutex mu;
  std::map<int, double> radius;
};

GreenFunction::GreenFunction(std::shared_ptr<const GreenImpl> impl)
    : impl_(std::move(impl)), cache_(std::make_shared<TailCache>()) {}

double GreenFunction::tail_radius(int n) const {
  if (n < 1) throw InvalidArgument("tail_radius needs n >= 1");
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->radius.find(n);
    if (it != cache_->radius.end()) return it->second;
  }
  double prev = n > 1 ? tail_radius(n - 1) : 1.0;
  double R = std::max(prev, impl_->tail_radius_raw(n));
  constexpr int kSamples = 1 << 12;
  for (int attempt = 0; attempt < 64 && std::isfinite(R); ++attempt) {
    bool ok = true;
    double lr = std::log(R);
    for (int k = 0; k < kSamples && ok; ++k) {
      cplx z = std::polar(R, 2 * std::numbers::pi * (k + 0.5) / kSamples);
      double dev = std::abs(impl_->eval(z) - lr);
      ok = dev <= lr / n + 1e-12;
    }
    if (ok) break;
    R *= 2.0;
  }
  std::lock_guard lock(cache_->mu);
  cache_->radius[n] = R;
  return R;
}

CompositeSpec CompositeSpec::from_json(std::string_view text) {
  auto j = detail::parse_json(text);
  CompositeSpec s;
  if (!j.is_object() || !j.contains("terms")) throw ParseError("composite spec needs \"terms\"");
  try {
    for (const auto& t : j.at("terms")) {
      CompositeTerm term;
      const auto& w = t.at("w");
      term.w = w.is_string() ? detail::parse_rational(w.get<std::string>())
                             : detail::parse_rational(std::to_string(w.get<long long>()));
      std::string kind = t.value("kind", "log_plus");
      if (kind == "log_plus") term.kind = TermKind::log_plus;
      else if (kind == "log_abs") term.kind = TermKind::log_abs;
      else throw ParseError("unknown term kind '" + kind + "'");
      term.num = detail::poly_from_json(t.at("num"));
      term.den = t.contains("den") ? detail::poly_from_json(t.at("den")) : IntPoly::constant(1);
      s.terms.push_back(std::move(term));
    }
    s.offset = j.value("offset", 0.0);
  } catch (const detail::json::exception& e) {
    throw ParseError(e.what());
  }
  return s;
}

std::string CompositeSpec::to_json() const {
  detail::json j;
  j["terms"] = detail::json::array();
  for (const auto& t : terms) {
    detail::json o;
    o["w"] = detail::rational_str(t.w);
    o["kind"] = t.kind == TermKind::log_plus ? "log_plus" : "log_abs";
    o["num"] = t.num.to_strings();
    o["den"] = t.den.to_strings();
    j["terms"].push_back(o);
  }
  j["offset"] = offset;
  return j.dump();
}

mpq_class CompositeSpec::degree_sum() const {
  mpq_class s = 0;
  for (const auto& t : terms) {
    int d = t.num.degree() - t.den.degree();
    if (t.kind == TermKind::log_plus) d = std::max(0, d);
    s += t.w * d;
  }
  return s;
}

CompositeSpec CompositeSpec::concat(const CompositeSpec& other) const {
  CompositeSpec s = *this;
  s.terms.insert(s.terms.end(), other.terms.begin(), other.terms.end());
  s.offset += other.offset;
  return s;
}

GreenFunction make_composite(const CompositeSpec& spec, const CompositeOptions& opts) {
  for (const auto& t : spec.terms)
    if (t.den.is_zero()) throw ZeroDenominator("term with zero denominator");
  if (opts.require_unit_degree && spec.degree_sum() != 1)
    throw DegreeMismatch("weighted degree sum is " + spec.degree_sum().get_str() + ", expected 1");

  std::map<std::string, std::pair<IntPoly, mpq_class>> pure;  // exponent of log|F|
  Interval c0(spec.offset);
  auto add_pure = [&](const IntPoly& f, const mpq_class& w) {
    if (f.is_zero()) throw NotContinuous("log of the zero polynomial");
    auto fac = factor(f);
    c0 = c0 + rational_interval(w) * log(rational_interval(mpq_class(::abs(fac.unit))));
    for (auto& [h, e] : fac.factors) {
      auto& slot = pure[h.str()];
      if (slot.first.is_zero()) slot.first = h;
      slot.second += w * e;
    }
  };
  std::vector<MaxTerm> terms;
  for (const auto& t : spec.terms) {
    if (t.w == 0) continue;
    if (t.kind == TermKind::log_abs) {
      add_pure(t.num, t.w);
      add_pure(t.den, -t.w);
      continue;
    }
    if (t.num.is_zero()) continue;  // log^+ 0 = 0
    IntPoly g = gcd(t.num, t.den);
    IntPoly A = *divide_exact(t.num, g), B = *divide_exact(t.den, g);
    add_pure(g, t.w);
    add_pure(t.den, -t.w);
    if (A.is_constant() && B.is_constant()) {
      double m = std::max(std::abs(A.lc().get_d()), std::abs(B.lc().get_d()));
      c0 = c0 + rational_interval(t.w) * log(Interval(m));
      continue;
    }
    MaxTerm m;
    m.w = t.w;
    m.wd = t.w.get_d();
    m.wi = rational_interval(t.w);
    m.A = A;
    m.B = B;
    m.a = to_doubles(A);
    m.b = to_doubles(B);
    m.ai = A.to_intervals();
    m.bi = B.to_intervals();
    m.N = std::max(A.degree(), B.degree());
    terms.push_back(std::move(m));
  }
  for (auto& [key, v] : pure)
    if (v.second != 0) throw NotContinuous("unbalanced log|" + key + "| term");
  std::string name = opts.name;
  return GreenFunction(std::make_shared<CompositeGreen>(name, spec, std::move(terms), c0));
}

CompositeSpec builtin_spec(std::string_view name) {
  CompositeSpec s;
  auto term = [](mpq_class w, TermKind k, const char* num, const char* den) {
    return CompositeTerm{w, k, IntPoly::parse(num), IntPoly::parse(den)};
  };
  if (name == "weil") {
    s.terms.push_back(term(1, TermKind::log_plus, "x", "1"));
  } else if (name == "zhang_zagier") {
    s.terms.push_back(term(mpq_class(1, 2), TermKind::log_plus, "x", "1"));
    s.terms.push_back(term(mpq_class(1, 2), TermKind::log_plus, "1 - x", "1"));
  } else if (name == "hultberg") {
    s.terms.push_back(term(1, TermKind::log_plus, "2x + 1", "x"));
    s.terms.push_back(term(1, TermKind::log_abs, "x", "1"));
  } else {
    throw UnknownName("no composite builtin named '" + std::string(name) + "'");
  }
  return s;
}

std::vector<std::string> builtin_names() { return {"weil", "zhang_zagier", "hultberg", "faltings"}; }

GreenFunction builtin(std::string_view name) {
  if (name == "faltings") return g_hyp();
  if (name == "weil" || name == "zhang_zagier" || name == "hultberg") {
    CompositeOptions o;
    o.name = std::string(name);
    return make_composite(builtin_spec(name), o);
  }
  throw UnknownName("unknown Green function '" + std::string(name) + "'");
}

}  // namespace essmin
