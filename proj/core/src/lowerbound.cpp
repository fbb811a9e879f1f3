#include "essmin/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>

#include "essmin/errors.hpp"
#include "essmin/roots.hpp"
#include "essmin/simplex.hpp"
#include "json_util.hpp"

namespace essmin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval enclose(const mpq_class& q) {
  double d = q.get_d();
  if (mpq_class(d) == q) return Interval(d);
  return {std::nextafter(d, -kInf), std::nextafter(d, kInf)};
}

// phi_a with coefficients prepared for repeated point and box evaluation.
class Phi {
 public:
  Phi(const GreenFunction& g, const DualCertificate& c) : g_(g) {
    for (const auto& t : c.terms) {
      if (t.a < 0) throw InvalidArgument("certificate weights must be nonnegative");
      if (t.a == 0) continue;
      if (t.Q.degree() < 1) throw InvalidArgument("certificate polynomials must be nonconstant");
      std::vector<double> qc;
      for (const auto& v : t.Q.coeffs()) qc.push_back(v.get_d());
      qc_.push_back(std::move(qc));
      qi_.push_back(t.Q.to_intervals());
      a_.push_back(t.a.get_d());
      ai_.push_back(enclose(t.a));
      deg_.push_back(t.Q.degree());
    }
  }

  double eval(cplx z) const {
    double v = g_(z);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      double l = log_abs_poly(qc_[i], z);
      if (l == -kInf) return kInf;
      v -= a_[i] * l;
    }
    return v;
  }

  // Rigorous when g's enclosure is.
  double lower(const Box& b) const {
    Interval v(g_.enclosure(b).lo);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      double hi = poly_abs_range(qi_[i], b).hi;
      if (hi == 0.0) return kInf;
      v = v - ai_[i] * Interval(log(Interval(hi)).hi);
    }
    return v.lo;
  }

  // Upper bound on log|Q_i(z)| - deg_i log|z| over |z| >= r.
  double beta(std::size_t i, double r) const {
    Interval rinv = Interval(1.0) / Interval(r);
    Interval p(1.0), sum(0.0);
    for (int k = deg_[i]; k >= 0; --k) {
      const Interval& c = qi_[i][static_cast<std::size_t>(k)];
      sum = sum + Interval(std::max(std::abs(c.lo), std::abs(c.hi))) * p;
      p = p * rinv;
    }
    return log(sum).hi;
  }

  double sum_a_beta_hi(double r) const {
    Interval s(0.0);
    for (std::size_t i = 0; i < a_.size(); ++i) s = s + ai_[i] * Interval(beta(i, r));
    return s.hi;
  }

  std::size_t size() const { return a_.size(); }
  const std::vector<std::vector<double>>& coeffs() const { return qc_; }

 private:
  const GreenFunction& g_;
  std::vector<std::vector<double>> qc_;
  std::vector<std::vector<Interval>> qi_;
  std::vector<double> a_;
  std::vector<Interval> ai_;
  std::vector<int> deg_;
};

std::vector<cplx> sample_points(const GreenFunction& g, bool upper_only) {
  std::vector<cplx> pts = g.feature_points();
  double ylo = upper_only ? 0.0 : -4.0;
  for (int i = 0; i <= 32; ++i)
    for (int j = 0; j <= 16; ++j) pts.emplace_back(-4.0 + 0.25 * i, ylo + (4.0 - ylo) * j / 16.0);
  for (int k = 0; k < 64; ++k) {
    double t = (upper_only ? std::numbers::pi : 2 * std::numbers::pi) * (k + 0.5) / 64;
    pts.push_back(std::polar(1.0, t));
  }
  return pts;
}

struct Node {
  Box box;
  double lb;
  bool operator>(const Node& o) const { return lb > o.lb; }
};

double min_abs(const Box& b) {
  double x = b.re.contains_zero() ? 0.0 : std::min(std::abs(b.re.lo), std::abs(b.re.hi));
  double y = b.im.contains_zero() ? 0.0 : std::min(std::abs(b.im.lo), std::abs(b.im.hi));
  return round_down(std::hypot(x, y) * (1.0 - 1e-15));
}

}  // namespace

std::string to_string(Rigor r) { return r == Rigor::certified ? "certified" : "heuristic"; }

Rigor rigor_from_string(std::string_view s) {
  if (s == "certified") return Rigor::certified;
  if (s == "heuristic") return Rigor::heuristic;
  throw ParseError("unknown rigor '" + std::string(s) + "'");
}

mpq_class DualCertificate::degree_sum() const {
  mpq_class s = 0;
  for (const auto& t : terms) s += t.a * t.Q.degree();
  return s;
}

bool DualCertificate::admissible() const {
  for (const auto& t : terms)
    if (t.a < 0) return false;
  return degree_sum() < 1;
}

std::string DualCertificate::to_json() const {
  detail::json j;
  j["terms"] = detail::json::array();
  for (const auto& t : terms) j["terms"].push_back({{"Q", t.Q.str(false)}, {"a", t.a.get_str()}});
  if (std::isfinite(lambda)) j["lambda"] = lambda;
  else j["lambda"] = nullptr;
  j["rigor"] = to_string(rigor);
  j["inner_tol"] = inner_tol;
  return j.dump();
}

DualCertificate DualCertificate::from_json(std::string_view text) {
  auto j = detail::parse_json(text);
  DualCertificate c;
  try {
    for (const auto& t : j.at("terms")) {
      mpq_class a = detail::parse_rational(t.at("a").get<std::string>());
      c.terms.push_back({detail::poly_from_json(t.at("Q")), a});
    }
    if (j.contains("lambda") && !j["lambda"].is_null()) c.lambda = j["lambda"].get<double>();
    if (j.contains("rigor")) c.rigor = rigor_from_string(j["rigor"].get<std::string>());
    if (j.contains("inner_tol")) c.inner_tol = j["inner_tol"].get<double>();
  } catch (const detail::json::exception& e) {
    throw ParseError(e.what());
  }
  return c;
}

double phi_eval(const GreenFunction& g, const DualCertificate& cert, cplx z) { return Phi(g, cert).eval(z); }

InfResult certified_inf(const GreenFunction& g, const DualCertificate& cert, double tol, const InfOptions& opts) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  mpq_class S = cert.degree_sum();
  if (S >= 1) throw InvalidArgument("certificate needs sum a deg Q < 1");
  Phi phi(g, cert);
  const bool upper_only = g.conjugation_invariant();

  InfResult res;
  res.rigorous = g.enclosure_rigorous();
  double U = kInf;
  auto consider = [&](cplx z) {
    double v = phi.eval(z);
    if (v < U) {
      U = v;
      res.argmin = z;
    }
  };
  for (cplx z : sample_points(g, upper_only)) consider(z);

  // Exterior bound: phi >= tail(r) on |z| >= r.
  Interval SI = enclose(S);
  Interval one_minus = Interval(1.0) - SI;
  std::function<double(double)> tail;
  double r = 2.0;
  if (g.tail_offset(2.0)) {
    tail = [&](double rr) {
      auto off = g.tail_offset(rr);
      if (!off) return -kInf;
      Interval t = one_minus * log(Interval(rr)) + Interval(off->lo) - Interval(phi.sum_a_beta_hi(rr));
      return t.lo;
    };
  } else {
    int n = static_cast<int>(std::ceil(2.0 / (1.0 - SI.hi)));
    double Rn = g.tail_radius(n);
    if (!std::isfinite(Rn)) throw EnclosureUnavailable("no tail radius for " + g.name());
    Interval coef = Interval(1.0) - Interval(1.0) / Interval(static_cast<double>(n)) - SI;
    r = std::max(2.0, Rn);
    tail = [&phi, coef, Rn](double rr) {
      if (rr < Rn) return -kInf;
      return (coef * log(Interval(rr)) - Interval(phi.sum_a_beta_hi(rr))).lo;
    };
  }
  while (!(tail(r) > U)) {
    r *= 2.0;
    if (r > 1e300) throw EnclosureUnavailable("tail bound never exceeds the incumbent");
  }
  const double exterior = tail(r);
  res.radius = r;

  Box root{{-r, r}, {upper_only ? 0.0 : -r, r}};
  std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
  double floor_lb = kInf;  // boxes too small to split
  auto lower = [&](const Box& b) {
    double lb = phi.lower(b);
    if (min_abs(b) >= r) lb = std::max(lb, exterior);
    return lb;
  };
  pq.push({root, lower(root)});
  consider(root.center());
  res.boxes = 1;
  auto global_lo = [&]() {
    double lo = std::min({U, exterior, floor_lb});
    if (!pq.empty()) lo = std::min(lo, pq.top().lb);
    return lo;
  };
  while (!pq.empty()) {
    if (U - global_lo() <= tol) break;
    if (res.boxes >= opts.max_boxes) {
      res.exhausted = true;
      break;
    }
    Node nd = pq.top();
    pq.pop();
    if (nd.lb >= U) continue;
    const Box& b = nd.box;
    double scale = 1.0 + std::abs(b.center());
    if (std::max(b.re.width(), b.im.width()) < 1e-13 * scale) {
      floor_lb = std::min(floor_lb, nd.lb);
      continue;
    }
    Box c1 = b, c2 = b;
    if (b.re.width() >= b.im.width()) {
      double m = b.re.mid();
      c1.re.hi = m;
      c2.re.lo = m;
    } else {
      double m = b.im.mid();
      c1.im.hi = m;
      c2.im.lo = m;
    }
    for (const Box& c : {c1, c2}) {
      ++res.boxes;
      consider(c.center());
      double lb = lower(c);
      if (lb < U) pq.push({c, lb});
    }
  }
  res.lo = global_lo();
  res.hi = res.exhausted ? kInf : U;

  res.minimizers.push_back(res.argmin);
  while (!pq.empty() && res.minimizers.size() < 5) {
    cplx c = pq.top().box.center();
    pq.pop();
    bool far = true;
    for (cplx m : res.minimizers)
      if (std::abs(c - m) < 1e-3 * (1.0 + std::abs(m))) far = false;
    if (far) res.minimizers.push_back(c);
  }
  return res;
}

InfResult heuristic_inf(const GreenFunction& g, const DualCertificate& cert) {
  Phi phi(g, cert);
  const bool upper_only = g.conjugation_invariant();
  std::vector<cplx> pts = sample_points(g, upper_only);
  for (int k = -16; k <= 120; ++k)
    for (int a = 0; a < 48; ++a) {
      double t = (upper_only ? std::numbers::pi : 2 * std::numbers::pi) * (a + 0.5) / 48;
      pts.push_back(std::polar(std::exp2(0.5 * k), t));
    }
  std::vector<std::pair<double, cplx>> vals;
  for (cplx z : pts) vals.emplace_back(phi.eval(z), z);
  std::sort(vals.begin(), vals.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  std::vector<std::pair<double, cplx>> local;
  for (std::size_t s = 0; s < std::min<std::size_t>(8, vals.size()); ++s) {
    auto [v, z] = vals[s];
    double h = 0.05 * (1.0 + std::abs(z));
    for (int it = 0; it < 4000 && h > 1e-12 * (1.0 + std::abs(z)); ++it) {
      bool moved = false;
      for (int d = 0; d < 8; ++d) {
        cplx w = z + std::polar(h, std::numbers::pi * d / 4);
        if (upper_only && w.imag() < 0) w = std::conj(w);
        double fw = phi.eval(w);
        if (fw < v) {
          v = fw;
          z = w;
          moved = true;
          break;
        }
      }
      if (!moved) h *= 0.5;
    }
    local.emplace_back(v, z);
  }
  std::sort(local.begin(), local.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  InfResult res;
  res.lo = res.hi = local.front().first;
  res.argmin = local.front().second;
  for (const auto& [v, z] : local) {
    bool far = true;
    for (cplx m : res.minimizers)
      if (std::abs(z - m) < 1e-3 * (1.0 + std::abs(m))) far = false;
    if (far) res.minimizers.push_back(z);
  }
  res.rigorous = false;
  return res;
}

std::vector<mpq_class> rationalize(const std::vector<double>& weights, const std::vector<int>& degrees,
                                   const mpq_class& delta) {
  if (weights.size() != degrees.size()) throw InvalidArgument("weights and degrees differ in length");
  if (delta <= 0 || delta >= 1) throw InvalidArgument("delta must lie in (0, 1)");
  std::vector<mpq_class> a;
  mpq_class S = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) throw InvalidArgument("weights must be finite and nonnegative");
    a.emplace_back(weights[i]);
    S += a.back() * degrees[i];
  }
  mpq_class kappa = 1 - delta;
  if (S > 1) kappa /= S;
  mpz_class den = mpz_class(1) << 32;
  std::vector<mpq_class> out;
  for (const auto& ai : a) {
    mpq_class scaled = ai * kappa * den;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    mpq_class b(fl, den);
    b.canonicalize();
    out.push_back(b);
  }
  return out;
}

std::vector<IntPoly> recognize_algebraic(cplx z, int max_degree, int max_height) {
  const bool real = std::abs(z.imag()) <= 1e-12 * (1.0 + std::abs(z));
  const double x = z.real();
  const int H = max_height;
  struct Cand {
    double score;
    std::vector<long> c;  // ascending
  };
  std::vector<Cand> accepted;
  for (int k = 1; k <= max_degree; ++k) {
    if (!real && k < 2) continue;
    std::vector<Cand> top;
    auto offer = [&](const std::vector<long>& c, double resid) {
      double norm = 0.0, p = 1.0;
      for (long v : c) {
        norm += std::abs(static_cast<double>(v)) * p;
        p *= std::abs(z);
      }
      double score = resid / norm;
      if (score > 1e-4) return;
      long cont = 0;
      for (long v : c) cont = std::gcd(cont, v);
      if (cont != 1) return;
      top.push_back({score, c});
      std::sort(top.begin(), top.end(), [](const Cand& a, const Cand& b) { return a.score < b.score; });
      if (top.size() > 8) top.pop_back();
    };
    int free_lo = real ? 1 : 2;  // c_j for j >= free_lo enumerated, rest solved
    std::vector<long> c(static_cast<std::size_t>(k + 1), 0);
    int nfree = k - free_lo;  // coefficients between free_lo and k-1
    long total = 1;
    for (int i = 0; i < nfree; ++i) total *= (2 * H + 1);
    for (long lead = 1; lead <= H; ++lead)
      for (long idx = 0; idx < total; ++idx) {
        c[static_cast<std::size_t>(k)] = lead;
        long t = idx;
        for (int j = free_lo; j < k; ++j) {
          c[static_cast<std::size_t>(j)] = t % (2 * H + 1) - H;
          t /= (2 * H + 1);
        }
        if (real) {
          double w = 0.0;
          for (int j = k; j >= 1; --j) w = (w + static_cast<double>(c[static_cast<std::size_t>(j)])) * x;
          double c0 = std::round(-w);
          if (std::abs(c0) > H) continue;
          c[0] = static_cast<long>(c0);
          offer(c, std::abs(w + c0));
        } else {
          cplx w = 0.0;
          for (int j = k; j >= 2; --j) w = (w + static_cast<double>(c[static_cast<std::size_t>(j)])) * z;
          w *= z;  // sum_{j>=2} c_j z^j
          double c1 = std::round(-w.imag() / z.imag());
          double c0 = std::round(-w.real() - c1 * z.real());
          if (std::abs(c1) > H || std::abs(c0) > H) continue;
          c[1] = static_cast<long>(c1);
          c[0] = static_cast<long>(c0);
          offer(c, std::abs(w + c1 * z + c0));
        }
      }
    for (const auto& cand : top) {
      std::vector<mpz_class> mc(cand.c.begin(), cand.c.end());
      IntPoly p(mc);
      if (p.degree() != k || !p.is_primitive() || !p.is_irreducible()) continue;
      accepted.push_back(cand);
      break;
    }
  }
  std::sort(accepted.begin(), accepted.end(), [](const Cand& a, const Cand& b) {
    double sa = a.score < 1e-9 ? 0.0 : a.score, sb = b.score < 1e-9 ? 0.0 : b.score;
    if (sa != sb) return sa < sb;
    return a.c.size() < b.c.size();
  });
  std::vector<IntPoly> out;
  for (const auto& cand : accepted) {
    std::vector<mpz_class> mc(cand.c.begin(), cand.c.end());
    out.push_back(IntPoly(mc).normalized());
  }
  return out;
}

namespace {
bool contains(const std::vector<IntPoly>& pool, const IntPoly& p) {
  return std::find(pool.begin(), pool.end(), p) != pool.end();
}
}  // namespace

PoolGrower::PoolGrower(PoolGrowOptions opts)
    : opts_(opts), en_(opts.enumeration_max_degree, opts.enumeration_max_height, PolyFilter::primitive_irreducible) {}

std::vector<IntPoly> PoolGrower::from_minimizers(const std::vector<cplx>& minimizers,
                                                 const std::vector<IntPoly>& pool) const {
  std::vector<IntPoly> out;
  for (cplx z : minimizers) {
    int taken = 0;
    for (const auto& p : recognize_algebraic(z, opts_.max_degree, opts_.max_height)) {
      if (taken >= opts_.per_minimizer) break;
      if (contains(pool, p) || contains(out, p)) continue;
      out.push_back(p);
      ++taken;
    }
  }
  return out;
}

std::vector<IntPoly> PoolGrower::next_batch(const std::vector<IntPoly>& pool) {
  std::vector<IntPoly> out;
  while (static_cast<int>(out.size()) < opts_.enumeration_batch) {
    auto p = en_.next();
    if (!p) break;
    IntPoly q = p->normalized();
    if (!contains(pool, q) && !contains(out, q)) out.push_back(q);
  }
  return out;
}

std::vector<IntPoly> pool_grow(const GreenFunction&, const DualCertificate& cert, const std::vector<cplx>& minimizers,
                               const std::vector<IntPoly>& pool) {
  std::vector<IntPoly> known = pool;
  for (const auto& t : cert.terms) known.push_back(t.Q.normalized());
  PoolGrower gr;
  auto out = gr.from_minimizers(minimizers, known);
  if (out.empty()) out = gr.next_batch(known);
  return out;
}

std::vector<cplx> default_seed_grid(const GreenFunction& g) {
  std::vector<cplx> pts = g.feature_points();
  for (int i = -4; i <= 6; ++i)
    for (int j = 0; j <= 3; ++j) pts.emplace_back(0.5 * i, 0.5 * j);
  for (int k = 0; k < 12; ++k) pts.push_back(std::polar(1.0, std::numbers::pi * (k + 0.5) / 12));
  for (double R : {4.0, 16.0, 256.0}) pts.emplace_back(R, 0.0);
  return pts;
}

ExchangeSolver::ExchangeSolver(GreenFunction g, std::vector<IntPoly> pool, std::vector<cplx> seed_grid,
                               ExchangeOptions opts)
    : g_(std::move(g)), opts_(std::move(opts)), grower_(opts_.grow) {
  if (pool.empty()) throw InvalidArgument("exchange pool must be nonempty");
  if (seed_grid.empty()) throw InvalidArgument("seed grid must be nonempty");
  if (opts_.delta <= 0 || opts_.delta >= 1) throw InvalidArgument("delta must lie in (0, 1)");
  for (const auto& p : pool) {
    if (p.degree() < 1) throw InvalidArgument("pool polynomials must be nonconstant");
    IntPoly q = p.normalized();
    if (!contains(pool_, q)) pool_.push_back(q);
  }
  for (cplx z : seed_grid) add_point(z);
  for (cplx z : g_.feature_points()) add_point(z);
  DualCertificate zero;
  auto r = inner(zero);
  zero.lambda = r.lo;
  zero.rigor = opts_.rigor == Rigor::certified && r.rigorous ? Rigor::certified : Rigor::heuristic;
  zero.inner_tol = opts_.inner_tol;
  best_ = zero;
  minimizers_ = r.minimizers;
  for (cplx z : minimizers_) add_point(z);
}

InfResult ExchangeSolver::inner(const DualCertificate& c) const {
  if (opts_.rigor == Rigor::certified) return certified_inf(g_, c, opts_.inner_tol, InfOptions{opts_.max_boxes});
  return heuristic_inf(g_, c);
}

void ExchangeSolver::add_point(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return;
  if (g_.conjugation_invariant() && z.imag() < 0) z = std::conj(z);
  for (cplx w : points_)
    if (std::abs(w - z) <= 1e-12 * (1.0 + std::abs(z))) return;
  points_.push_back(z);
}

ExchangeRound ExchangeSolver::step() {
  if (done_) return history_.empty() ? ExchangeRound{} : history_.back();
  ++round_;
  const std::size_t k = pool_.size();
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<std::vector<double>> qc;
  for (const auto& q : pool_) {
    std::vector<double> c;
    for (const auto& v : q.coeffs()) c.push_back(v.get_d());
    qc.push_back(std::move(c));
  }
  for (cplx z : points_) {
    double gz = g_(z);
    if (!std::isfinite(gz)) continue;
    std::vector<double> row(k + 2);
    row[0] = 1.0;
    row[1] = -1.0;
    for (std::size_t i = 0; i < k; ++i) row[i + 2] = std::max(-700.0, log_abs_poly(qc[i], z));
    A.push_back(std::move(row));
    b.push_back(gz);
  }
  std::vector<double> drow(k + 2, 0.0);
  std::vector<int> degs;
  for (std::size_t i = 0; i < k; ++i) {
    drow[i + 2] = pool_[i].degree();
    degs.push_back(pool_[i].degree());
  }
  A.push_back(drow);
  b.push_back(round_down(mpq_class(1 - opts_.delta).get_d()));
  std::vector<double> c(k + 2, 0.0);
  c[0] = 1.0;
  c[1] = -1.0;
  // Tiny penalty: among (near-)optimal weight vectors prefer small, early ones.
  for (std::size_t i = 0; i < k; ++i) c[i + 2] = -1e-9 * (1.0 + static_cast<double>(i) / static_cast<double>(k));
  LPResult lp = simplex_max(A, b, c);
  if (lp.status == LPStatus::infeasible || lp.status == LPStatus::unbounded)
    throw LPInfeasible("exchange LP is not solvable");
  if (lp.status != LPStatus::optimal) throw NonConvergence("exchange LP hit the iteration limit");
  std::vector<double> w(lp.x.begin() + 2, lp.x.end());
  double t_lp = lp.x[0] - lp.x[1];
  auto q = rationalize(w, degs, opts_.delta);

  DualCertificate cert;
  for (std::size_t i = 0; i < k; ++i)
    if (q[i] > 0) cert.terms.push_back({pool_[i], q[i]});
  auto r = inner(cert);
  cert.lambda = r.lo;
  cert.rigor = opts_.rigor == Rigor::certified && r.rigorous ? Rigor::certified : Rigor::heuristic;
  cert.inner_tol = opts_.inner_tol;
  if (cert.lambda > best_.lambda) {
    best_ = cert;
    stale_ = 0;
  } else {
    ++stale_;
  }
  minimizers_ = r.minimizers;
  for (cplx z : minimizers_) add_point(z);

  if (opts_.grow_pool && pool_.size() < opts_.max_pool) {
    auto fresh = grower_.from_minimizers(minimizers_, pool_);
    if (fresh.empty() || stale_ >= 2) {
      auto more = grower_.next_batch(pool_);
      for (auto& p : more)
        if (!contains(fresh, p)) fresh.push_back(std::move(p));
    }
    for (auto& p : fresh)
      if (pool_.size() < opts_.max_pool) pool_.push_back(std::move(p));
  }

  ExchangeRound row;
  row.round = round_;
  row.lp_value = t_lp;
  row.lambda = cert.lambda;
  row.best_lambda = best_.lambda;
  row.pool_size = pool_.size();
  row.points = points_.size();
  history_.push_back(row);
  if (t_lp - r.lo <= opts_.tol || round_ >= opts_.max_rounds) done_ = true;
  return row;
}

std::string ExchangeSolver::state_json() const {
  detail::json j;
  j["round"] = round_;
  j["stale"] = stale_;
  j["done"] = done_;
  j["pool"] = detail::json::array();
  for (const auto& p : pool_) j["pool"].push_back(p.str(false));
  j["points"] = detail::json::array();
  for (cplx z : points_) j["points"].push_back({z.real(), z.imag()});
  j["minimizers"] = detail::json::array();
  for (cplx z : minimizers_) j["minimizers"].push_back({z.real(), z.imag()});
  j["best"] = detail::json::parse(best_.to_json());
  j["grower_position"] = grower_.position();
  j["history"] = detail::json::array();
  for (const auto& h : history_)
    j["history"].push_back({h.round, h.lp_value, h.lambda, h.best_lambda, h.pool_size, h.points});
  return j.dump();
}

void ExchangeSolver::load_state(std::string_view text) {
  auto j = detail::parse_json(text);
  try {
    round_ = j.at("round").get<int>();
    stale_ = j.at("stale").get<int>();
    done_ = j.at("done").get<bool>();
    pool_.clear();
    for (const auto& p : j.at("pool")) pool_.push_back(IntPoly::parse(p.get<std::string>()));
    points_.clear();
    for (const auto& z : j.at("points")) points_.emplace_back(z[0].get<double>(), z[1].get<double>());
    minimizers_.clear();
    for (const auto& z : j.at("minimizers")) minimizers_.emplace_back(z[0].get<double>(), z[1].get<double>());
    best_ = DualCertificate::from_json(j.at("best").dump());
    grower_.seek(j.at("grower_position").get<std::uint64_t>());
    history_.clear();
    for (const auto& h : j.at("history")) {
      ExchangeRound r;
      r.round = h[0].get<int>();
      r.lp_value = h[1].get<double>();
      r.lambda = h[2].is_null() ? -kInf : h[2].get<double>();
      r.best_lambda = h[3].is_null() ? -kInf : h[3].get<double>();
      r.pool_size = h[4].get<std::size_t>();
      r.points = h[5].get<std::size_t>();
      history_.push_back(r);
    }
  } catch (const detail::json::exception& e) {
    throw CorruptCheckpoint(e.what());
  }
}

DualCertificate exchange_solve(const GreenFunction& g, const std::vector<IntPoly>& pool,
                               const std::vector<cplx>& seed_grid, int max_rounds, double tol, ExchangeOptions opts) {
  opts.max_rounds = max_rounds;
  opts.tol = tol;
  ExchangeSolver s(g, pool, seed_grid, std::move(opts));
  while (!s.done()) s.step();
  return s.best();
}

}  // namespace essmin
