#include "essmin/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "essmin/errors.hpp"
#include "json_util.hpp"

namespace essmin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Node offset so that no node sits on a real fiber value.
constexpr double kShift = 0.000314159;

double log_abs(const mpz_class& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(std::abs(m)) + static_cast<double>(e) * std::numbers::ln2;
}

double log_lead(const IntPoly& A, const IntPoly& B, int n) {
  return std::max(log_abs(A.coeff(n)), log_abs(B.coeff(n)));
}

bool overlaps(const std::vector<cplx>& r, const std::vector<double>& rad) {
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      double dist = std::abs(r[i] - r[j]);
      double ri = i < rad.size() ? rad[i] : 0.0, rj = j < rad.size() ? rad[j] : 0.0;
      if (dist <= ri + rj || dist <= 1e-7 * (1.0 + std::abs(r[i]))) return true;
    }
  return false;
}

QuadResult periodic_doubling(const std::function<double(double)>& rho, double tol, const QuadratureOptions& o) {
  std::vector<double> vals;
  QuadResult res;
  double prev = 0.0, last_diff = std::numeric_limits<double>::infinity();
  bool have_prev = false;
  for (int n = o.min_nodes; n <= o.max_nodes; n *= 2) {
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      if (k % 2 == 0 && have_prev) next[static_cast<std::size_t>(k)] = vals[static_cast<std::size_t>(k / 2)];
      else next[static_cast<std::size_t>(k)] = rho(kShift + static_cast<double>(k) / n);
    }
    vals = std::move(next);
    double sum = 0.0;
    for (double v : vals) sum += v;
    double cur = sum / n;
    res.nodes = n;
    res.value = cur;
    if (have_prev) {
      double diff = std::abs(cur - prev);
      res.error = std::max(diff, last_diff);
      last_diff = diff;
      if (res.error < tol) {
        res.converged = true;
        return res;
      }
    }
    prev = cur;
    have_prev = true;
  }
  return res;
}

void check_finite(double v) {
  if (!std::isfinite(v)) throw SingularIntegrand("integrand is not finite on the support");
}

}  // namespace

double DiscreteMeasure::mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

bool DiscreteMeasure::is_probability(double tol) const { return std::abs(mass() - 1.0) <= tol; }

double DiscreteMeasure::potential(cplx z) const {
  double s = 0.0;
  for (const auto& a : atoms) {
    if (a.weight == 0.0) continue;
    double d = std::abs(z - a.point);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    s -= a.weight * std::log(d);
  }
  return s;
}

double potential_discrete(const DiscreteMeasure& m, cplx z) { return m.potential(z); }

double circle_log_kernel(double R, cplx z) {
  if (!(R > 0.0)) throw InvalidArgument("circle radius must be positive");
  return std::log(std::max(std::abs(z), R));
}

RationalPullbackMeasure::RationalPullbackMeasure(Kind k, IntPoly first, IntPoly second,
                                                 std::shared_ptr<const FiberFamily> fam)
    : kind_(k), first_(std::move(first)), second_(std::move(second)), family_(std::move(fam)) {
  log_lead_ = log_lead(family_->A(), family_->B(), family_->degree());
}

RationalPullbackMeasure RationalPullbackMeasure::pullback(const IntPoly& A, const IntPoly& B) {
  auto fam = std::make_shared<const FiberFamily>(FiberFamily::plain(A, B));
  return RationalPullbackMeasure(Kind::pullback, A, B, std::move(fam));
}

RationalPullbackMeasure RationalPullbackMeasure::lemniscate(const IntPoly& P) {
  if (P.degree() < 1) throw InvalidArgument("lemniscate polynomial must be nonconstant");
  IntPoly one{1};
  auto fam = std::make_shared<const FiberFamily>(FiberFamily::plain(P, one));
  return RationalPullbackMeasure(Kind::lemniscate, P, one, std::move(fam));
}

double RationalPullbackMeasure::potential(cplx z) const {
  double la = family_->log_abs_A(z), lb = family_->log_abs_B(z);
  return -(std::max(la, lb) - log_lead_) / family_->degree();
}

std::string RationalPullbackMeasure::describe() const {
  switch (kind_) {
    case Kind::mu_pq:
      return "mu_pq(" + first_.str() + ", " + second_.str() + ")";
    case Kind::lemniscate:
      return "lemniscate(" + first_.str() + ")";
    default:
      return "pullback(" + first_.str() + ", " + second_.str() + ")";
  }
}

namespace {
const IntPoly& check_mu_pq(const IntPoly& P, const IntPoly& Q) {
  for (const IntPoly* p : {&P, &Q}) {
    if (p->degree() < 1 || !p->is_monic()) throw InvalidArgument("mu_pq needs monic nonconstant polynomials");
    if (!p->is_irreducible(16)) throw InvalidArgument(p->str() + " is not irreducible");
  }
  if (P == Q) throw InvalidArgument("mu_pq needs P != Q");
  return P;
}
}  // namespace

MuPQ::MuPQ(IntPoly P, IntPoly Q)
    : P_(check_mu_pq(P, Q)),
      Q_(std::move(Q)),
      measure_(RationalPullbackMeasure::Kind::mu_pq, P_, Q_,
               std::make_shared<const FiberFamily>(P_, Q_.degree() + 1, Q_, P_.degree())) {}

double MuPQ::potential(cplx z) const {
  const auto& f = measure_.family();
  double up = -f.log_abs_A(z) / (static_cast<double>(d()) * (e() + 1));
  double uq = -f.log_abs_B(z) / (static_cast<double>(d()) * (e() + 1));
  return std::min(up, uq);
}

double potential_mu_pq(const MuPQ& m, cplx z) { return m.potential(z); }

PullbackQuadrature::PullbackQuadrature(RationalPullbackMeasure m, QuadratureOptions opts)
    : m_(std::move(m)), opts_(opts) {
  if (opts_.min_nodes < 2 || opts_.max_nodes < opts_.min_nodes || opts_.adaptive_levels < 0)
    throw InvalidArgument("bad quadrature options");
  long g = static_cast<long>(opts_.max_nodes) << opts_.adaptive_levels;
  if (g > (1L << 30)) throw InvalidArgument("quadrature grid too fine");
  grid_ = static_cast<std::uint32_t>(g);
}

const PullbackQuadrature::Node& PullbackQuadrature::node(std::uint32_t key) {
  key %= grid_;
  auto it = nodes_.find(key);
  if (it != nodes_.end()) return it->second;
  const std::vector<cplx>* warm = nullptr;
  if (!nodes_.empty()) {
    auto hi = nodes_.lower_bound(key);
    auto lo = hi == nodes_.begin() ? std::prev(nodes_.end()) : std::prev(hi);
    if (hi == nodes_.end()) hi = nodes_.begin();
    auto dist = [&](std::uint32_t k) {
      std::uint32_t d = k > key ? k - key : key - k;
      return std::min(d, grid_ - d);
    };
    warm = dist(lo->first) <= dist(hi->first) ? &lo->second.roots : &hi->second.roots;
  }
  double theta = kShift + static_cast<double>(key) / grid_;
  cplx y = std::polar(1.0, kTwoPi * theta);
  auto sol = m_.family().solve(y, warm);
  if (!sol.converged) throw NonConvergence("fiber roots did not converge at theta = " + std::to_string(theta));
  Node n;
  n.flagged = overlaps(sol.roots, sol.radii);
  n.roots = std::move(sol.roots);
  return nodes_.emplace(key, std::move(n)).first->second;
}

double PullbackQuadrature::rho(const Node& n, const std::function<double(cplx)>& f) const {
  double s = 0.0;
  for (cplx w : n.roots) {
    double v = f(w);
    check_finite(v);
    s += v;
  }
  return s / static_cast<double>(n.roots.size());
}

double PullbackQuadrature::panel(const std::function<double(cplx)>& f, std::uint32_t a, std::uint32_t b,
                                 double ra, double rb, double tol, int depth) {
  double h = static_cast<double>(b - a) / grid_;
  double coarse = 0.5 * h * (ra + rb);
  if (b - a < 2) return coarse;
  std::uint32_t mid = a + (b - a) / 2;
  double rm = rho(node(mid), f);
  double fine = 0.25 * h * (ra + 2.0 * rm + rb);
  if (depth >= opts_.adaptive_levels || std::abs(fine - coarse) < tol) return fine;
  return panel(f, a, mid, ra, rm, 0.5 * tol, depth + 1) + panel(f, mid, b, rm, rb, 0.5 * tol, depth + 1);
}

double PullbackQuadrature::level_sum(const std::function<double(cplx)>& f, int n, double tol) {
  std::uint32_t step = grid_ / static_cast<std::uint32_t>(n);
  std::vector<double> r(static_cast<std::size_t>(n));
  std::vector<char> flag(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Node& nd = node(static_cast<std::uint32_t>(k) * step);
    r[static_cast<std::size_t>(k)] = rho(nd, f);
    flag[static_cast<std::size_t>(k)] = nd.flagged;
  }
  double h = 1.0 / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    std::size_t k0 = static_cast<std::size_t>(k), k1 = static_cast<std::size_t>((k + 1) % n);
    if (opts_.adaptive_levels > 0 && (flag[k0] || flag[k1])) {
      std::uint32_t a = static_cast<std::uint32_t>(k) * step;
      sum += panel(f, a, a + step, r[k0], r[k1], tol * h, 0);
    } else {
      sum += 0.5 * h * (r[k0] + r[k1]);
    }
  }
  return sum;
}

QuadResult PullbackQuadrature::integrate(const std::function<double(cplx)>& f, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  QuadResult res;
  double prev = 0.0, last_diff = std::numeric_limits<double>::infinity();
  bool have_prev = false;
  for (int n = opts_.min_nodes; n <= opts_.max_nodes; n *= 2) {
    double cur = level_sum(f, n, tol);
    res.value = cur;
    res.nodes = n;
    if (have_prev) {
      double diff = std::abs(cur - prev);
      res.error = std::max(diff, last_diff);
      last_diff = diff;
      if (res.error < tol) {
        res.converged = true;
        return res;
      }
    }
    prev = cur;
    have_prev = true;
  }
  return res;
}

double PullbackQuadrature::trapezoid(const std::function<double(cplx)>& f, int n) {
  if (n < 1 || grid_ % static_cast<std::uint32_t>(n) != 0) throw InvalidArgument("node count must divide the grid");
  std::uint32_t step = grid_ / static_cast<std::uint32_t>(n);
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += rho(node(static_cast<std::uint32_t>(k) * step), f);
  return s / n;
}

QuadResult integrate_pullback(const RationalPullbackMeasure& m, const std::function<double(cplx)>& f,
                              double tol) {
  PullbackQuadrature q(m);
  return q.integrate(f, tol);
}

QuadResult integrate_circle(const CircleMeasure& c, const std::function<double(cplx)>& f, double tol) {
  if (!(c.R > 0.0)) throw InvalidArgument("circle radius must be positive");
  auto rho = [&](double theta) {
    double v = f(std::polar(c.R, kTwoPi * theta));
    check_finite(v);
    return v;
  };
  return periodic_doubling(rho, tol, QuadratureOptions{});
}

QuadResult energy(const RationalPullbackMeasure& m, double tol) {
  return integrate_pullback(m, [&m](cplx z) { return m.potential(z); }, tol);
}

double log_integral_exact(const MuPQ& m, const IntPoly& F) {
  if (F.is_zero()) throw InvalidArgument("F must be nonzero");
  if (F.degree() < 1) return log_abs(F.lc());
  auto simple = [&m](const IntPoly& f) {
    double s = log_abs(f.lc());
    RootSet rs = all_roots(f);
    if (!rs.converged) throw NonConvergence("roots of " + f.str());
    for (const auto& r : rs.roots) s -= r.multiplicity * m.potential(r.value);
    return s;
  };
  if (F.degree() > 16) return simple(F);
  Factorization fz = factor(F);
  double s = log_abs(fz.unit);
  for (const auto& [f, mult] : fz.factors) s += mult * simple(f);
  return s;
}

SmithResult smith_check(const MuPQ& m, const IntPoly& F) {
  SmithResult out;
  out.margin = log_integral_exact(m, F);
  double fp = log_abs(resultant(m.P(), F)) / m.d();
  double fq = log_abs(resultant(m.Q(), F)) / (m.e() + 1);
  out.floor = std::max(fp, fq);
  return out;
}

double SweetenedMeasure::mass() const { return restricted.mass() + circle_weight; }

double SweetenedMeasure::potential(cplx z) const {
  return restricted.potential(z) - circle_weight * circle_log_kernel(circle.R, z);
}

double SweetenedMeasure::log_plus_moment() const {
  double s = 0.0;
  for (const auto& a : restricted.atoms) s += a.weight * std::max(0.0, std::log(std::abs(a.point)));
  return s + circle_weight * std::log(circle.R);
}

SweetenedMeasure sweeten(const DiscreteMeasure& m, double R) {
  if (!(R > 1.0)) throw InvalidArgument("sweetening radius must exceed 1");
  if (!m.is_probability()) throw InvalidArgument("sweetening needs a probability measure");
  SweetenedMeasure out;
  out.circle.R = R;
  for (const auto& a : m.atoms) {
    double r = std::abs(a.point);
    if (r <= R) out.m_R += a.weight;
    if (r >= R) out.T_R += a.weight * std::max(0.0, std::log(r));
  }
  double lr = std::log(R);
  out.L_R = 2.0 * std::max(0.0, 1.0 - out.m_R) * std::numbers::ln2 + out.T_R;
  out.eta = lr / (lr + out.L_R);
  for (const auto& a : m.atoms)
    if (std::abs(a.point) <= R && a.weight > 0.0) out.restricted.atoms.push_back({a.point, out.eta * a.weight});
  // The input mass is 1 only up to rounding; push the residue into the
  // circle weight, or into the heaviest atom when the atoms overshoot.
  double c = 0.0;
  for (int i = 0; i < 128; ++i) {
    double s = out.restricted.mass();
    if (s > 1.0) {
      auto& big = *std::max_element(out.restricted.atoms.begin(), out.restricted.atoms.end(),
                                    [](const Atom& a, const Atom& b) { return a.weight < b.weight; });
      big.weight = std::max(0.0, big.weight - (s - 1.0));
      if (s - 1.0 < 1e-300) big.weight = std::nextafter(big.weight, 0.0);
      continue;
    }
    if (c == 0.0) c = 1.0 - s;
    if (s + c == 1.0) break;
    c = s + c < 1.0 ? std::nextafter(c, 2.0) : std::nextafter(c, 0.0);
  }
  out.circle_weight = c;
  return out;
}

Measure measure_from_json(const std::string& text) {
  auto j = detail::parse_json(text);
  if (!j.is_object() || !j.contains("kind")) throw ParseError("measure needs a \"kind\"");
  std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "mu_pq") return MuPQ(detail::poly_from_json(j.at("P")), detail::poly_from_json(j.at("Q")));
    if (kind == "lemniscate") return RationalPullbackMeasure::lemniscate(detail::poly_from_json(j.at("P")));
    if (kind == "pullback")
      return RationalPullbackMeasure::pullback(detail::poly_from_json(j.at("A")), detail::poly_from_json(j.at("B")));
    if (kind == "circle") {
      double R = j.at("R").get<double>();
      if (!(R > 0.0)) throw InvalidArgument("circle radius must be positive");
      return CircleMeasure{R};
    }
    if (kind == "discrete") {
      DiscreteMeasure d;
      for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 3) throw ParseError("atom must be [re, im, w]");
        double w = a[2].get<double>();
        if (!(w >= 0.0)) throw InvalidArgument("atom weights must be nonnegative");
        d.atoms.push_back({cplx(a[0].get<double>(), a[1].get<double>()), w});
      }
      return d;
    }
  } catch (const detail::json::exception& e) {
    throw ParseError(e.what());
  }
  throw UnknownName("measure kind '" + kind + "'");
}

std::string measure_to_json(const Measure& m) {
  detail::json j;
  std::visit(
      [&j](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DiscreteMeasure>) {
          j["kind"] = "discrete";
          j["atoms"] = detail::json::array();
          for (const auto& a : v.atoms) j["atoms"].push_back({a.point.real(), a.point.imag(), a.weight});
        } else if constexpr (std::is_same_v<T, CircleMeasure>) {
          j["kind"] = "circle";
          j["R"] = v.R;
        } else if constexpr (std::is_same_v<T, MuPQ>) {
          j["kind"] = "mu_pq";
          j["P"] = v.P().str(false);
          j["Q"] = v.Q().str(false);
        } else {
          switch (v.kind()) {
            case RationalPullbackMeasure::Kind::lemniscate:
              j["kind"] = "lemniscate";
              j["P"] = v.first().str(false);
              break;
            case RationalPullbackMeasure::Kind::mu_pq:
              j["kind"] = "mu_pq";
              j["P"] = v.first().str(false);
              j["Q"] = v.second().str(false);
              break;
            default:
              j["kind"] = "pullback";
              j["A"] = v.first().str(false);
              j["B"] = v.second().str(false);
          }
        }
      },
      m);
  return j.dump();
}

QuadResult integrate(const Measure& m, const std::function<double(cplx)>& f, double tol) {
  return std::visit(
      [&](const auto& v) -> QuadResult {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DiscreteMeasure>) {
          QuadResult r;
          for (const auto& a : v.atoms) {
            double x = f(a.point);
            check_finite(x);
            r.value += a.weight * x;
          }
          r.error = 0.0;
          r.converged = true;
          r.nodes = static_cast<int>(v.atoms.size());
          return r;
        } else if constexpr (std::is_same_v<T, CircleMeasure>) {
          return integrate_circle(v, f, tol);
        } else if constexpr (std::is_same_v<T, MuPQ>) {
          return integrate_pullback(v.measure(), f, tol);
        } else {
          return integrate_pullback(v, f, tol);
        }
      },
      m);
}

}  // namespace essmin
