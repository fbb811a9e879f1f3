#include "essmin/intpoly.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "essmin/errors.hpp"

namespace essmin {

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { refresh(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
  for (long v : coeffs) c_.emplace_back(v);
  refresh();
}

IntPoly::IntPoly(const IntPoly& o)
    : c_(o.c_), monic_(o.monic_), primitive_(o.primitive_), irr_(o.irr_.load()) {}

IntPoly::IntPoly(IntPoly&& o) noexcept
    : c_(std::move(o.c_)), monic_(o.monic_), primitive_(o.primitive_), irr_(o.irr_.load()) {}

IntPoly& IntPoly::operator=(const IntPoly& o) {
  if (this != &o) {
    c_ = o.c_;
    monic_ = o.monic_;
    primitive_ = o.primitive_;
    irr_.store(o.irr_.load());
  }
  return *this;
}

IntPoly& IntPoly::operator=(IntPoly&& o) noexcept {
  c_ = std::move(o.c_);
  monic_ = o.monic_;
  primitive_ = o.primitive_;
  irr_.store(o.irr_.load());
  return *this;
}

void IntPoly::refresh() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  monic_ = !c_.empty() && c_.back() == 1;
  primitive_ = !c_.empty() && content() == 1;
  irr_.store(static_cast<signed char>(Tri::unknown));
}

IntPoly IntPoly::constant(const mpz_class& c) { return IntPoly(std::vector<mpz_class>{c}); }

IntPoly IntPoly::monomial(const mpz_class& c, int k) {
  std::vector<mpz_class> v(static_cast<std::size_t>(k) + 1, 0);
  v.back() = c;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ParseError("empty polynomial");
  std::map<int, mpz_class> acc;
  std::size_t i = 0;
  auto digits = [&](std::size_t& j) {
    std::size_t start = j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    return s.substr(start, j - start);
  };
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw ParseError("expected sign in '" + s + "'");
    }
    first = false;
    std::string num = digits(i);
    mpz_class c = num.empty() ? mpz_class(1) : mpz_class(num);
    int k = 0;
    if (i < s.size() && s[i] == '*') {
      ++i;
      if (i >= s.size() || s[i] != 'x') throw ParseError("expected x after '*'");
    }
    if (i < s.size() && s[i] == 'x') {
      ++i;
      k = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string e = digits(i);
        if (e.empty()) throw ParseError("missing exponent in '" + s + "'");
        k = std::stoi(e);
      }
    } else if (num.empty()) {
      throw ParseError("unexpected character in '" + s + "'");
    }
    acc[k] += sign * c;
  }
  int deg = acc.empty() ? -1 : acc.rbegin()->first;
  std::vector<mpz_class> v(static_cast<std::size_t>(deg + 1), 0);
  for (auto& [k, c] : acc) v[static_cast<std::size_t>(k)] = c;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::from_strings(const std::vector<std::string>& coeffs) {
  std::vector<mpz_class> v;
  for (const auto& s : coeffs) {
    mpz_class c;
    if (c.set_str(s, 10) != 0) throw ParseError("bad integer '" + s + "'");
    v.push_back(c);
  }
  return IntPoly(std::move(v));
}

mpz_class IntPoly::coeff(int k) const {
  if (k < 0 || k > degree()) return 0;
  return c_[static_cast<std::size_t>(k)];
}

mpz_class IntPoly::content() const {
  mpz_class g = 0;
  for (const auto& c : c_) g = ::gcd(g, c);
  return g;
}

mpz_class IntPoly::height() const {
  mpz_class h = 0;
  for (const auto& c : c_) h = std::max(h, mpz_class(::abs(c)));
  return h;
}

IntPoly IntPoly::primitive_part() const {
  if (is_zero()) return *this;
  mpz_class g = content();
  std::vector<mpz_class> v(c_);
  for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return IntPoly(std::move(v));
}

IntPoly IntPoly::normalized() const {
  IntPoly p = primitive_part();
  if (!p.is_zero() && p.lc() < 0) p = -p;
  return p;
}

bool IntPoly::is_irreducible(int max_degree) const {
  auto t = static_cast<Tri>(irr_.load());
  if (t != Tri::unknown) return t == Tri::yes;
  bool r = is_irreducible_q(*this, max_degree);
  irr_.store(static_cast<signed char>(r ? Tri::yes : Tri::no));
  return r;
}

std::complex<double> IntPoly::eval(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i].get_d();
  return acc;
}

mpz_class IntPoly::eval(const mpz_class& x) const {
  mpz_class acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

std::vector<std::complex<double>> IntPoly::to_complex() const {
  std::vector<std::complex<double>> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.emplace_back(c.get_d(), 0.0);
  return v;
}

std::vector<Interval> IntPoly::to_intervals() const {
  std::vector<Interval> v;
  v.reserve(c_.size());
  for (const auto& c : c_) {
    double d = c.get_d();
    if (cmp(c, d) == 0)
      v.emplace_back(d);
    else
      v.emplace_back(round_down(d), round_up(d));
  }
  return v;
}

Interval IntPoly::abs_range(const Box& box) const {
  auto iv = to_intervals();
  return poly_abs_range(std::span<const Interval>(iv), box);
}

double IntPoly::l1_norm() const {
  double s = 0.0;
  for (const auto& c : c_) s = round_up(s + round_up(std::abs(c.get_d())));
  return s;
}

IntPoly IntPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<mpz_class> v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(v));
}

IntPoly IntPoly::pow(unsigned k) const {
  IntPoly r = constant(1);
  IntPoly b = *this;
  while (k) {
    if (k & 1U) r = r * b;
    k >>= 1U;
    if (k) b = b * b;
  }
  return r;
}

std::string IntPoly::str(bool spaced) const {
  if (c_.empty()) return "0";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    const mpz_class& c = c_[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    mpz_class a = ::abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += spaced ? (c < 0 ? " - " : " + ") : (c < 0 ? "-" : "+");
    }
    if (k == 0) {
      out += a.get_str();
      continue;
    }
    if (a != 1) out += a.get_str() + "*";
    out += "x";
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out;
}

std::vector<std::string> IntPoly::to_strings() const {
  std::vector<std::string> v;
  for (const auto& c : c_) v.push_back(c.get_str());
  return v;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<mpz_class> v(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
  return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a) {
  std::vector<mpz_class> v(a.c_);
  for (auto& c : v) c = -c;
  return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> v(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return IntPoly(std::move(v));
}

IntPoly operator*(const mpz_class& s, const IntPoly& a) {
  std::vector<mpz_class> v(a.c_);
  for (auto& c : v) c *= s;
  return IntPoly(std::move(v));
}

bool enumeration_less(const IntPoly& a, const IntPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  mpz_class ha = a.height(), hb = b.height();
  if (ha != hb) return ha < hb;
  for (int k = a.degree(); k >= 0; --k) {
    mpz_class x = a.coeff(k), y = b.coeff(k);
    if (x != y) return x < y;
  }
  return false;
}

std::pair<IntPoly, IntPoly> pseudo_divmod(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw ZeroDenominator("pseudo division by zero polynomial");
  int m = a.degree(), n = b.degree();
  if (m < n) return {IntPoly(), a};
  std::vector<mpz_class> r(a.coeffs());
  std::vector<mpz_class> q(static_cast<std::size_t>(m - n + 1), 0);
  const mpz_class& lb = b.lc();
  for (int k = m; k >= n; --k) {
    mpz_class t = r[static_cast<std::size_t>(k)];
    for (auto& c : q) c *= lb;
    q[static_cast<std::size_t>(k - n)] += t;
    for (auto& c : r) c *= lb;
    for (int j = 0; j <= n; ++j) r[static_cast<std::size_t>(k - n + j)] -= t * b.coeffs()[static_cast<std::size_t>(j)];
  }
  // Each step scaled by lb once; m - n + 1 steps in total.
  r.resize(static_cast<std::size_t>(n));
  return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

std::optional<IntPoly> divide_exact(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw ZeroDenominator("division by zero polynomial");
  if (a.is_zero()) return IntPoly();
  int m = a.degree(), n = b.degree();
  if (m < n) return std::nullopt;
  std::vector<mpz_class> r(a.coeffs());
  std::vector<mpz_class> q(static_cast<std::size_t>(m - n + 1), 0);
  const mpz_class& lb = b.lc();
  for (int k = m; k >= n; --k) {
    mpz_class& t = r[static_cast<std::size_t>(k)];
    if (t == 0) continue;
    if (!mpz_divisible_p(t.get_mpz_t(), lb.get_mpz_t())) return std::nullopt;
    mpz_class f;
    mpz_divexact(f.get_mpz_t(), t.get_mpz_t(), lb.get_mpz_t());
    q[static_cast<std::size_t>(k - n)] = f;
    for (int j = 0; j <= n; ++j) r[static_cast<std::size_t>(k - n + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
  }
  for (int k = 0; k < n; ++k)
    if (r[static_cast<std::size_t>(k)] != 0) return std::nullopt;
  return IntPoly(std::move(q));
}

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero()) return b.normalized();
  if (b.is_zero()) return a.normalized();
  mpz_class c = ::gcd(a.content(), b.content());
  IntPoly x = a.primitive_part(), y = b.primitive_part();
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntPoly r = pseudo_divmod(x, y).second;
    x = y;
    y = r.is_zero() ? r : r.primitive_part();
  }
  IntPoly g = x.normalized();
  if (g.degree() == 0) return IntPoly::constant(c);
  return c * g;
}

mpz_class resultant(const IntPoly& p, const IntPoly& q) {
  if (p.is_zero() || q.is_zero()) return 0;
  int dp = p.degree(), dq = q.degree();
  if (dp == 0 || dq == 0) {
    mpz_class r;
    if (dp == 0) mpz_pow_ui(r.get_mpz_t(), p.lc().get_mpz_t(), static_cast<unsigned long>(dq));
    else mpz_pow_ui(r.get_mpz_t(), q.lc().get_mpz_t(), static_cast<unsigned long>(dp));
    return r;
  }
  IntPoly a = p, b = q;
  mpz_class s = 1;
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() & 1) && (b.degree() & 1)) s = -s;
  }
  mpz_class ca = a.content(), cb = b.content();
  a = a.primitive_part();
  b = b.primitive_part();
  mpz_class t, tb;
  mpz_pow_ui(t.get_mpz_t(), ca.get_mpz_t(), static_cast<unsigned long>(b.degree()));
  mpz_pow_ui(tb.get_mpz_t(), cb.get_mpz_t(), static_cast<unsigned long>(a.degree()));
  t *= tb;
  mpz_class g = 1, h = 1;
  while (b.degree() > 0) {
    int delta = a.degree() - b.degree();
    if ((a.degree() & 1) && (b.degree() & 1)) s = -s;
    IntPoly r = pseudo_divmod(a, b).second;
    a = b;
    if (r.is_zero()) return 0;
    mpz_class hd;
    mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta));
    mpz_class div = g * hd;
    std::vector<mpz_class> rc(r.coeffs());
    for (auto& c : rc) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), div.get_mpz_t());
    b = IntPoly(std::move(rc));
    g = a.lc();
    if (delta == 0) continue;
    mpz_class gd, hd1;
    mpz_pow_ui(gd.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
    mpz_pow_ui(hd1.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta - 1));
    mpz_divexact(h.get_mpz_t(), gd.get_mpz_t(), hd1.get_mpz_t());
  }
  // b is a nonzero constant here.
  int da = a.degree();
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), b.lc().get_mpz_t(), static_cast<unsigned long>(da));
  mpz_pow_ui(den.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(da - 1));
  mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return s * t * h;
}

IntPoly cyclotomic(unsigned n) {
  if (n == 0) throw InvalidArgument("cyclotomic(0)");
  // x^n - 1 divided by all Phi_d for proper divisors d.
  IntPoly p = IntPoly::monomial(1, static_cast<int>(n)) - IntPoly::constant(1);
  for (unsigned d = 1; d < n; ++d) {
    if (n % d) continue;
    auto q = divide_exact(p, cyclotomic(d));
    p = *q;
  }
  return p;
}

PolyEnumerator::PolyEnumerator(int max_degree, int max_height, PolyFilter filter)
    : max_degree_(max_degree), max_height_(max_height), filter_(filter) {
  if (max_degree < 1) throw InvalidArgument("enumeration needs max_degree >= 1");
}

void PolyEnumerator::seek(std::uint64_t n) {
  degree_ = 1;
  height_ = 1;
  tuple_.clear();
  started_ = false;
  done_ = false;
  emitted_ = 0;
  while (emitted_ < n && next()) {
  }
}

bool PolyEnumerator::advance_tuple() {
  // Lexicographic odometer on (c_d, ..., c_0) in [-h, h], c_d restricted by
  // the filter. Returns false when the current (degree, height) is exhausted.
  const long h = height_;
  const long lead_lo = filter_ == PolyFilter::monic_irreducible ? 1 : (filter_ == PolyFilter::any ? -h : 1);
  const long lead_hi = filter_ == PolyFilter::monic_irreducible ? 1 : h;
  if (!started_) {
    tuple_.assign(static_cast<std::size_t>(degree_) + 1, -h);
    tuple_[0] = lead_lo;
    started_ = true;
    return true;
  }
  for (std::size_t i = tuple_.size(); i-- > 0;) {
    long hi = i == 0 ? lead_hi : h;
    if (tuple_[i] < hi) {
      ++tuple_[i];
      for (std::size_t j = i + 1; j < tuple_.size(); ++j) tuple_[j] = -h;
      return true;
    }
  }
  return false;
}

bool PolyEnumerator::accept(const IntPoly& p) const {
  switch (filter_) {
    case PolyFilter::any:
      return true;
    case PolyFilter::monic_irreducible:
      return p.is_monic() && p.is_irreducible(std::max(8, max_degree_));
    case PolyFilter::primitive_irreducible:
      return p.lc() > 0 && p.is_primitive() && p.is_irreducible(std::max(8, max_degree_));
  }
  return false;
}

std::optional<IntPoly> PolyEnumerator::next() {
  while (!done_) {
    if (!advance_tuple()) {
      started_ = false;
      if (++height_ > max_height_) {
        height_ = 1;
        if (++degree_ > max_degree_) {
          done_ = true;
          break;
        }
      }
      continue;
    }
    long h = 0;
    for (long c : tuple_) h = std::max(h, std::labs(c));
    if (h != height_ || tuple_[0] == 0) continue;
    std::vector<mpz_class> v(tuple_.size());
    for (std::size_t i = 0; i < tuple_.size(); ++i) v[tuple_.size() - 1 - i] = tuple_[i];
    IntPoly p(std::move(v));
    if (!accept(p)) continue;
    ++emitted_;
    return p;
  }
  return std::nullopt;
}

}  // namespace essmin
