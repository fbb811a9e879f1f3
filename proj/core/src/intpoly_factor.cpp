#include <algorithm>
#include <cstdint>
#include <random>
#include <iterator>
#include <optional>
#include <set>
#include <string>

#include "essmin/errors.hpp"
#include "essmin/intpoly.hpp"

namespace essmin {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Fp = std::vector<u64>;  // ascending, trimmed

u64 mulm(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
u64 addm(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

u64 powm(u64 b, u64 e, u64 p) {
  u64 r = 1 % p;
  while (e) {
    if (e & 1U) r = mulm(r, b, p);
    b = mulm(b, b, p);
    e >>= 1U;
  }
  return r;
}

u64 invm(u64 a, u64 p) { return powm(a, p - 2, p); }

void trim(Fp& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const Fp& a) { return static_cast<int>(a.size()) - 1; }

Fp reduce(const IntPoly& f, u64 p) {
  Fp r;
  mpz_class m, pm(std::to_string(p));
  for (const auto& c : f.coeffs()) {
    mpz_mod(m.get_mpz_t(), c.get_mpz_t(), pm.get_mpz_t());
    r.push_back(std::stoull(m.get_str()));
  }
  trim(r);
  return r;
}

Fp sub(const Fp& a, const Fp& b, u64 p) {
  Fp r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = subm(r[i], b[i], p);
  trim(r);
  return r;
}

Fp mul(const Fp& a, const Fp& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Fp r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = addm(r[i + j], mulm(a[i], b[j], p), p);
  }
  trim(r);
  return r;
}

// Quotient and remainder; b nonzero.
std::pair<Fp, Fp> divmod(Fp a, const Fp& b, u64 p) {
  int n = deg(b);
  if (deg(a) < n) return {Fp{}, a};
  u64 inv = invm(b.back(), p);
  Fp q(static_cast<std::size_t>(deg(a) - n + 1), 0);
  for (int k = deg(a); k >= n; --k) {
    u64 t = mulm(a[static_cast<std::size_t>(k)], inv, p);
    q[static_cast<std::size_t>(k - n)] = t;
    if (t == 0) continue;
    for (int j = 0; j <= n; ++j) {
      auto idx = static_cast<std::size_t>(k - n + j);
      a[idx] = subm(a[idx], mulm(t, b[static_cast<std::size_t>(j)], p), p);
    }
  }
  a.resize(static_cast<std::size_t>(n));
  trim(a);
  trim(q);
  return {q, a};
}

Fp mod(const Fp& a, const Fp& b, u64 p) { return divmod(a, b, p).second; }

Fp monic(Fp a, u64 p) {
  if (a.empty()) return a;
  u64 inv = invm(a.back(), p);
  for (auto& c : a) c = mulm(c, inv, p);
  return a;
}

Fp gcd(Fp a, Fp b, u64 p) {
  while (!b.empty()) {
    Fp r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

Fp deriv(const Fp& a, u64 p) {
  Fp r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(mulm(a[i], i % p, p));
  trim(r);
  return r;
}

Fp powmod(Fp base, const mpz_class& e, const Fp& f, u64 p) {
  Fp r{1};
  base = mod(base, f, p);
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mod(mul(r, r, p), f, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(mul(r, base, p), f, p);
  }
  return r;
}

// Distinct-degree factorization of a monic squarefree f.
std::vector<std::pair<Fp, int>> ddf(Fp f, u64 p) {
  std::vector<std::pair<Fp, int>> out;
  Fp x{0, 1};
  Fp h = x;
  mpz_class pm(std::to_string(p));
  for (int i = 1; 2 * i <= deg(f); ++i) {
    h = powmod(h, pm, f, p);
    Fp g = gcd(f, sub(h, x, p), p);
    if (deg(g) > 0) {
      out.emplace_back(g, i);
      f = divmod(f, g, p).first;
      h = mod(h, f, p);
    }
  }
  if (deg(f) > 0) out.emplace_back(f, deg(f));
  return out;
}

// Equal-degree splitting (Cantor-Zassenhaus), p odd.
void edf(const Fp& g, int d, u64 p, std::mt19937_64& rng, std::vector<Fp>& out) {
  if (deg(g) == d) {
    out.push_back(g);
    return;
  }
  mpz_class e;
  mpz_class pm(std::to_string(p));
  mpz_pow_ui(e.get_mpz_t(), pm.get_mpz_t(), static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  std::uniform_int_distribution<u64> dist(0, p - 1);
  for (;;) {
    Fp a(static_cast<std::size_t>(deg(g)));
    for (auto& c : a) c = dist(rng);
    trim(a);
    if (deg(a) < 1) continue;
    Fp b = powmod(a, e, g, p);
    b = sub(b, Fp{1}, p);
    Fp h = gcd(g, b, p);
    if (deg(h) > 0 && deg(h) < deg(g)) {
      edf(h, d, p, rng, out);
      edf(divmod(g, h, p).first, d, p, rng, out);
      return;
    }
  }
}

bool squarefree_mod(const Fp& f, u64 p) { return deg(gcd(f, deriv(f, p), p)) == 0; }

// Possible degrees of proper factors over Z, from the factorization degree
// pattern modulo a small prime. Empty optional if p is unsuitable.
std::optional<std::set<int>> degree_pattern(const IntPoly& f, u64 p) {
  Fp fp = reduce(f, p);
  if (deg(fp) != f.degree()) return std::nullopt;
  fp = monic(fp, p);
  if (!squarefree_mod(fp, p)) return std::nullopt;
  std::set<int> sums{0};
  for (auto& [g, d] : ddf(fp, p)) {
    int count = deg(g) / d;
    for (int k = 0; k < count; ++k) {
      std::set<int> next = sums;
      for (int s : sums) next.insert(s + d);
      sums = std::move(next);
    }
  }
  std::set<int> proper;
  for (int s : sums)
    if (s > 0 && s < f.degree()) proper.insert(s);
  return proper;
}

IntPoly symmetric_lift(const Fp& a, u64 p) {
  std::vector<mpz_class> v;
  mpz_class pm(std::to_string(p));
  mpz_class half = pm / 2;
  for (u64 c : a) {
    mpz_class m(std::to_string(c));
    if (m > half) m -= pm;
    v.push_back(m);
  }
  return IntPoly(std::move(v));
}

// Irreducible factors of a primitive squarefree f with positive lc.
std::vector<IntPoly> zassenhaus(IntPoly f) {
  int n = f.degree();
  if (n <= 1) return {f};
  mpz_class norm2 = 0;
  for (const auto& c : f.coeffs()) norm2 += c * c;
  mpz_class norm = sqrt(norm2) + 1;
  mpz_class bound = ::abs(f.lc()) * norm;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<unsigned long>(n));
  mpz_class p = 2 * bound + 1;
  mpz_class limit;
  mpz_ui_pow_ui(limit.get_mpz_t(), 2, 62);
  Fp fp;
  u64 pu = 0;
  for (;;) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (p >= limit) throw DegreeTooLarge("coefficient bound too large for single-prime factoring");
    pu = std::stoull(p.get_str());
    fp = reduce(f, pu);
    if (deg(fp) != n) continue;
    fp = monic(fp, pu);
    if (squarefree_mod(fp, pu)) break;
  }
  std::mt19937_64 rng(0x5eed5eedULL);
  std::vector<Fp> modular;
  for (auto& [g, d] : ddf(fp, pu)) edf(g, d, pu, rng, modular);
  if (modular.size() == 1) return {f};

  std::vector<IntPoly> out;
  std::vector<Fp> rest = modular;
  std::size_t s = 1;
  while (2 * s <= rest.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
      Fp prod = reduce(IntPoly::constant(f.lc()), pu);
      for (std::size_t i : idx) prod = mul(prod, rest[i], pu);
      IntPoly cand = symmetric_lift(prod, pu).primitive_part();
      if (cand.lc() < 0) cand = -cand;
      if (auto q = divide_exact(f, cand)) {
        out.push_back(cand);
        f = *q;
        if (f.lc() < 0) f = -f;
        std::vector<Fp> keep;
        for (std::size_t i = 0; i < rest.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end()) keep.push_back(rest[i]);
        rest = std::move(keep);
        found = true;
        break;
      }
      // next s-subset in lex order
      std::size_t k = s;
      while (k > 0 && idx[k - 1] == rest.size() - s + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (f.degree() > 0) out.push_back(f);
  return out;
}

const u64 kSmallPrimes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

bool is_irreducible_q(const IntPoly& p, int max_degree) {
  if (p.degree() < 1) throw InvalidArgument("irreducibility needs degree >= 1");
  if (p.degree() > max_degree)
    throw DegreeTooLarge("degree " + std::to_string(p.degree()) + " exceeds " + std::to_string(max_degree));
  IntPoly f = p.normalized();
  int n = f.degree();
  if (n == 1) return true;
  if (gcd(f, f.derivative()).degree() > 0) return false;
  if (n == 2) {
    mpz_class disc = f.coeff(1) * f.coeff(1) - 4 * f.coeff(2) * f.coeff(0);
    return disc < 0 || !mpz_perfect_square_p(disc.get_mpz_t());
  }
  std::set<int> possible;
  for (int k = 1; k < n; ++k) possible.insert(k);
  int used = 0;
  for (u64 q : kSmallPrimes) {
    auto pat = degree_pattern(f, q);
    if (!pat) continue;
    std::set<int> both;
    std::set_intersection(possible.begin(), possible.end(), pat->begin(), pat->end(),
                          std::inserter(both, both.begin()));
    possible = std::move(both);
    if (possible.empty()) return true;
    if (++used >= 6) break;
  }
  return zassenhaus(f).size() == 1;
}

Factorization factor(const IntPoly& p, int max_degree) {
  if (p.is_zero()) throw InvalidArgument("cannot factor the zero polynomial");
  if (p.degree() > max_degree)
    throw DegreeTooLarge("degree " + std::to_string(p.degree()) + " exceeds " + std::to_string(max_degree));
  Factorization out;
  out.unit = p.content();
  if (p.lc() < 0) out.unit = -out.unit;
  IntPoly f = p.normalized();
  if (f.degree() < 1) return out;
  // Square-free decomposition; all quotients are exact in Z[x] by Gauss.
  IntPoly g = gcd(f, f.derivative());
  IntPoly w = *divide_exact(f, g);
  int mult = 1;
  while (w.degree() > 0) {
    IntPoly y = gcd(w, g);
    IntPoly z = *divide_exact(w, y);
    if (z.degree() > 0) {
      for (auto& h : zassenhaus(z.normalized())) out.factors.emplace_back(h.normalized(), mult);
    }
    w = y;
    g = *divide_exact(g, y);
    ++mult;
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return enumeration_less(a.first, b.first); });
  return out;
}

}  // namespace essmin
