#pragma once

#include <gmpxx.h>

#include <atomic>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "essmin/interval.hpp"

namespace essmin {

enum class Tri : signed char { no = 0, yes = 1, unknown = 2 };

/// Integer polynomial with arbitrary-precision coefficients in ascending
/// degree. The zero polynomial has no coefficients and degree -1.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs);
  IntPoly(std::initializer_list<long> coeffs);
  IntPoly(const IntPoly& o);
  IntPoly(IntPoly&& o) noexcept;
  IntPoly& operator=(const IntPoly& o);
  IntPoly& operator=(IntPoly&& o) noexcept;

  static IntPoly constant(const mpz_class& c);
  static IntPoly monomial(const mpz_class& c, int k);
  /// Accepts "x^2 - 2", "x^2-x-1", "2*x+1", "3x", "-x^3+x".
  static IntPoly parse(std::string_view text);
  static IntPoly from_strings(const std::vector<std::string>& coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  mpz_class coeff(int k) const;
  const mpz_class& lc() const { return c_.back(); }
  bool is_monic() const { return monic_; }
  bool is_primitive() const { return primitive_; }
  mpz_class content() const;
  mpz_class height() const;
  IntPoly primitive_part() const;
  /// Primitive part with positive leading coefficient.
  IntPoly normalized() const;

  /// Irreducibility over Q, cached after the first query.
  bool is_irreducible(int max_degree = 8) const;
  Tri irreducibility() const { return static_cast<Tri>(irr_.load()); }

  std::complex<double> eval(std::complex<double> z) const;
  mpz_class eval(const mpz_class& x) const;
  std::vector<std::complex<double>> to_complex() const;
  std::vector<Interval> to_intervals() const;
  /// Enclosure of |P| over a box.
  Interval abs_range(const Box& box) const;
  /// sum |c_k|, as an upper-rounded double.
  double l1_norm() const;

  IntPoly derivative() const;
  IntPoly pow(unsigned k) const;

  /// Canonical text, e.g. "x^2 - x - 1"; compact form omits the spaces.
  std::string str(bool spaced = true) const;
  std::vector<std::string> to_strings() const;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const mpz_class& s, const IntPoly& a);
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

 private:
  void refresh();

  std::vector<mpz_class> c_;
  bool monic_ = false;
  bool primitive_ = false;
  mutable std::atomic<signed char> irr_{static_cast<signed char>(Tri::unknown)};
};

/// Enumeration order: degree, then height, then (c_d, ..., c_0) ascending.
bool enumeration_less(const IntPoly& a, const IntPoly& b);

/// Res(P, Q) = lc(P)^deg Q * prod_{P(a)=0} Q(a), by the subresultant PRS.
mpz_class resultant(const IntPoly& p, const IntPoly& q);

/// a = q*b + r over Q with lc(b)^(deg a - deg b + 1) scaling (pseudo-division).
std::pair<IntPoly, IntPoly> pseudo_divmod(const IntPoly& a, const IntPoly& b);
/// Exact division; nullopt when b does not divide a in Z[x].
std::optional<IntPoly> divide_exact(const IntPoly& a, const IntPoly& b);
/// Primitive gcd in Z[x] with positive leading coefficient.
IntPoly gcd(const IntPoly& a, const IntPoly& b);

IntPoly cyclotomic(unsigned n);

/// Irreducibility over Q. Throws DegreeTooLarge above max_degree.
bool is_irreducible_q(const IntPoly& p, int max_degree = 8);

struct Factorization {
  mpz_class unit;  // signed content
  std::vector<std::pair<IntPoly, int>> factors;  // primitive, lc > 0
};

/// Complete factorization over Z. Throws DegreeTooLarge above max_degree.
Factorization factor(const IntPoly& p, int max_degree = 16);

enum class PolyFilter { any, primitive_irreducible, monic_irreducible };

/// Deterministic, restartable stream of polynomials of degree 1..max_degree
/// with height at most max_height, in enumeration order.
class PolyEnumerator {
 public:
  PolyEnumerator(int max_degree, int max_height, PolyFilter filter);

  std::optional<IntPoly> next();
  /// Number of polynomials emitted so far.
  std::uint64_t position() const { return emitted_; }
  /// Restart and skip the first n emitted polynomials.
  void seek(std::uint64_t n);

 private:
  bool advance_tuple();
  bool accept(const IntPoly& p) const;

  int max_degree_;
  int max_height_;
  PolyFilter filter_;
  int degree_ = 1;
  int height_ = 1;
  std::vector<long> tuple_;  // c_d .. c_0
  bool started_ = false;
  bool done_ = false;
  std::uint64_t emitted_ = 0;
};

}  // namespace essmin
