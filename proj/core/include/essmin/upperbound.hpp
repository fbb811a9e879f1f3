#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "essmin/greens.hpp"
#include "essmin/measures.hpp"

namespace essmin {

enum class Provenance { enumerated, seeded, cap1 };

std::string to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

/// An admissible measure (mu_{P,Q} or a monic lemniscate) with its integral
/// of g. value + err bounds ess(Ht_g) from above.
struct PrimalWitness {
  RationalPullbackMeasure measure;
  double value = std::numeric_limits<double>::infinity();
  double err = std::numeric_limits<double>::infinity();
  Provenance provenance = Provenance::enumerated;
  bool converged = false;

  double upper() const { return value + err; }
  int total_degree() const;
  std::string to_json() const;
  static PrimalWitness from_json(std::string_view text);
};

/// Integral of g against mu_{P,Q} or a monic lemniscate measure.
PrimalWitness eval_witness(const GreenFunction& g, const RationalPullbackMeasure& m, double tol,
                           Provenance p = Provenance::enumerated);
PrimalWitness eval_witness(const GreenFunction& g, const MuPQ& m, double tol,
                           Provenance p = Provenance::enumerated);
/// Integral of g against the equilibrium measure of {|P| <= 1}, P monic.
PrimalWitness cap1_bound(const GreenFunction& g, const IntPoly& P, double tol);

struct SearchConfig {
  int max_degree = 6;
  int max_height = 20;
  /// Candidates whose fiber degree d(e+1) exceeds this are skipped.
  int max_fiber_degree = 48;
  double coarse_tol = 1e-3;
  double refine_tol = 1e-6;
  /// Monic irreducible seeds; consecutive entries are paired.
  std::vector<IntPoly> seeds;
  bool use_enumerated = true;
  bool use_seeded = true;
  bool use_cap1 = true;
};

struct SearchResult {
  PrimalWitness best;
  /// Best first: value, then total degree, then measure text.
  std::vector<PrimalWitness> ranked;
  std::size_t evaluated = 0;
  std::size_t failed = 0;
};

/// Monic irreducible polynomials in order of (degree + height, degree, lex).
class MonicStream {
 public:
  MonicStream(int max_degree, int max_height);
  /// The k-th polynomial, extending the stream as needed; nullopt when the
  /// caps are exhausted.
  std::optional<IntPoly> at(std::size_t k);

 private:
  bool extend();

  int max_degree_, max_height_;
  int size_ = 1;  // current degree + height shell
  std::vector<IntPoly> items_;
  bool done_ = false;
};

/// Deterministic interleaving of the cap1, seeded and enumerated generators.
/// State is the number of candidates drawn, so a stream can be resumed.
class CandidateStream {
 public:
  CandidateStream(const SearchConfig& cfg);

  struct Candidate {
    Provenance provenance;
    IntPoly P, Q;  // Q is zero for cap1
  };
  std::optional<Candidate> next();
  std::uint64_t drawn() const { return drawn_; }
  void skip(std::uint64_t n);

 private:
  std::optional<Candidate> next_cap1();
  std::optional<Candidate> next_seeded();
  std::optional<Candidate> next_enumerated();

  SearchConfig cfg_;
  MonicStream monic_;
  std::size_t cap1_i_ = 0, seed_i_ = 0;
  std::size_t pair_n_ = 1, pair_i_ = 0;
  bool pair_flip_ = false;
  int turn_ = 0;
  std::uint64_t drawn_ = 0;
};

/// Candidate search under an evaluation budget: coarse prefilter of
/// `budget` candidates, then refinement of the top decile.
SearchResult search(const GreenFunction& g, const SearchConfig& cfg, std::size_t budget);

/// Evaluates the next `count` candidates of a stream at the coarse
/// tolerance, skipping inadmissible or failing ones.
std::vector<PrimalWitness> evaluate_candidates(const GreenFunction& g, const SearchConfig& cfg, CandidateStream& stream,
                                               std::size_t count, std::size_t* failed = nullptr);

/// Ranking order used by search.
bool witness_less(const PrimalWitness& a, const PrimalWitness& b);

/// Monic irreducible candidates taken from a lower-bound pool and from
/// algebraic recognition of minimizers, ordered by degree then enumeration.
std::vector<IntPoly> harvest_seeds(const std::vector<IntPoly>& pool, const std::vector<cplx>& minimizers,
                                   int max_degree = 4, int max_height = 12);

}  // namespace essmin
