#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "essmin/greens.hpp"
#include "essmin/lowerbound.hpp"
#include "essmin/upperbound.hpp"

namespace essmin {

struct RunConfig {
  /// Builtin name, composite JSON text, or a path to a composite JSON file.
  std::string green = "weil";
  double eps = 0.05;
  int budget_lp = 20;
  std::size_t budget_witness = 10000;
  double budget_wall_s = 1800.0;
  std::size_t tranche = 64;
  double inner_tol = 1e-4;
  std::size_t max_boxes = 400000;
  double coarse_tol = 1e-3;
  double witness_tol = 1e-6;
  int max_degree = 6;
  int max_height = 20;
  int max_fiber_degree = 48;
  Rigor rigor = Rigor::certified;
  /// Initial dual pool; empty means derived from g.
  std::vector<IntPoly> pool;
  /// Extra seeds for the witness search, paired consecutively.
  std::vector<IntPoly> seeds;
  std::string out_dir;
  std::uint64_t seed = 0;

  /// Throws ConfigInvalid.
  void validate() const;
  std::string to_json() const;
  static RunConfig from_json(std::string_view text);
};

/// Resolves the green selector of a config.
GreenFunction resolve_green(const std::string& selector);
/// x, plus the irreducible factors of the polynomials in g's definition.
std::vector<IntPoly> default_pool(const std::string& selector, const GreenFunction& g);
/// 64-bit FNV-1a of g's canonical spec, as 16 hex digits.
std::string spec_hash(const GreenFunction& g);

struct HistoryRow {
  int iter = 0;
  double wall_s = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  /// Sampled minimum of the current certificate; never a headline bound.
  double heuristic_lower = -std::numeric_limits<double>::infinity();
  int lp_rounds = 0;
  std::size_t witnesses = 0;
  std::string note;
};

enum class HaltReason { running, eps, budget };
std::string to_string(HaltReason h);

struct BoundsLedger {
  std::string green;
  std::string hash;
  DualCertificate certificate;
  std::optional<PrimalWitness> witness;
  std::vector<HistoryRow> rows;
  RunConfig config;
  std::uint64_t seed = 0;
  HaltReason halt = HaltReason::running;
  bool lower_rigorous = true;

  double lower() const { return rows.empty() ? -std::numeric_limits<double>::infinity() : rows.back().lower; }
  double upper() const { return rows.empty() ? std::numeric_limits<double>::infinity() : rows.back().upper; }
  double gap() const { return upper() - lower(); }

  /// Throws WeakDualityViolation if a row breaks weak duality or monotonicity.
  void check_invariants() const;
};

/// Weak-duality slack used by the ledger.
inline constexpr double kDualitySlack = 1e-7;

/// The alternating lower/upper loop. Each step runs one exchange round and
/// one witness tranche, appends a history row, and updates the halt state.
class Driver {
 public:
  explicit Driver(RunConfig cfg);
  /// Restores a checkpoint; `green`, when nonempty, must hash like the saved one.
  static Driver resume(const std::string& path, const std::string& green = {});
  static Driver from_checkpoint_json(std::string_view text, const std::string& green = {});

  /// One iteration; false once halted.
  bool step();
  /// Steps until halted.
  const BoundsLedger& run();
  bool halted() const { return ledger_.halt != HaltReason::running; }
  const BoundsLedger& ledger() const { return ledger_; }
  const GreenFunction& green() const { return g_; }

  std::string checkpoint_json() const;
  /// Atomic write (temp file, then rename).
  void checkpoint(const std::string& path) const;

 private:
  Driver(RunConfig cfg, GreenFunction g);
  void lower_phase(HistoryRow& row);
  void upper_phase(HistoryRow& row);
  void consider(const PrimalWitness& w);
  void update_heuristic();
  ExchangeOptions exchange_options() const;
  SearchConfig search_config() const;

  RunConfig cfg_;
  GreenFunction g_;
  BoundsLedger ledger_;
  std::unique_ptr<ExchangeSolver> solver_;
  std::unique_ptr<CandidateStream> stream_;
  std::vector<IntPoly> harvested_;
  std::size_t harvested_pairs_ = 0;  // consecutive harvested pairs already tried
  std::size_t evaluated_ = 0;
  double lower_ = -std::numeric_limits<double>::infinity();
  double heuristic_ = -std::numeric_limits<double>::infinity();
  double wall_offset_ = 0.0;
  std::chrono::steady_clock::time_point start_;
};

/// Runs a config to completion, writing checkpoint.json to out_dir after
/// every iteration when out_dir is set.
BoundsLedger run(const RunConfig& cfg);

/// report.json, history.csv and (optionally) convergence.svg in dir.
void write_report(const BoundsLedger& ledger, const std::string& dir, bool svg = true);
std::string report_json(const BoundsLedger& ledger);
std::string history_csv(const BoundsLedger& ledger);
std::string convergence_svg(const BoundsLedger& ledger);

}  // namespace essmin
