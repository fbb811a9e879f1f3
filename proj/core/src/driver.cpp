#include "essmin/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "essmin/errors.hpp"
#include "json_util.hpp"

namespace essmin {

namespace {

using detail::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double num_of(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("expected a number");
}

json polys_json(const std::vector<IntPoly>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.str(false));
  return a;
}

std::vector<IntPoly> polys_of(const json& j) {
  std::vector<IntPoly> out;
  for (const auto& p : j) out.push_back(detail::poly_from_json(p));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IOError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IOError("cannot rename " + tmp.string() + ": " + ec.message());
}

bool is_builtin(const std::string& s) {
  auto names = builtin_names();
  return std::find(names.begin(), names.end(), s) != names.end();
}

std::string composite_text(const std::string& selector) {
  if (!selector.empty() && selector.front() == '{') return selector;
  if (!std::filesystem::exists(selector))
    throw UnknownName("'" + selector + "' is neither a builtin, composite JSON, nor a file");
  return read_file(selector);
}

json row_json(const HistoryRow& r) {
  json j;
  j["iter"] = r.iter;
  j["wall_s"] = num(r.wall_s);
  j["lower"] = num(r.lower);
  j["upper"] = num(r.upper);
  j["gap"] = num(r.gap);
  j["heuristic_lower"] = num(r.heuristic_lower);
  j["lp_rounds"] = r.lp_rounds;
  j["witnesses"] = r.witnesses;
  j["note"] = r.note;
  return j;
}

HistoryRow row_of(const json& j) {
  HistoryRow r;
  r.iter = j.at("iter").get<int>();
  r.wall_s = num_of(j.at("wall_s"));
  r.lower = num_of(j.at("lower"));
  r.upper = num_of(j.at("upper"));
  r.gap = num_of(j.at("gap"));
  r.heuristic_lower = num_of(j.at("heuristic_lower"));
  r.lp_rounds = j.at("lp_rounds").get<int>();
  r.witnesses = j.at("witnesses").get<std::size_t>();
  r.note = j.at("note").get<std::string>();
  return r;
}

HaltReason halt_from_string(const std::string& s) {
  if (s == "running") return HaltReason::running;
  if (s == "eps") return HaltReason::eps;
  if (s == "budget") return HaltReason::budget;
  throw ParseError("unknown halt reason '" + s + "'");
}

}  // namespace

std::string to_string(HaltReason h) {
  switch (h) {
    case HaltReason::running:
      return "running";
    case HaltReason::eps:
      return "eps";
    case HaltReason::budget:
      return "budget";
  }
  return "running";
}

void RunConfig::validate() const {
  auto bad = [](const std::string& m) { throw ConfigInvalid(m); };
  if (green.empty()) bad("green selector is empty");
  if (!(eps > 0.0) || !std::isfinite(eps)) bad("eps must be positive");
  if (budget_lp < 1) bad("LP budget must be at least 1");
  if (budget_witness < 1) bad("witness budget must be at least 1");
  if (!(budget_wall_s > 0.0)) bad("wall-clock budget must be positive");
  if (tranche < 1) bad("tranche must be at least 1");
  if (!(inner_tol > 0.0) || !(coarse_tol > 0.0) || !(witness_tol > 0.0)) bad("tolerances must be positive");
  if (max_boxes < 1) bad("box budget must be at least 1");
  if (max_degree < 1 || max_height < 1 || max_fiber_degree < 2) bad("enumeration caps must be positive");
  for (const auto& p : pool)
    if (p.is_zero() || !p.is_primitive()) bad("pool polynomials must be primitive: " + p.str());
}

std::string RunConfig::to_json() const {
  json j;
  j["green"] = green;
  j["eps"] = eps;
  j["budget_lp"] = budget_lp;
  j["budget_witness"] = budget_witness;
  j["budget_wall_s"] = budget_wall_s;
  j["tranche"] = tranche;
  j["inner_tol"] = inner_tol;
  j["max_boxes"] = max_boxes;
  j["coarse_tol"] = coarse_tol;
  j["witness_tol"] = witness_tol;
  j["max_degree"] = max_degree;
  j["max_height"] = max_height;
  j["max_fiber_degree"] = max_fiber_degree;
  j["rigor"] = essmin::to_string(rigor);
  j["pool"] = polys_json(pool);
  j["seeds"] = polys_json(seeds);
  j["out_dir"] = out_dir;
  j["seed"] = seed;
  return j.dump();
}

RunConfig RunConfig::from_json(std::string_view text) {
  auto j = detail::parse_json(text);
  if (!j.is_object()) throw ConfigInvalid("config must be a JSON object");
  RunConfig c;
  try {
    c.green = j.value("green", c.green);
    c.eps = j.value("eps", c.eps);
    c.budget_lp = j.value("budget_lp", c.budget_lp);
    c.budget_witness = j.value("budget_witness", c.budget_witness);
    c.budget_wall_s = j.value("budget_wall_s", c.budget_wall_s);
    c.tranche = j.value("tranche", c.tranche);
    c.inner_tol = j.value("inner_tol", c.inner_tol);
    c.max_boxes = j.value("max_boxes", c.max_boxes);
    c.coarse_tol = j.value("coarse_tol", c.coarse_tol);
    c.witness_tol = j.value("witness_tol", c.witness_tol);
    c.max_degree = j.value("max_degree", c.max_degree);
    c.max_height = j.value("max_height", c.max_height);
    c.max_fiber_degree = j.value("max_fiber_degree", c.max_fiber_degree);
    if (j.contains("rigor")) c.rigor = rigor_from_string(j.at("rigor").get<std::string>());
    if (j.contains("pool")) c.pool = polys_of(j.at("pool"));
    if (j.contains("seeds")) c.seeds = polys_of(j.at("seeds"));
    c.out_dir = j.value("out_dir", c.out_dir);
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    throw ConfigInvalid(e.what());
  } catch (const ParseError& e) {
    throw ConfigInvalid(e.what());
  }
  return c;
}

GreenFunction resolve_green(const std::string& selector) {
  if (is_builtin(selector)) return builtin(selector);
  return make_composite(CompositeSpec::from_json(composite_text(selector)));
}

std::vector<IntPoly> default_pool(const std::string& selector, const GreenFunction& g) {
  std::vector<IntPoly> pool{IntPoly{0, 1}};
  auto add = [&pool](const IntPoly& p) {
    if (p.degree() < 1) return;
    for (const auto& [f, mult] : factor(p).factors) {
      IntPoly q = f.normalized();
      if (std::find(pool.begin(), pool.end(), q) == pool.end()) pool.push_back(q);
    }
  };
  if (selector == "faltings") {
    for (cplx z : g.feature_points()) {
      double r = std::round(z.real());
      if (z.imag() == 0.0 && r == z.real() && std::abs(r) < 1e15)
        add(IntPoly::constant(-static_cast<long>(r)) + IntPoly{0, 1});
    }
    return pool;
  }
  CompositeSpec spec = is_builtin(selector) ? builtin_spec(selector) : CompositeSpec::from_json(composite_text(selector));
  for (const auto& t : spec.terms) {
    add(t.num);
    add(t.den);
  }
  return pool;
}

std::string spec_hash(const GreenFunction& g) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : g.spec_json()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void BoundsLedger::check_invariants() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.lower > r.upper + kDualitySlack) {
      std::ostringstream m;
      m.precision(17);
      m << "row " << r.iter << ": lower " << r.lower << " exceeds upper " << r.upper << "; certificate "
        << certificate.to_json() << "; witness " << (witness ? witness->to_json() : std::string("none"));
      throw WeakDualityViolation(m.str());
    }
    if (i > 0 && (r.lower < rows[i - 1].lower || r.upper > rows[i - 1].upper))
      throw WeakDualityViolation("history is not monotone at row " + std::to_string(r.iter));
  }
}

Driver::Driver(RunConfig cfg) : Driver(cfg, (cfg.validate(), resolve_green(cfg.green))) {}

Driver::Driver(RunConfig cfg, GreenFunction g) : cfg_(std::move(cfg)), g_(std::move(g)) {
  cfg_.validate();
  ledger_.green = cfg_.green;
  ledger_.hash = spec_hash(g_);
  ledger_.config = cfg_;
  ledger_.seed = cfg_.seed;
  ledger_.lower_rigorous = g_.enclosure_rigorous();
  auto pool = cfg_.pool.empty() ? default_pool(cfg_.green, g_) : cfg_.pool;
  solver_ = std::make_unique<ExchangeSolver>(g_, pool, default_seed_grid(g_), exchange_options());
  stream_ = std::make_unique<CandidateStream>(search_config());
  start_ = std::chrono::steady_clock::now();
}

ExchangeOptions Driver::exchange_options() const {
  ExchangeOptions o;
  o.max_rounds = cfg_.budget_lp;
  o.rigor = cfg_.rigor;
  o.inner_tol = cfg_.inner_tol;
  o.max_boxes = cfg_.max_boxes;
  return o;
}

SearchConfig Driver::search_config() const {
  SearchConfig s;
  s.max_degree = cfg_.max_degree;
  s.max_height = cfg_.max_height;
  s.max_fiber_degree = cfg_.max_fiber_degree;
  s.coarse_tol = cfg_.coarse_tol;
  s.refine_tol = cfg_.witness_tol;
  s.seeds = cfg_.seeds;
  return s;
}

void Driver::update_heuristic() {
  try {
    heuristic_ = heuristic_inf(g_, ledger_.certificate).hi;
  } catch (const WeakDualityViolation&) {
    throw;
  } catch (const Error&) {
    heuristic_ = -kInf;
  }
}

void Driver::lower_phase(HistoryRow& row) {
  if (solver_->done() || solver_->rounds() >= cfg_.budget_lp) return;
  try {
    solver_->step();
  } catch (const WeakDualityViolation&) {
    throw;
  } catch (const Error& e) {
    row.note += std::string(row.note.empty() ? "" : "; ") + "lower: " + e.what();
    return;
  }
  const DualCertificate& best = solver_->best();
  if (best.to_json() == ledger_.certificate.to_json() && !ledger_.rows.empty()) return;
  double lo = best.lambda;
  DualCertificate cert = best;
  if (cfg_.rigor == Rigor::heuristic) {
    try {
      InfOptions io;
      io.max_boxes = cfg_.max_boxes;
      lo = certified_inf(g_, best, cfg_.inner_tol, io).lo;
      cert.lambda = lo;
      cert.rigor = Rigor::certified;
    } catch (const Error& e) {
      row.note += std::string(row.note.empty() ? "" : "; ") + "certify: " + e.what();
      lo = -kInf;
    }
  }
  if (lo > lower_ || ledger_.rows.empty()) {
    if (lo > lower_) lower_ = lo;
    ledger_.certificate = cert;
    update_heuristic();
  }
}

void Driver::consider(const PrimalWitness& w) {
  if (!std::isfinite(w.upper())) return;
  const auto& cur = ledger_.witness;
  if (!cur || w.upper() < cur->upper() || (w.upper() == cur->upper() && witness_less(w, *cur))) ledger_.witness = w;
}

void Driver::upper_phase(HistoryRow& row) {
  if (evaluated_ >= cfg_.budget_witness) return;
  std::size_t n = std::min(cfg_.tranche, cfg_.budget_witness - evaluated_);
  std::vector<PrimalWitness> got;

  for (auto& p : harvest_seeds(solver_->pool(), solver_->minimizers())) {
    bool known = std::find(harvested_.begin(), harvested_.end(), p) != harvested_.end() ||
                 std::find(cfg_.seeds.begin(), cfg_.seeds.end(), p) != cfg_.seeds.end();
    if (!known) harvested_.push_back(std::move(p));
  }
  std::size_t used = 0;
  while (used < n && harvested_pairs_ / 2 + 1 < harvested_.size()) {
    std::size_t i = harvested_pairs_ / 2;
    bool flip = harvested_pairs_ % 2 == 1;
    ++harvested_pairs_;
    const IntPoly& P = flip ? harvested_[i + 1] : harvested_[i];
    const IntPoly& Q = flip ? harvested_[i] : harvested_[i + 1];
    if (P.degree() * (Q.degree() + 1) > cfg_.max_fiber_degree) continue;
    ++used;
    try {
      got.push_back(eval_witness(g_, MuPQ(P, Q), cfg_.coarse_tol, Provenance::seeded));
    } catch (const WeakDualityViolation&) {
      throw;
    } catch (const Error&) {
    }
  }
  std::uint64_t before = stream_->drawn();
  auto more = evaluate_candidates(g_, search_config(), *stream_, n - used);
  used += static_cast<std::size_t>(stream_->drawn() - before);
  for (auto& w : more) got.push_back(std::move(w));
  evaluated_ += used;
  if (used == 0) row.note += std::string(row.note.empty() ? "" : "; ") + "upper: candidates exhausted";

  std::sort(got.begin(), got.end(), witness_less);
  std::size_t top = (got.size() + 9) / 10;
  for (std::size_t i = 0; i < top; ++i) {
    try {
      auto r = eval_witness(g_, got[i].measure, cfg_.witness_tol, got[i].provenance);
      if (std::isfinite(r.value)) got[i] = std::move(r);
    } catch (const WeakDualityViolation&) {
      throw;
    } catch (const Error&) {
    }
  }
  for (const auto& w : got) consider(w);
}

bool Driver::step() {
  if (halted()) return false;
  HistoryRow row;
  row.iter = static_cast<int>(ledger_.rows.size()) + 1;
  int rounds_before = solver_->rounds();
  std::size_t evaluated_before = evaluated_;
  lower_phase(row);
  upper_phase(row);

  row.lower = lower_;
  row.upper = ledger_.witness ? ledger_.witness->upper() : kInf;
  row.gap = row.upper - row.lower;
  row.heuristic_lower = heuristic_;
  row.lp_rounds = solver_->rounds();
  row.witnesses = evaluated_;
  row.wall_s = wall_offset_ + std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  ledger_.rows.push_back(row);
  ledger_.check_invariants();

  bool idle = solver_->rounds() == rounds_before && evaluated_ == evaluated_before;
  if (row.gap <= cfg_.eps) ledger_.halt = HaltReason::eps;
  else if (solver_->rounds() >= cfg_.budget_lp || evaluated_ >= cfg_.budget_witness || row.wall_s >= cfg_.budget_wall_s ||
           idle)
    ledger_.halt = HaltReason::budget;
  return !halted();
}

const BoundsLedger& Driver::run() {
  while (step()) {
  }
  return ledger_;
}

std::string Driver::checkpoint_json() const {
  json j;
  j["format"] = "essmin-checkpoint-1";
  j["green"] = ledger_.green;
  j["hash"] = ledger_.hash;
  j["config"] = detail::parse_json(cfg_.to_json());
  j["seed"] = ledger_.seed;
  j["halt"] = to_string(ledger_.halt);
  j["lower_rigorous"] = ledger_.lower_rigorous;
  j["certificate"] = detail::parse_json(ledger_.certificate.to_json());
  j["witness"] = ledger_.witness ? detail::parse_json(ledger_.witness->to_json()) : json(nullptr);
  j["rows"] = json::array();
  for (const auto& r : ledger_.rows) j["rows"].push_back(row_json(r));
  j["exchange"] = detail::parse_json(solver_->state_json());
  j["stream_drawn"] = stream_->drawn();
  j["harvested"] = polys_json(harvested_);
  j["harvested_pairs"] = harvested_pairs_;
  j["evaluated"] = evaluated_;
  j["lower"] = num(lower_);
  j["heuristic"] = num(heuristic_);
  return j.dump(1);
}

void Driver::checkpoint(const std::string& path) const { write_atomic(path, checkpoint_json()); }

Driver Driver::from_checkpoint_json(std::string_view text, const std::string& green) {
  json j;
  try {
    j = detail::parse_json(text);
  } catch (const ParseError& e) {
    throw CorruptCheckpoint(e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "essmin-checkpoint-1") throw CorruptCheckpoint("unknown checkpoint format");
    RunConfig cfg = RunConfig::from_json(j.at("config").dump());
    std::string selector = green.empty() ? cfg.green : green;
    GreenFunction g = resolve_green(selector);
    std::string saved = j.at("hash").get<std::string>();
    if (spec_hash(g) != saved)
      throw HashMismatch("green function '" + selector + "' hashes to " + spec_hash(g) + ", checkpoint has " + saved);
    Driver d(cfg, g);
    d.ledger_.halt = halt_from_string(j.at("halt").get<std::string>());
    d.ledger_.lower_rigorous = j.at("lower_rigorous").get<bool>();
    d.ledger_.certificate = DualCertificate::from_json(j.at("certificate").dump());
    if (!j.at("witness").is_null()) d.ledger_.witness = PrimalWitness::from_json(j.at("witness").dump());
    for (const auto& r : j.at("rows")) d.ledger_.rows.push_back(row_of(r));
    d.ledger_.seed = j.at("seed").get<std::uint64_t>();
    d.solver_->load_state(j.at("exchange").dump());
    d.stream_->skip(j.at("stream_drawn").get<std::uint64_t>());
    if (d.stream_->drawn() != j.at("stream_drawn").get<std::uint64_t>()) throw CorruptCheckpoint("candidate stream too short");
    d.harvested_ = polys_of(j.at("harvested"));
    d.harvested_pairs_ = j.at("harvested_pairs").get<std::size_t>();
    d.evaluated_ = j.at("evaluated").get<std::size_t>();
    d.lower_ = num_of(j.at("lower"));
    d.heuristic_ = num_of(j.at("heuristic"));
    d.wall_offset_ = d.ledger_.rows.empty() ? 0.0 : d.ledger_.rows.back().wall_s;
    d.ledger_.check_invariants();
    return d;
  } catch (const json::exception& e) {
    throw CorruptCheckpoint(e.what());
  } catch (const ParseError& e) {
    throw CorruptCheckpoint(e.what());
  } catch (const ConfigInvalid& e) {
    throw CorruptCheckpoint(e.what());
  } catch (const WeakDualityViolation& e) {
    throw CorruptCheckpoint(e.what());
  }
}

Driver Driver::resume(const std::string& path, const std::string& green) {
  return from_checkpoint_json(read_file(path), green);
}

BoundsLedger run(const RunConfig& cfg) {
  Driver d(cfg);
  std::string ckpt;
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    ckpt = (std::filesystem::path(cfg.out_dir) / "checkpoint.json").string();
  }
  while (d.step()) {
    if (!ckpt.empty()) d.checkpoint(ckpt);
  }
  if (!ckpt.empty()) d.checkpoint(ckpt);
  return d.ledger();
}

std::string report_json(const BoundsLedger& l) {
  if (l.rows.empty()) throw InvalidArgument("ledger is empty");
  json j;
  j["green"] = l.green;
  j["spec_hash"] = l.hash;
  j["halt"] = to_string(l.halt);
  j["iterations"] = l.rows.size();
  j["lower"] = num(l.lower());
  j["upper"] = num(l.upper());
  j["gap"] = num(l.gap());
  j["heuristic_lower"] = num(l.rows.back().heuristic_lower);
  j["lower_rigorous"] = l.lower_rigorous;
  j["certificate"] = detail::parse_json(l.certificate.to_json());
  j["witness"] = l.witness ? detail::parse_json(l.witness->to_json()) : json(nullptr);
  j["history"] = json::array();
  for (const auto& r : l.rows) j["history"].push_back(row_json(r));
  j["config"] = detail::parse_json(l.config.to_json());
  j["seed"] = l.seed;
  if (l.green == "faltings") {
    j["ess_Ht_F_lower"] = num(l.lower() / 12.0);
    j["ess_Ht_F_upper"] = num(l.upper() / 12.0);
    j["ess_Ht_F_heuristic_lower"] = num(l.rows.back().heuristic_lower / 12.0);
  }
  return j.dump(2);
}

std::string history_csv(const BoundsLedger& l) {
  std::ostringstream out;
  out << "iter,wall_s,lower,upper,gap,heuristic_lower\n";
  char buf[256];
  for (const auto& r : l.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.wall_s, r.lower, r.upper, r.gap,
                  r.heuristic_lower);
    out << buf;
  }
  return out.str();
}

std::string convergence_svg(const BoundsLedger& l) {
  const double W = 640, H = 400, M = 50;
  double lo = kInf, hi = -kInf;
  for (const auto& r : l.rows) {
    for (double v : {r.lower, r.upper}) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) lo = hi = 0.0;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  double n = std::max<double>(1.0, static_cast<double>(l.rows.size()));
  auto X = [&](double i) { return M + (W - 2 * M) * i / n; };
  auto Y = [&](double v) { return H - M - (H - 2 * M) * (v - lo) / (hi - lo); };
  auto curve = [&](bool upper) {
    std::ostringstream p;
    bool open = false;
    for (std::size_t i = 0; i < l.rows.size(); ++i) {
      double v = upper ? l.rows[i].upper : l.rows[i].lower;
      if (!std::isfinite(v)) continue;
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f %.2f,%.2f", open ? " " : "", X(static_cast<double>(i)), Y(v),
                    X(static_cast<double>(i) + 1), Y(v));
      p << buf;
      open = true;
    }
    return p.str();
  };
  std::ostringstream s;
  char buf[256];
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<path d=\"M%.0f %.0f V%.0f H%.0f\" stroke=\"black\" fill=\"none\"/>\n", M, M, H - M, W - M);
  s << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\">%.6g</text>\n", 4.0, Y(hi - pad) + 4,
                hi - pad);
  s << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\">%.6g</text>\n", 4.0, Y(lo + pad) + 4,
                lo + pad);
  s << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\">iteration (%zu)</text>\n", W / 2 - 40,
                H - 15, l.rows.size());
  s << buf;
  s << "<polyline points=\"" << curve(false) << "\" stroke=\"#1f5fbf\" fill=\"none\" stroke-width=\"2\"/>\n";
  s << "<polyline points=\"" << curve(true) << "\" stroke=\"#bf3a1f\" fill=\"none\" stroke-width=\"2\"/>\n";
  s << "<text x=\"" << W - 150 << "\" y=\"30\" font-size=\"12\" fill=\"#bf3a1f\">upper</text>\n";
  s << "<text x=\"" << W - 100 << "\" y=\"30\" font-size=\"12\" fill=\"#1f5fbf\">lower</text>\n";
  s << "<text x=\"" << M << "\" y=\"30\" font-size=\"14\">" << l.green << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

void write_report(const BoundsLedger& l, const std::string& dir, bool svg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IOError("cannot create " + dir + ": " + ec.message());
  write_atomic((fs::path(dir) / "report.json").string(), report_json(l));
  write_atomic((fs::path(dir) / "history.csv").string(), history_csv(l));
  if (svg) write_atomic((fs::path(dir) / "convergence.svg").string(), convergence_svg(l));
}

}  // namespace essmin
