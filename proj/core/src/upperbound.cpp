#include "essmin/upperbound.hpp"

#include <algorithm>
#include <cmath>

#include "essmin/errors.hpp"
#include "essmin/lowerbound.hpp"
#include "json_util.hpp"

namespace essmin {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::enumerated:
      return "enumerated";
    case Provenance::seeded:
      return "seeded";
    case Provenance::cap1:
      return "cap1";
  }
  return "enumerated";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "enumerated") return Provenance::enumerated;
  if (s == "seeded") return Provenance::seeded;
  if (s == "cap1") return Provenance::cap1;
  throw ParseError("unknown provenance '" + std::string(s) + "'");
}

int PrimalWitness::total_degree() const {
  switch (measure.kind()) {
    case RationalPullbackMeasure::Kind::mu_pq:
      return measure.first().degree() + measure.second().degree();
    case RationalPullbackMeasure::Kind::lemniscate:
      return measure.first().degree();
    case RationalPullbackMeasure::Kind::pullback:
      break;
  }
  return std::max(measure.first().degree(), measure.second().degree());
}

namespace {

detail::json num_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double num_from_json(const detail::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw ParseError("expected a number");
  return j.get<double>();
}

Measure as_measure(const RationalPullbackMeasure& m) {
  if (m.kind() == RationalPullbackMeasure::Kind::mu_pq) return MuPQ(m.first(), m.second());
  return m;
}

}  // namespace

std::string PrimalWitness::to_json() const {
  detail::json j;
  j["measure"] = detail::parse_json(measure_to_json(as_measure(measure)));
  j["value"] = num_json(value);
  j["err"] = num_json(err);
  j["provenance"] = to_string(provenance);
  j["converged"] = converged;
  return j.dump();
}

PrimalWitness PrimalWitness::from_json(std::string_view text) {
  auto j = detail::parse_json(text);
  try {
    Measure m = measure_from_json(j.at("measure").dump());
    std::optional<RationalPullbackMeasure> rp;
    if (auto* q = std::get_if<MuPQ>(&m)) rp = q->measure();
    else if (auto* r = std::get_if<RationalPullbackMeasure>(&m)) rp = *r;
    else throw ParseError("witness measure must be mu_pq or lemniscate");
    PrimalWitness w{*rp};
    w.value = num_from_json(j.at("value"));
    w.err = num_from_json(j.at("err"));
    w.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    w.converged = j.value("converged", true);
    return w;
  } catch (const detail::json::exception& e) {
    throw ParseError(e.what());
  }
}

PrimalWitness eval_witness(const GreenFunction& g, const RationalPullbackMeasure& m, double tol, Provenance p) {
  if (m.kind() == RationalPullbackMeasure::Kind::pullback) throw InvalidArgument("witness must be mu_pq or lemniscate");
  if (m.kind() == RationalPullbackMeasure::Kind::lemniscate && !m.first().is_monic())
    throw InvalidArgument("lemniscate witness needs a monic polynomial");
  auto q = integrate_pullback(m, [&g](cplx z) { return g.eval(z); }, tol);
  PrimalWitness w{m};
  w.value = q.value;
  w.err = q.error;
  w.provenance = p;
  w.converged = q.converged;
  return w;
}

PrimalWitness eval_witness(const GreenFunction& g, const MuPQ& m, double tol, Provenance p) {
  return eval_witness(g, m.measure(), tol, p);
}

PrimalWitness cap1_bound(const GreenFunction& g, const IntPoly& P, double tol) {
  if (!P.is_monic()) throw InvalidArgument("cap1 polynomial must be monic");
  return eval_witness(g, RationalPullbackMeasure::lemniscate(P), tol, Provenance::cap1);
}

MonicStream::MonicStream(int max_degree, int max_height) : max_degree_(max_degree), max_height_(max_height) {
  if (max_degree < 1 || max_height < 1) throw InvalidArgument("enumeration caps must be positive");
}

std::optional<IntPoly> MonicStream::at(std::size_t k) {
  while (items_.size() <= k && !done_) {
    if (!extend()) done_ = true;
  }
  if (k < items_.size()) return items_[k];
  return std::nullopt;
}

bool MonicStream::extend() {
  ++size_;
  if (size_ > max_degree_ + max_height_) return false;
  for (int d = 1; d <= max_degree_; ++d) {
    int h = size_ - d;
    if (h < 1 || h > max_height_) continue;
    std::vector<long> t(static_cast<std::size_t>(d), -h);
    for (;;) {
      long top = 0;
      for (long v : t) top = std::max(top, std::labs(v));
      if (top == h || (h == 1 && top <= 1)) {
        std::vector<mpz_class> c(static_cast<std::size_t>(d) + 1);
        c[static_cast<std::size_t>(d)] = 1;
        for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(d - 1 - i)] = t[static_cast<std::size_t>(i)];
        IntPoly p(std::move(c));
        if (p.is_irreducible()) items_.push_back(std::move(p));
      }
      int i = d - 1;
      while (i >= 0 && t[static_cast<std::size_t>(i)] == h) t[static_cast<std::size_t>(i--)] = -h;
      if (i < 0) break;
      ++t[static_cast<std::size_t>(i)];
    }
  }
  return true;
}

CandidateStream::CandidateStream(const SearchConfig& cfg) : cfg_(cfg), monic_(cfg.max_degree, cfg.max_height) {
  std::vector<IntPoly> seeds;
  for (const auto& s : cfg_.seeds) {
    if (s.degree() >= 1 && s.is_monic() && s.is_irreducible(16)) seeds.push_back(s);
  }
  cfg_.seeds = std::move(seeds);
}

std::optional<CandidateStream::Candidate> CandidateStream::next_cap1() {
  if (!cfg_.use_cap1) return std::nullopt;
  auto p = monic_.at(cap1_i_);
  if (!p) return std::nullopt;
  ++cap1_i_;
  return Candidate{Provenance::cap1, *p, IntPoly{}};
}

std::optional<CandidateStream::Candidate> CandidateStream::next_seeded() {
  if (!cfg_.use_seeded) return std::nullopt;
  const auto& s = cfg_.seeds;
  while (seed_i_ / 2 + 1 < s.size()) {
    std::size_t i = seed_i_ / 2;
    bool flip = seed_i_ % 2 == 1;
    ++seed_i_;
    const IntPoly& P = flip ? s[i + 1] : s[i];
    const IntPoly& Q = flip ? s[i] : s[i + 1];
    if (P == Q || P.degree() * (Q.degree() + 1) > cfg_.max_fiber_degree) continue;
    return Candidate{Provenance::seeded, P, Q};
  }
  return std::nullopt;
}

std::optional<CandidateStream::Candidate> CandidateStream::next_enumerated() {
  if (!cfg_.use_enumerated) return std::nullopt;
  for (;;) {
    auto pn = monic_.at(pair_n_);
    if (!pn) return std::nullopt;
    if (pair_i_ >= pair_n_) {
      ++pair_n_;
      pair_i_ = 0;
      pair_flip_ = false;
      continue;
    }
    IntPoly pi = *monic_.at(pair_i_);
    bool flip = pair_flip_;
    if (pair_flip_) ++pair_i_;
    pair_flip_ = !pair_flip_;
    const IntPoly& P = flip ? *pn : pi;
    const IntPoly& Q = flip ? pi : *pn;
    if (P.degree() * (Q.degree() + 1) > cfg_.max_fiber_degree) continue;
    return Candidate{Provenance::enumerated, P, Q};
  }
}

std::optional<CandidateStream::Candidate> CandidateStream::next() {
  for (int tries = 0; tries < 3; ++tries) {
    int t = turn_;
    turn_ = (turn_ + 1) % 3;
    std::optional<Candidate> c;
    if (t == 0) c = next_cap1();
    else if (t == 1) c = next_seeded();
    else c = next_enumerated();
    if (c) {
      ++drawn_;
      return c;
    }
  }
  return std::nullopt;
}

void CandidateStream::skip(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!next()) break;
  }
}

bool witness_less(const PrimalWitness& a, const PrimalWitness& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
  return a.measure.describe() < b.measure.describe();
}

namespace {

std::optional<PrimalWitness> try_eval(const GreenFunction& g, const RationalPullbackMeasure& m, double tol,
                                      Provenance p) {
  try {
    auto w = eval_witness(g, m, tol, p);
    if (!std::isfinite(w.value)) return std::nullopt;
    return w;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<PrimalWitness> evaluate_candidates(const GreenFunction& g, const SearchConfig& cfg, CandidateStream& stream,
                                               std::size_t count, std::size_t* failed) {
  std::vector<PrimalWitness> out;
  for (std::size_t k = 0; k < count; ++k) {
    auto c = stream.next();
    if (!c) break;
    std::optional<PrimalWitness> w;
    try {
      auto m = c->provenance == Provenance::cap1 ? RationalPullbackMeasure::lemniscate(c->P)
                                                 : MuPQ(c->P, c->Q).measure();
      w = try_eval(g, m, cfg.coarse_tol, c->provenance);
    } catch (const InvalidArgument&) {
    }
    if (w) out.push_back(std::move(*w));
    else if (failed) ++*failed;
  }
  return out;
}

SearchResult search(const GreenFunction& g, const SearchConfig& cfg, std::size_t budget) {
  SearchResult res{PrimalWitness{RationalPullbackMeasure::lemniscate(IntPoly{0, 1})}, {}, 0, 0};
  CandidateStream stream(cfg);
  res.ranked = evaluate_candidates(g, cfg, stream, budget, &res.failed);
  res.evaluated = stream.drawn();
  std::sort(res.ranked.begin(), res.ranked.end(), witness_less);
  std::size_t top = (res.ranked.size() + 9) / 10;
  for (std::size_t i = 0; i < top; ++i) {
    auto& w = res.ranked[i];
    if (auto r = try_eval(g, w.measure, cfg.refine_tol, w.provenance)) w = std::move(*r);
  }
  std::sort(res.ranked.begin(), res.ranked.end(), witness_less);
  if (!res.ranked.empty()) res.best = res.ranked.front();
  return res;
}

std::vector<IntPoly> harvest_seeds(const std::vector<IntPoly>& pool, const std::vector<cplx>& minimizers, int max_degree,
                                   int max_height) {
  std::vector<IntPoly> cand;
  for (const auto& p : pool) cand.push_back(p);
  for (const auto& z : minimizers) {
    for (auto& p : recognize_algebraic(z, max_degree, max_height)) cand.push_back(std::move(p));
  }
  std::vector<IntPoly> out;
  for (auto& p : cand) {
    if (p.degree() < 1 || !p.is_monic() || !p.is_irreducible(16)) continue;
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(), enumeration_less);
  return out;
}

}  // namespace essmin
