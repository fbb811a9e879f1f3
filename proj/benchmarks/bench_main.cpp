#include <benchmark/benchmark.h>

#include "essmin/greens.hpp"
#include "essmin/lowerbound.hpp"
#include "essmin/measures.hpp"
#include "essmin/roots.hpp"
#include "essmin/upperbound.hpp"

using namespace essmin;

namespace {

void BM_AllRootsCyclotomic(benchmark::State& state) {
  IntPoly p = cyclotomic(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(all_roots(p));
  state.SetLabel("degree " + std::to_string(p.degree()));
}
BENCHMARK(BM_AllRootsCyclotomic)->Arg(13)->Arg(31)->Arg(61)->Arg(127);

void BM_FiberSolveCold(benchmark::State& state) {
  MuPQ m(cyclotomic(7), cyclotomic(static_cast<unsigned>(state.range(0))));
  const auto& fam = m.measure().family();
  cplx y = std::polar(1.0, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(fam.solve(y));
  state.SetLabel("fiber degree " + std::to_string(fam.degree()));
}
BENCHMARK(BM_FiberSolveCold)->Arg(5)->Arg(11)->Arg(13);

void BM_FiberSolveWarm(benchmark::State& state) {
  MuPQ m(cyclotomic(7), cyclotomic(static_cast<unsigned>(state.range(0))));
  const auto& fam = m.measure().family();
  auto base = fam.solve(std::polar(1.0, 0.3));
  cplx y = std::polar(1.0, 0.3 + 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(fam.solve(y, &base.roots));
  state.SetLabel("fiber degree " + std::to_string(fam.degree()));
}
BENCHMARK(BM_FiberSolveWarm)->Arg(5)->Arg(11)->Arg(13);

void BM_WitnessZhangZagier(benchmark::State& state) {
  auto g = builtin("zhang_zagier");
  MuPQ m(IntPoly::parse("x^2-x+1"), IntPoly::parse("x^3-x^2+1"));
  double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eval_witness(g, m, tol));
}
BENCHMARK(BM_WitnessZhangZagier)->Arg(3)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_LemniscateEnergy(benchmark::State& state) {
  auto m = RationalPullbackMeasure::lemniscate(IntPoly::parse("x^4-2*x^3+2*x^2-x+1"));
  for (auto _ : state) benchmark::DoNotOptimize(energy(m, 1e-8));
}
BENCHMARK(BM_LemniscateEnergy)->Unit(benchmark::kMillisecond);

void BM_CertifiedInfWeil(benchmark::State& state) {
  auto g = builtin("weil");
  DualCertificate c;
  c.terms.push_back({IntPoly::parse("x"), mpq_class(1, 2)});
  for (auto _ : state) benchmark::DoNotOptimize(certified_inf(g, c, 1e-4));
}
BENCHMARK(BM_CertifiedInfWeil)->Unit(benchmark::kMillisecond);

void BM_CandidateSearch(benchmark::State& state) {
  auto g = builtin("zhang_zagier");
  for (auto _ : state) benchmark::DoNotOptimize(search(g, SearchConfig{}, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_CandidateSearch)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
