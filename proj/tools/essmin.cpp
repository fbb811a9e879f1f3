#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "essmin/driver.hpp"
#include "essmin/errors.hpp"
#include "essmin/measures.hpp"
#include "essmin/modular.hpp"
#include "essmin/upperbound.hpp"

using namespace essmin;

namespace {

std::string read_text(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;
  std::ifstream in(arg);
  if (!in) throw IOError("cannot read " + arg);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int exit_code(const BoundsLedger& l) { return l.halt == HaltReason::eps ? 0 : 2; }

void print_summary(const BoundsLedger& l) {
  std::printf("%s: lower %.10g  upper %.10g  gap %.3g  (%zu iterations, halt: %s)\n", l.green.c_str(), l.lower(),
              l.upper(), l.gap(), l.rows.size(), to_string(l.halt).c_str());
  if (l.green == "faltings") std::printf("ess(Ht_F) in [%.10g, %.10g]\n", l.lower() / 12, l.upper() / 12);
  if (l.witness) std::printf("witness: %s\n", l.witness->measure.describe().c_str());
}

int cmd_bound(RunConfig cfg, const std::string& resume, bool svg, bool quiet) {
  namespace fs = std::filesystem;
  std::optional<Driver> d;
  if (!resume.empty()) d.emplace(Driver::resume(resume, cfg.green));
  else d.emplace(cfg);
  std::string out = resume.empty() ? cfg.out_dir : d->ledger().config.out_dir;
  if (out.empty()) out = cfg.out_dir;
  if (!out.empty()) fs::create_directories(out);
  std::string ckpt = out.empty() ? std::string() : (fs::path(out) / "checkpoint.json").string();
  while (!d->halted()) {
    d->step();
    if (!quiet) {
      const auto& r = d->ledger().rows.back();
      std::fprintf(stderr, "iter %d  %.1fs  lower %.10g  upper %.10g  gap %.3g%s%s\n", r.iter, r.wall_s, r.lower,
                   r.upper, r.gap, r.note.empty() ? "" : "  ", r.note.c_str());
    }
    if (!ckpt.empty()) d->checkpoint(ckpt);
  }
  if (!out.empty()) write_report(d->ledger(), out, svg);
  print_summary(d->ledger());
  return exit_code(d->ledger());
}

int cmd_eval(const std::string& green, const std::string& measure, double tol) {
  GreenFunction g = resolve_green(green);
  std::string text = read_text(measure);
  Measure m = measure_from_json(text);
  std::string out;
  if (auto* q = std::get_if<MuPQ>(&m)) {
    out = eval_witness(g, *q, tol).to_json();
  } else if (auto* r = std::get_if<RationalPullbackMeasure>(&m);
             r && r->kind() == RationalPullbackMeasure::Kind::lemniscate && r->first().is_monic()) {
    out = eval_witness(g, *r, tol, Provenance::cap1).to_json();
  } else {
    auto res = integrate(m, [&g](cplx z) { return g.eval(z); }, tol);
    char buf[160];
    std::snprintf(buf, sizeof buf, "{\"value\":%.17g,\"err\":%.17g,\"converged\":%s}", res.value, res.error,
                  res.converged ? "true" : "false");
    out = buf;
  }
  std::printf("%s\n", out.c_str());
  return 0;
}

struct Check {
  std::string name;
  std::function<bool()> run;
};

int run_checks(const std::vector<Check>& checks) {
  int failed = 0;
  for (const auto& c : checks) {
    bool ok = false;
    std::string why;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      why = std::string(" (") + e.what() + ")";
    }
    std::printf("%s %s%s\n", ok ? "PASS" : "FAIL", c.name.c_str(), why.c_str());
    failed += !ok;
  }
  return failed == 0 ? 0 : 1;
}

int cmd_verify(const std::string& suite) {
  const double ln2 = std::numbers::ln2;
  auto g_int = [](const char* green, const RationalPullbackMeasure& m, double tol) {
    auto g = builtin(green);
    return integrate_pullback(m, [&g](cplx z) { return g.eval(z); }, tol);
  };
  std::vector<Check> checks;
  if (suite == "properties") {
    checks.push_back({"jensen", [] {
                        auto r = integrate_circle(CircleMeasure{1.0}, [](cplx z) { return std::log(std::abs(z - 2.0)); },
                                                  1e-12);
                        return std::abs(r.value - std::numbers::ln2) < 1e-10;
                      }});
    checks.push_back({"capacity_one_lemniscate", [] {
                        auto e = energy(RationalPullbackMeasure::lemniscate(IntPoly::parse("x^3-x+1")), 1e-10);
                        return std::abs(e.value) < 1e-8;
                      }});
    checks.push_back({"smith_margin", [] {
                        MuPQ m(IntPoly::parse("x^2-x-1"), IntPoly::parse("x+1"));
                        for (const char* f : {"x", "x-2", "2*x+1", "x^2+x+1", "3*x^2-1"}) {
                          auto s = smith_check(m, IntPoly::parse(f));
                          if (s.margin < -1e-8 || s.margin < s.floor - 1e-8) return false;
                        }
                        return true;
                      }});
    checks.push_back({"sweeten_mass", [] {
                        DiscreteMeasure d;
                        d.atoms = {{cplx(0.5, 0.0), 0.25}, {cplx(3.0, 1.0), 0.5}, {cplx(-40.0, 2.0), 0.25}};
                        return sweeten(d, 8.0).mass() == 1.0;
                      }});
    checks.push_back({"weak_duality_zhang_zagier", [] {
                        RunConfig c;
                        c.green = "zhang_zagier";
                        c.eps = 1e-9;
                        c.budget_lp = 3;
                        c.budget_witness = 128;
                        auto l = run(c);
                        l.check_invariants();
                        return l.lower() <= l.upper() + kDualitySlack;
                      }});
  } else if (suite == "golden") {
    checks.push_back({"weil_cap1_x", [] { return std::abs(cap1_bound(builtin("weil"), IntPoly::parse("x"), 1e-12).value) < 1e-10; }});
    checks.push_back({"weil_cap1_x2_minus_2", [ln2] {
                        return std::abs(cap1_bound(builtin("weil"), IntPoly::parse("x^2-2"), 1e-10).value - ln2 / 2) < 1e-7;
                      }});
    checks.push_back({"hultberg_pullback_circle", [&g_int, ln2] {
                        auto r = g_int("hultberg", RationalPullbackMeasure::pullback(IntPoly::parse("2*x+1"), IntPoly::parse("x")), 1e-9);
                        return std::abs(r.value + ln2) < 1e-6;
                      }});
    checks.push_back({"hultberg_mu_x_x1", [ln2] {
                        return eval_witness(builtin("hultberg"), MuPQ(IntPoly::parse("x"), IntPoly::parse("x+1")), 1e-6).upper() <=
                               ln2 - 0.05;
                      }});
    checks.push_back({"inverse_j_1728", [] { return std::abs(inverse_j(1728.0).tau - cplx(0.0, 1.0)) < 1e-10; }});
    checks.push_back({"zhang_zagier_bracket", [] {
                        RunConfig c;
                        c.green = "zhang_zagier";
                        c.eps = 0.5;
                        auto l = run(c);
                        return l.lower() <= 0.127228 && l.upper() >= 0.124110;
                      }});
  } else {
    throw InvalidArgument("unknown suite '" + suite + "' (expected properties or golden)");
  }
  return run_checks(checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified two-sided bounds on the essential minimum of Arakelov heights"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string rigor = "certified", resume, config_file;
  bool no_svg = false, quiet = false;
  auto* bound = app.add_subcommand("bound", "Run the alternating lower/upper bound loop");
  bound->add_option("--green", cfg.green, "Builtin name, composite JSON text, or composite JSON file");
  bound->add_option("--config", config_file, "RunConfig JSON file; command line flags override it");
  bound->add_option("--eps", cfg.eps, "Target gap");
  bound->add_option("--budget-lp", cfg.budget_lp, "Exchange rounds");
  bound->add_option("--budget-witness", cfg.budget_witness, "Witness evaluations");
  bound->add_option("--budget-wall", cfg.budget_wall_s, "Wall-clock seconds");
  bound->add_option("--tranche", cfg.tranche, "Witness evaluations per iteration");
  bound->add_option("--inner-tol", cfg.inner_tol, "Tolerance of the inner minimization");
  bound->add_option("--witness-tol", cfg.witness_tol, "Quadrature tolerance for refined witnesses");
  bound->add_option("--rigor", rigor, "certified or heuristic")->check(CLI::IsMember({"certified", "heuristic"}));
  bound->add_option("--out", cfg.out_dir, "Output directory for report, history and checkpoint");
  bound->add_option("--resume", resume, "Checkpoint to resume from");
  bound->add_option("--seed", cfg.seed, "Recorded run seed");
  bound->add_flag("--no-svg", no_svg, "Skip convergence.svg");
  bound->add_flag("--quiet", quiet, "No per-iteration progress");

  std::string green = "weil", measure;
  double tol = 1e-8;
  auto* eval = app.add_subcommand("eval", "Integrate g against a measure");
  eval->add_option("--green", green, "Builtin name, composite JSON text, or composite JSON file")->required();
  eval->add_option("--measure", measure, "Measure JSON file or inline JSON")->required();
  eval->add_option("--tol", tol, "Quadrature tolerance");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a built-in check suite");
  verify->add_option("--suite", suite, "properties or golden")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*bound) {
      if (!config_file.empty()) {
        RunConfig file = RunConfig::from_json(read_text(config_file));
        // flags given explicitly win over the file
        auto given = [&](const char* flag) { return bound->count(flag) > 0; };
        if (!given("--green")) cfg.green = file.green;
        if (!given("--eps")) cfg.eps = file.eps;
        if (!given("--budget-lp")) cfg.budget_lp = file.budget_lp;
        if (!given("--budget-witness")) cfg.budget_witness = file.budget_witness;
        if (!given("--budget-wall")) cfg.budget_wall_s = file.budget_wall_s;
        if (!given("--tranche")) cfg.tranche = file.tranche;
        if (!given("--inner-tol")) cfg.inner_tol = file.inner_tol;
        if (!given("--witness-tol")) cfg.witness_tol = file.witness_tol;
        if (!given("--rigor")) rigor = essmin::to_string(file.rigor);
        if (!given("--out")) cfg.out_dir = file.out_dir;
        if (!given("--seed")) cfg.seed = file.seed;
        cfg.max_boxes = file.max_boxes;
        cfg.coarse_tol = file.coarse_tol;
        cfg.max_degree = file.max_degree;
        cfg.max_height = file.max_height;
        cfg.max_fiber_degree = file.max_fiber_degree;
        cfg.pool = file.pool;
        cfg.seeds = file.seeds;
      }
      cfg.rigor = rigor_from_string(rigor);
      if (resume.empty()) cfg.validate();
      if (!resume.empty() && !bound->count("--green")) cfg.green.clear();
      return cmd_bound(cfg, resume, !no_svg, quiet);
    }
    if (*eval) return cmd_eval(green, measure, tol);
    if (*verify) return cmd_verify(suite);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
