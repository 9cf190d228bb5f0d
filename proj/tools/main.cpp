// nra: command-line front end for the solver, interpolation, cell
// construction, generalization, model checking and batch runs.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "bench.hpp"
#include "generate.hpp"
#include "nra/cad.hpp"
#include "nra/gen.hpp"
#include "nra/mc.hpp"

namespace fs = std::filesystem;
using namespace nra;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kUnknown = 3 };

/// Bad input that is not a parse error: missing files, bad flag values.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

struct Common {
  double timeout = 0;
  bool stats = false;
  Clock::time_point start = Clock::now();

  [[nodiscard]] SolverLimits limits() const {
    SolverLimits l;
    if (timeout > 0)
      l.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout));
    return l;
  }

  void report(const Statistics& s, std::size_t clauses) const {
    if (!stats) return;
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    std::cout << "; conflicts " << s.conflicts << "\n; decisions " << s.decisions << "\n; propagations "
              << s.propagations << "\n; interpolant-clauses " << clauses << "\n; time-ms " << std::fixed
              << std::setprecision(1) << ms << "\n";
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Variables for --formula style commands, reals in declaration order.
struct Declared {
  VarTable vars;
  std::vector<Var> reals;
};

Declared declare(const std::string& reals, const std::string& bools) {
  Declared d;
  for (auto& n : split_names(reals)) d.reals.push_back(d.vars.declare(n, Sort::Real));
  for (auto& n : split_names(bools)) d.vars.declare(n, Sort::Bool);
  return d;
}

const char* status_name(Status s) { return s == Status::Sat ? "sat" : s == Status::Unsat ? "unsat" : "unknown"; }

ProblemScript load_script(const std::string& path) {
  ProblemScript script = parse_script(read_file(path));
  if (script.commands.empty()) script.commands.push_back(ScriptCommand{});
  return script;
}

// --- subcommands ------------------------------------------------------------

int cmd_solve(const Common& c, const std::string& path, bool extended) {
  ProblemScript script = load_script(path);
  ScriptOptions o;
  o.limits = c.limits();
  o.basic = !extended;
  auto r = run_script(script, std::cout, o);
  c.report(r.stats, r.interpolant_clauses);
  return r.any_unknown ? kUnknown : kOk;
}

int cmd_interpolate(const Common& c, const std::string& path, bool extended) {
  ProblemScript script = parse_script(read_file(path));
  InterpolationOptions io;
  io.limits = c.limits();
  io.basic = !extended;
  auto r = interpolate(script.conjunction(AssertKind::A), script.conjunction(AssertKind::B), io);
  std::cout << status_name(r.status) << "\n";
  if (r.status == Status::Unsat) std::cout << print_term(r.interpolant, script.vars) << "\n";
  if (r.status == Status::Sat) std::cout << print_model(r.model, script.vars) << "\n";
  Statistics s;
  s.checks = r.iterations;
  c.report(s, r.interpolant.size());
  return r.status == Status::Unsat ? kOk : r.status == Status::Sat ? kFailure : kUnknown;
}

int cmd_cell(const Common& c, const std::string& formula, const std::string& model, const std::string& reals,
             const std::string& bools, bool basic) {
  Declared d = declare(reals, bools);
  Formula f = parse_formula(formula, d.vars);
  Assignment m = parse_model(model, d.vars);
  DeadlineScope scope(c.limits().deadline);
  auto polys = formula_polys(f);
  VarOrder order(d.reals);
  auto cell = basic ? cell_basic(polys, m.reals(), order) : cell_extended(polys, m.reals(), order);
  std::cout << print_term(cell.to_formula(), d.vars) << "\n";
  c.report({}, 0);
  return kOk;
}

int cmd_generalize(const Common& c, const std::string& formula, const std::string& model, const std::string& keep,
                   const std::string& reals, const std::string& bools) {
  Declared d = declare(reals, bools);
  Formula f = parse_formula(formula, d.vars);
  Assignment m = parse_model(model, d.vars);
  std::set<Var> kept;
  for (auto& n : split_names(keep)) {
    auto v = d.vars.lookup(n);
    if (!v) throw UsageError("--keep names undeclared variable " + n);
    kept.insert(*v);
  }
  DeadlineScope scope(c.limits().deadline);
  Formula g = generalize(f, m, kept, VarOrder(d.reals));
  std::cout << print_term(g, d.vars) << "\n";
  c.report({}, 0);
  return kOk;
}

Engine engine_of(const std::string& name) {
  if (name == "bmc") return Engine::Bmc;
  if (name == "kind") return Engine::KInduction;
  return Engine::Itp;
}

int cmd_mc(const Common& c, const std::string& path, const std::string& engine, unsigned max_k, bool show_inv) {
  TransitionSystem sys = parse_system(read_file(path));
  MCOptions o;
  o.engine = engine_of(engine);
  o.max_k = max_k;
  o.limits = c.limits();
  auto r = check(sys, o);
  std::cout << verdict_name(r.verdict) << "\n";
  if (r.verdict == Verdict::Invalid) std::cout << print_trace(sys, r.trace);
  if (r.verdict == Verdict::Valid && show_inv) std::cout << print_term(r.invariant, sys.vars) << "\n";
  c.report(r.stats, r.interpolant_clauses);
  return r.verdict == Verdict::Valid ? kOk : r.verdict == Verdict::Invalid ? kFailure : kUnknown;
}

struct BenchFlags {
  std::string dir;
  std::string engine = "itp";
  unsigned max_k = 10;
  unsigned jobs = 1;
  unsigned random = 0;
  std::uint64_t seed = 1;
};

tools::BenchOutcome bench_script(const std::string& text, const SolverLimits& limits) {
  ProblemScript script = parse_script(text);
  if (script.commands.empty()) script.commands.push_back(ScriptCommand{});
  ScriptOptions o;
  o.limits = limits;
  std::ostringstream out;
  auto r = run_script(script, out, o);
  // Verdict column: the answers, joined by ';'.
  std::string verdict;
  std::istringstream lines(out.str());
  for (std::string line; std::getline(lines, line);)
    if (line == "sat" || line == "unsat" || line == "unknown") verdict += (verdict.empty() ? "" : ";") + line;
  return {verdict.empty() ? "none" : verdict, r.stats.conflicts, r.stats.decisions, r.interpolant_clauses};
}

int cmd_bench(const Common& c, const BenchFlags& b) {
  std::vector<tools::BenchJob> jobs;
  double timeout = c.timeout;
  auto limits = [timeout] {
    Common local;
    local.timeout = timeout;
    return local.limits();
  };
  if (!b.dir.empty()) {
    if (!fs::is_directory(b.dir)) throw UsageError("not a directory: " + b.dir);
    std::vector<fs::path> files;
    for (auto& e : fs::directory_iterator(b.dir))
      if (e.is_regular_file() && (e.path().extension() == ".nlts" || e.path().extension() == ".nlsmt"))
        files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (auto& p : files) {
      std::string path = p.string();
      if (p.extension() == ".nlts") {
        MCOptions o;
        o.engine = engine_of(b.engine);
        o.max_k = b.max_k;
        jobs.push_back({p.filename().string(), "mc-" + b.engine, [path, o, limits]() mutable {
                          TransitionSystem sys = parse_system(read_file(path));
                          o.limits = limits();
                          auto r = check(sys, o);
                          return tools::BenchOutcome{verdict_name(r.verdict), r.stats.conflicts, r.stats.decisions,
                                                     r.interpolant_clauses};
                        }});
      } else {
        jobs.push_back({p.filename().string(), "script",
                        [path, limits] { return bench_script(read_file(path), limits()); }});
      }
    }
  }
  for (unsigned i = 0; i < b.random; ++i) {
    std::uint64_t seed = b.seed + i;
    jobs.push_back({"random-" + std::to_string(seed), "interpolate", [seed, limits] {
                      return bench_script(tools::random_interpolation_script(seed), limits());
                    }});
  }
  if (jobs.empty()) throw UsageError("nothing to run: give a directory or --random N");
  // The solver deadline normally ends a job; the kill is a backstop.
  double hard = timeout > 0 ? timeout * 1.5 + 1 : 0;
  tools::run_bench(jobs, b.jobs, hard, std::cout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear real arithmetic: MCSAT solving, model interpolation and model checking"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--timeout", common.timeout, "Time limit in seconds, 0 for none")
      ->envname("NRA_TIMEOUT")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--stats", common.stats, "Append counters and wall time");

  std::string file, formula, model, keep, reals, bools;
  bool extended = false, basic = false, show_inv = false;

  auto* solve = app.add_subcommand("solve", "Run a script: check-sat, check-sat-assuming-model, get-model");
  solve->add_option("file", file, "Script (.nlsmt)")->required();
  solve->add_flag("--extended", extended, "Keep extended root atoms in interpolants");

  auto* itp = app.add_subcommand("interpolate", "Interpolant of the assert-A and assert-B parts of a script");
  itp->add_option("file", file, "Script (.nlsmt)")->required();
  itp->add_flag("--extended", extended, "Keep extended root atoms in the interpolant");

  auto* cell = app.add_subcommand("cell", "Cell around a point for the polynomials of a formula");
  cell->add_option("--formula", formula, "Term over the declared variables")->required();
  cell->add_option("--model", model, "Point, e.g. x=1,y=1/2")->required();
  cell->add_option("--vars", reals, "Real variables, lowest first")->required();
  cell->add_option("--bools", bools, "Bool variables");
  cell->add_flag("--basic", basic, "Polynomial constraints only, no root atoms");

  auto* gen = app.add_subcommand("generalize", "Project a model of a formula onto kept variables");
  gen->add_option("--formula", formula, "Term over the declared variables")->required();
  gen->add_option("--model", model, "Model of the formula, e.g. x=1,y=1")->required();
  gen->add_option("--keep", keep, "Variables to keep")->required();
  gen->add_option("--vars", reals, "Real variables")->required();
  gen->add_option("--bools", bools, "Bool variables");

  std::string engine = "itp";
  unsigned max_k = 10;
  auto* mc = app.add_subcommand("mc", "Check the property of a transition system");
  mc->add_option("file", file, "System (.nlts)")->required();
  mc->add_option("--engine", engine, "bmc, kind or itp")->check(CLI::IsMember({"bmc", "kind", "itp"}));
  mc->add_option("--max-k", max_k, "Unrolling bound");
  mc->add_flag("--invariant", show_inv, "Print the invariant of a valid property");

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "Run a directory of inputs and write CSV");
  bench->add_option("dir", bf.dir, "Directory with .nlts and .nlsmt files");
  bench->add_option("--engine", bf.engine, "Engine for systems")->check(CLI::IsMember({"bmc", "kind", "itp"}));
  bench->add_option("--max-k", bf.max_k, "Unrolling bound for systems");
  bench->add_option("--jobs", bf.jobs, "Parallel worker processes")->check(CLI::PositiveNumber);
  bench->add_option("--random", bf.random, "Also run N generated interpolation pairs");
  bench->add_option("--seed", bf.seed, "Seed of the first generated pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(common, file, extended);
    if (*itp) return cmd_interpolate(common, file, extended);
    if (*cell) return cmd_cell(common, formula, model, reals, bools, basic);
    if (*gen) return cmd_generalize(common, formula, model, keep, reals, bools);
    if (*mc) return cmd_mc(common, file, engine, max_k, show_inv);
    if (*bench) return cmd_bench(common, bf);
  } catch (const ParseError& e) {
    std::string msg = e.what();
    std::string where = std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": ";
    if (msg.rfind(where, 0) == 0) msg.erase(0, where.size());
    std::cerr << (file.empty() ? "<input>" : file) << ":" << where << "error: " << msg << "\n";
    return kUsage;
  } catch (const Interrupted&) {
    std::cout << "unknown\n";
    return kUnknown;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PolyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
