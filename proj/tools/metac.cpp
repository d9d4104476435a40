// metac: compile, solve, verify and benchmark metric logic programs.
//
// Exit codes: 0 success, 1 no models (solve) or failed check (verify, bench),
// 2 usage error, 3 input error, 4 cap exceeded, 5 external solver error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "metac/adapters.hpp"
#include "metac/compiler.hpp"
#include "metac/emit.hpp"
#include "metac/htc.hpp"
#include "metac/ht_solver.hpp"
#include "metac/parser.hpp"
#include "metac/verify.hpp"

namespace fs = std::filesystem;
using namespace metac;

namespace {

enum Exit { kOk = 0, kNoModels = 1, kUsage = 2, kInput = 3, kCap = 4, kExternal = 5 };

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Globals {
  std::size_t atom_cap = 24;
  std::size_t oracle_cap = 24;
  unsigned timeout = 600;
  std::string asp_bin;
  std::string aspdc_bin;

  AdapterConfig adapters() const {
    AdapterConfig c;
    if (!asp_bin.empty()) c.asp_bin = asp_bin;
    if (!aspdc_bin.empty()) c.aspdc_bin = aspdc_bin;
    return c;
  }
};

struct Target {
  std::string file;
  std::string backend = "bool";
  Step lambda = 1;
  std::optional<TimePoint> nu;
  std::optional<TimePoint> deadline;
  bool no_simplify = false;
};

MetricProgram read_program(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto result = parse_program(buf.str());
  for (const auto& d : result.diagnostics) std::cerr << path << ":" << d.str() << "\n";
  if (!result.ok()) throw InputError("'" + path + "' has syntax errors");
  return *result.program;
}

Backend backend_of(const Target& t) { return parse_backend(t.backend); }

CompileContext context_of(const Target& t, bool for_compile) {
  const Backend backend = backend_of(t);
  if (backend == Backend::Boolean && !t.nu) throw UsageError("--backend bool needs --nu");
  if (backend == Backend::Boolean && t.deadline) throw UsageError("--deadline applies to --backend dc only");
  if (backend == Backend::DifferenceConstraint && t.nu && for_compile) {
    std::cerr << "warning: --nu is ignored when compiling for the dc backend\n";
  }
  CompileContext ctx;
  ctx.lambda = t.lambda;
  if (backend == Backend::Boolean) ctx.nu = t.nu;
  ctx.simplify = !t.no_simplify;
  ctx.deadline = t.deadline;
  return ctx;
}

void add_target_options(CLI::App* cmd, Target& t) {
  cmd->add_option("file", t.file, "Input program (.mlp)")->required();
  cmd->add_option("--backend", t.backend, "Timing encoding")->check(CLI::IsMember({"bool", "dc"}));
  cmd->add_option("--lambda", t.lambda, "Trace length")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--nu", t.nu, "Upper bound on time points (required for bool)");
  cmd->add_option("--deadline", t.deadline, "dc only: last state no later than this time");
  cmd->add_flag("--no-simplify", t.no_simplify, "Keep verum/falsum constants in the output");
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

// --- compile ---------------------------------------------------------------

int run_compile(const Target& t, const std::string& format_in, const std::string& head_shift, const std::string& out) {
  const Backend backend = backend_of(t);
  const auto ctx = context_of(t, true);
  std::string format = format_in.empty() ? (backend == Backend::Boolean ? "asp" : "dc") : format_in;
  if (format == "asp" && backend != Backend::Boolean) throw UsageError("--format asp needs --backend bool");
  if (format == "dc" && backend != Backend::DifferenceConstraint) throw UsageError("--format dc needs --backend dc");
  const auto ground = compile(read_program(t.file), backend, ctx);
  if (format == "asp") write_output(emit_asp(ground), out);
  if (format == "dc") write_output(emit_dc(ground, head_shift == "on"), out);
  if (format == "json") write_output(emit_json(ground), out);
  return kOk;
}

// --- solve -----------------------------------------------------------------

void print_models(const std::vector<TimedTrace>& models, std::size_t total) {
  std::size_t i = 0;
  for (const auto& m : models) {
    std::cout << "model " << ++i << ":\n" << to_string(m);
  }
  std::cout << "models: " << total << "\n";
}

int run_solve(const Globals& g, const Target& t, const std::string& engine, bool all) {
  const Backend backend = backend_of(t);
  const auto ctx = context_of(t, false);
  const MetricProgram program = read_program(t.file);
  const auto ground = compile(program, backend, ctx);
  std::vector<TimedTrace> traces;

  if (engine == "external") {
    const SolverKind kind = backend == Backend::Boolean ? SolverKind::Asp : SolverKind::AspDc;
    const std::string text = backend == Backend::Boolean ? emit_asp(ground) : emit_dc(ground, true);
    const auto res = run_external(kind, text, all, g.timeout, g.adapters());
    std::cerr << "solver: " << res.version << "\n";
    for (const auto& m : res.models) {
      Valuation v{m.atoms, m.times};
      if (backend == Backend::Boolean) {
        Interpretation i(m.atoms.begin(), m.atoms.end());
        i.insert(m.time_atoms.begin(), m.time_atoms.end());
        traces.push_back(theta(i, i, t.lambda));
      } else {
        traces.push_back(theta_c(v, v, t.lambda));
      }
    }
    print_models(traces, res.answers);
    return res.answers == 0 ? kNoModels : kOk;
  }

  if (backend == Backend::Boolean) {
    SolverOptions opts;
    opts.atom_cap = g.atom_cap;
    if (!all) opts.model_limit = 1;
    for (const auto& m : traces_of_bool(enumerate_equilibrium_models(ground, opts), t.lambda)) traces.push_back(m);
  } else {
    HtcOptions opts;
    opts.atom_cap = g.atom_cap;
    // Here --nu bounds the reported timings; without it each model gets its least timing.
    for (const auto& m : traces_of_dc(enumerate_dc_models(ground, t.nu, opts), t.lambda)) traces.push_back(m);
    if (!all && traces.size() > 1) traces.erase(traces.begin() + 1, traces.end());
  }
  print_models(traces, traces.size());
  return traces.empty() ? kNoModels : kOk;
}

// --- verify ----------------------------------------------------------------

int run_verify(const Globals& g, const std::string& file, std::size_t random, std::uint64_t seed, Step lambda,
               TimePoint nu, const std::string& backend, bool json) {
  if (file.empty() == (random == 0)) throw UsageError("give either a program file or --random N");
  std::vector<MetricProgram> programs;
  if (!file.empty()) {
    programs.push_back(read_program(file));
  } else {
    RandomProgramOptions ro;
    ro.seed = seed;
    programs = random_corpus(random, ro);
    if (!json) std::cout << "random corpus: " << random << " programs, " << ro.str() << "\n";
  }
  VerifyOptions opts;
  opts.oracle.trace_bit_cap = g.oracle_cap;
  opts.solver.atom_cap = std::max<std::size_t>(g.atom_cap, opts.solver.atom_cap);
  opts.htc.variable_cap = g.oracle_cap;
  opts.htc.atom_cap = std::max<std::size_t>(g.atom_cap, opts.htc.atom_cap);

  std::size_t failed = 0;
  std::size_t run = 0;
  for (const auto& p : programs) {
    std::vector<VerificationReport> reports;
    if (backend == "bool" || backend == "both") reports.push_back(crosscheck_bool(p, lambda, nu, opts));
    if (backend == "dc" || backend == "both") reports.push_back(crosscheck_dc(p, lambda, nu, opts));
    if (backend == "both") reports.push_back(crosscheck_backends(p, lambda, nu, opts));
    for (const auto& r : reports) {
      ++run;
      if (!r.pass()) ++failed;
      if (json) {
        std::cout << r.json();
      } else if (!r.pass() || !file.empty()) {
        std::cout << r.table();
      }
    }
  }
  if (!json) std::cout << (failed ? "FAIL" : "PASS") << ": " << run - failed << "/" << run << " checks passed\n";
  return failed ? kNoModels : kOk;
}

// --- stats -----------------------------------------------------------------

int run_stats(const Target& t, bool json) {
  const auto ground = compile(read_program(t.file), backend_of(t), context_of(t, true));
  const auto rep = stats(ground);
  std::cout << (json ? rep.json() : rep.table());
  return kOk;
}

// --- bench -----------------------------------------------------------------

int run_bench(const std::string& dir, const std::vector<std::uint64_t>& scales, Step lambda, TimePoint nu, bool json) {
  std::vector<std::pair<std::string, MetricProgram>> corpus;
  std::vector<fs::path> files;
  if (fs::is_regular_file(dir)) {
    files.push_back(dir);
  } else {
    if (!fs::is_directory(dir)) throw InputError("'" + dir + "' is neither a file nor a directory");
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".mlp") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  }
  for (const auto& f : files) corpus.emplace_back(f.stem().string(), read_program(f.string()));
  BenchOptions opts;
  opts.lambda = lambda;
  opts.nu_base = nu;
  const auto rep = bench(corpus, scales, opts);
  std::cout << (json ? rep.json() : rep.table());
  return rep.pass() ? kOk : kNoModels;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compiler and verification toolkit for metric logic programs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "metac.toml", "Key/value configuration file");
  Globals g;
  app.add_option("--atom-cap", g.atom_cap, "Largest Boolean atom count the internal solver accepts");
  app.add_option("--oracle-cap", g.oracle_cap, "Largest trace/valuation size for brute-force oracles");
  app.add_option("--timeout", g.timeout, "External solver timeout in seconds");
  app.add_option("--asp-bin", g.asp_bin, "External ASP solver (METAC_ASP_BIN overrides)");
  app.add_option("--aspdc-bin", g.aspdc_bin, "External hybrid solver (METAC_ASPDC_BIN overrides)");

  Target compile_t;
  std::string format;
  std::string head_shift = "on";
  std::string out;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a program to ground ASP");
  add_target_options(compile_cmd, compile_t);
  compile_cmd->add_option("--format", format, "asp, dc or json")->check(CLI::IsMember({"asp", "dc", "json"}));
  compile_cmd->add_option("--head-shift", head_shift, "Move dc constraints into rule heads")
      ->check(CLI::IsMember({"on", "off"}));
  compile_cmd->add_option("-o,--output", out, "Output file (default stdout)");

  Target solve_t;
  std::string engine = "internal";
  bool all = false;
  auto* solve_cmd = app.add_subcommand("solve", "Enumerate models");
  add_target_options(solve_cmd, solve_t);
  solve_cmd->add_option("--engine", engine, "internal or external")->check(CLI::IsMember({"internal", "external"}));
  solve_cmd->add_flag("--all", all, "All models instead of the first");

  std::string verify_file;
  std::size_t random = 0;
  std::uint64_t seed = 1;
  Step v_lambda = 1;
  TimePoint v_nu = 0;
  std::string v_backend = "both";
  bool v_json = false;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-check the pipelines against the reference semantics");
  verify_cmd->add_option("file", verify_file, "Input program (.mlp)");
  verify_cmd->add_option("--random", random, "Check N random programs instead of a file");
  verify_cmd->add_option("--seed", seed, "Seed for --random");
  verify_cmd->add_option("--lambda", v_lambda, "Trace length")->required()->check(CLI::PositiveNumber);
  verify_cmd->add_option("--nu", v_nu, "Upper bound on time points")->required();
  verify_cmd->add_option("--backend", v_backend, "bool, dc or both")->check(CLI::IsMember({"bool", "dc", "both"}));
  verify_cmd->add_flag("--json", v_json, "JSON reports");

  Target stats_t;
  bool s_json = false;
  auto* stats_cmd = app.add_subcommand("stats", "Size statistics of the compiled program");
  add_target_options(stats_cmd, stats_t);
  stats_cmd->add_flag("--json", s_json, "JSON output");

  std::string corpus_dir;
  std::vector<std::uint64_t> scales{1, 5, 10};
  Step b_lambda = 4;
  TimePoint b_nu = 110;
  bool b_json = false;
  auto* bench_cmd = app.add_subcommand("bench", "Rule counts and compile times across duration scales");
  bench_cmd->add_option("corpus", corpus_dir, "Directory of .mlp files")->required();
  bench_cmd->add_option("--scales", scales, "Duration multipliers")->delimiter(',');
  bench_cmd->add_option("--lambda", b_lambda, "Trace length")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--nu", b_nu, "nu at scale 1 (scaled with the durations)");
  bench_cmd->add_flag("--json", b_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compile_cmd) return run_compile(compile_t, format, head_shift, out);
    if (*solve_cmd) return run_solve(g, solve_t, engine, all);
    if (*verify_cmd) return run_verify(g, verify_file, random, seed, v_lambda, v_nu, v_backend, v_json);
    if (*stats_cmd) return run_stats(stats_t, s_json);
    if (*bench_cmd) return run_bench(corpus_dir, scales, b_lambda, b_nu, b_json);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const AdapterError& e) {
    std::cerr << "external solver: " << e.what() << "\n";
    return kExternal;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}
