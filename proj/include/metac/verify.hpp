// Correspondence maps between timed traces and ground interpretations, the
// cross-checks built on them, the random program generator and the
// benchmark driver.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metac/compiler.hpp"
#include "metac/ht_solver.hpp"
#include "metac/htc.hpp"
#include "metac/mht.hpp"

namespace metac {

// ---------------------------------------------------------------------------
// sigma / theta

/// The timing encoded by the t_{k,d} atoms of `t`, if there is exactly one per
/// position k < lambda, none beyond, and the values form a timing function.
std::optional<TimingFunction> is_timed_bool(const Interpretation& t, Step lambda);

/// <H u X, T u X> with X = { t_{k,tau(k)} }.
std::pair<Interpretation, Interpretation> sigma(const TimedTrace& trace);
/// Inverse of sigma. Throws InputError if `there` is not timed wrt lambda or
/// the time atoms of here and there differ.
TimedTrace theta(const Interpretation& here, const Interpretation& there, Step lambda);

std::pair<Valuation, Valuation> sigma_c(const TimedTrace& trace);
/// Throws InputError unless both valuations define exactly t_0..t_{lambda-1}
/// with the same strictly increasing values starting at 0.
TimedTrace theta_c(const Valuation& here, const Valuation& there, Step lambda);

// ---------------------------------------------------------------------------
// Cross-checks

struct VerifyOptions {
  OracleOptions oracle;
  // Compiled Boolean programs carry lambda * (nu + 1) time atoms on top of
  // the step atoms, so the solver gets more room than its default.
  SolverOptions solver{64, std::nullopt};
  HtcOptions htc{24, 64};
  bool simplify = true;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  std::vector<std::string> counterexamples;  // at most three
};

struct VerificationReport {
  std::string program;  // surface syntax
  std::string backend;  // "bool", "dc" or "both"
  Step lambda = 1;
  TimePoint nu = 0;
  std::size_t oracle_models = 0;
  std::size_t backend_models = 0;
  std::vector<CheckResult> checks;

  bool pass() const;
  std::string json() const;
  std::string table() const;
};

/// sigma(oracle models) = equilibrium models of the compiled Boolean program,
/// and theta maps them back.
VerificationReport crosscheck_bool(const MetricProgram& p, Step lambda, TimePoint nu,
                                   const VerifyOptions& options = {});
/// sigma_c(oracle models) = bounded constraint equilibrium models of the dc
/// program, theta_c maps back, and the practical dc enumerator agrees.
VerificationReport crosscheck_dc(const MetricProgram& p, Step lambda, TimePoint nu,
                                 const VerifyOptions& options = {});
/// Trace-level agreement of the Boolean and dc pipelines at the same nu.
VerificationReport crosscheck_backends(const MetricProgram& p, Step lambda, TimePoint nu,
                                       const VerifyOptions& options = {});

/// Models of a compiled program read back as timed traces.
ModelSet<TimedTrace> traces_of_bool(const ModelSet<Interpretation>& models, Step lambda);
ModelSet<TimedTrace> traces_of_dc(const ModelSet<Valuation>& models, Step lambda);

// ---------------------------------------------------------------------------
// Random programs

struct RandomProgramOptions {
  std::uint64_t seed = 1;
  std::size_t atoms = 3;      // pool a, b, c, ...
  std::size_t max_rules = 4;  // 1..max_rules rules
  std::uint64_t max_bound = 3;

  std::string str() const;
};

/// Small programs over the atom pool. Deterministic in the seed on every
/// platform (uses only raw 64-bit engine output).
class RandomProgramGenerator {
 public:
  explicit RandomProgramGenerator(RandomProgramOptions options);
  MetricProgram next();
  const RandomProgramOptions& options() const { return options_; }

 private:
  std::uint64_t below(std::uint64_t n);

  RandomProgramOptions options_;
  std::uint64_t state_;
};

std::vector<MetricProgram> random_corpus(std::size_t count, const RandomProgramOptions& options);

// ---------------------------------------------------------------------------
// Benchmark

struct BenchOptions {
  Step lambda = 4;
  TimePoint nu_base = 110;  // nu at scale 1; scaled along with the durations
  /// Boolean programs estimated above this many rules are counted, not built.
  std::uint64_t materialize_limit = 2'000'000;
  /// dc compile time is the minimum over this many repetitions.
  unsigned repetitions = 25;
};

struct BenchEntry {
  std::string name;
  std::uint64_t scale = 1;
  TimePoint nu = 0;
  SectionCounts dc_counts;
  std::uint64_t bool_core = 0;
  std::uint64_t bool_delta = 0;
  std::uint64_t bool_psi = 0;
  bool bool_materialized = false;
  double dc_compile_s = 0;
  double bool_compile_s = 0;  // 0 when not materialized

  std::uint64_t bool_total() const { return bool_core + bool_delta + bool_psi; }
};

struct BenchReport {
  std::vector<BenchEntry> entries;
  std::vector<CheckResult> checks;

  bool pass() const;
  std::string json() const;
  std::string table() const;
};

/// Compiles every program at every duration scale and checks the size trends:
/// constant dc rule counts, Boolean counts growing like c * nu^2 (within 20%
/// of the least-squares fit through the origin), and dc compile time at the
/// largest scale within twice that of the smallest.
BenchReport bench(const std::vector<std::pair<std::string, MetricProgram>>& corpus,
                  const std::vector<std::uint64_t>& scales, const BenchOptions& options = {});

}  // namespace metac
