// Subprocess adapters for external ASP and hybrid (ASP + difference
// constraint) solvers. The emitted program is fed on standard input; answer
// sets are read back from the conventional "Answer: N" output blocks.

#pragma once

#include <map>
#include <optional>
#include <string>

#include "metac/core.hpp"

namespace metac {

enum class SolverKind { Asp, AspDc };

/// Environment variable naming the solver binary: METAC_ASP_BIN / METAC_ASPDC_BIN.
std::string solver_env_key(SolverKind kind);

class AdapterError : public Error {
 public:
  enum class Kind { BinaryNotFound, Timeout, ParseFailure, ExitError };

  AdapterError(Kind kind, const std::string& message, std::string raw_output = {})
      : Error(message), kind_(kind), raw_output_(std::move(raw_output)) {}

  Kind kind() const { return kind_; }
  const std::string& raw_output() const { return raw_output_; }

 private:
  Kind kind_;
  std::string raw_output_;
};

struct AdapterConfig {
  /// Paths from a configuration file; the environment variables take precedence.
  std::optional<std::string> asp_bin;
  std::optional<std::string> aspdc_bin;
};

/// One answer set restricted to the atoms the toolkit emits.
struct ExternalModel {
  std::set<StepAtom> atoms;
  std::set<TimeAtomBool> time_atoms;   // t(K,D), Boolean backend
  std::map<Step, std::int64_t> times;  // t(K)=D, hybrid backend

  bool operator==(const ExternalModel&) const = default;
  auto operator<=>(const ExternalModel&) const = default;
};

struct ExternalResult {
  ModelSet<ExternalModel> models;
  /// Number of "Answer:" blocks reported, which may exceed models.size().
  std::size_t answers = 0;
  bool unsat = false;
  int exit_status = 0;
  std::string version;
};

/// Resolved binary path, or nullopt if neither environment nor config name one
/// that exists and is executable.
std::optional<std::string> find_solver(SolverKind kind, const AdapterConfig& config = {});

/// Runs the solver on `program_text`. Throws AdapterError.
ExternalResult run_external(SolverKind kind, const std::string& program_text, bool enumerate_all,
                            unsigned timeout_s, const AdapterConfig& config = {});

/// Parses solver output. Exposed for tests; throws AdapterError(ParseFailure).
ModelSet<ExternalModel> parse_solver_output(const std::string& output, std::size_t* answers = nullptr);

/// Parses one printed ground term such as `at(ram,office)` into an atom name.
std::optional<AtomName> parse_term(const std::string& text);

}  // namespace metac
