// Equilibrium models (stable models) of ground Boolean programs under the
// logic of here-and-there.

#pragma once

#include <optional>

#include "metac/core.hpp"

namespace metac {

/// A set of true Boolean ground atoms (StepAtom / TimeAtomBool).
using Interpretation = std::set<GroundAtom>;

struct SolverOptions {
  /// Refuse programs with more distinct Boolean atoms than this (--atom-cap).
  std::size_t atom_cap = 24;
  /// Stop after this many models.
  std::optional<std::size_t> model_limit;
};

/// <H,T> |= rule, reading the rule as the implication body -> head.
/// Throws InputError on difference-constraint atoms.
bool ht_satisfies(const Interpretation& here, const Interpretation& there, const GroundRule& rule);
bool ht_satisfies(const Interpretation& here, const Interpretation& there, const GroundProgram& program);

/// Distinct Boolean atoms of a program, sorted.
std::vector<GroundAtom> boolean_atoms(const GroundProgram& program);

/// Equilibrium models via backtracking search; minimality of each candidate
/// is decided by a satisfiability check on its reduct.
ModelSet<Interpretation> enumerate_equilibrium_models(const GroundProgram& program,
                                                      const SolverOptions& options = {});

/// Literal subset enumeration over all T and all H < T using ht_satisfies.
/// Exponential; meant for cross-checking on programs with at most 16 atoms.
ModelSet<Interpretation> enumerate_equilibrium_models_bruteforce(const GroundProgram& program);

/// Whether <T,T> is an equilibrium model of the program.
bool is_equilibrium_model(const GroundProgram& program, const Interpretation& there);

}  // namespace metac
