// Here-and-there with constraints, restricted to the shape produced by the
// difference-constraint backend: Boolean step atoms plus integer time
// variables t_k. Also holds the difference-constraint feasibility engine and
// the practical model enumerator for compiled dc programs.

#pragma once

#include <map>
#include <optional>

#include "metac/core.hpp"

namespace metac {

/// Partial valuation. A step atom is either mapped to true (present) or
/// undefined; a time variable is either mapped to a natural or undefined.
struct Valuation {
  std::set<StepAtom> atoms;
  std::map<Step, std::int64_t> times;

  /// Every assignment of *this also appears in `other`.
  bool subset_of(const Valuation& other) const;

  bool operator==(const Valuation&) const = default;
  auto operator<=>(const Valuation&) const = default;

  std::string str() const;
};

/// Whether v lies in the denotation of c. Undefined operands make c false.
bool denotes(const Valuation& v, const DiffConstraintAtom& c);

/// <h,t> |= rule under the two-world implication clause.
/// Throws InputError on Boolean time atoms t_{k,d}.
bool htc_satisfies(const Valuation& here, const Valuation& there, const GroundRule& rule);
bool htc_satisfies(const Valuation& here, const Valuation& there, const GroundProgram& program);

struct HtcOptions {
  /// Upper bound on (#Boolean step atoms + #time variables) for the bounded enumerator.
  std::size_t variable_cap = 24;
  /// Upper bound on the number of Boolean atoms for the dc enumerator (--atom-cap).
  std::size_t atom_cap = 24;
};

/// Constraint equilibrium models with every time variable ranging over
/// {undefined, 0..nu}. Candidates are total valuations t; a candidate is kept
/// if <t,t> is a model and no <h,t> with h strictly inside t is.
ModelSet<Valuation> enumerate_constraint_equilibrium_models_bounded(const GroundProgram& program,
                                                                    TimePoint nu,
                                                                    const HtcOptions& options = {});

/// A conjunction of difference constraints and equalities.
struct DiffSystem {
  std::set<DiffConstraintAtom> constraints;

  /// Whether `times` satisfies every constraint (undefined variables falsify).
  bool holds(const std::map<Step, std::int64_t>& times) const;
};

/// The least non-negative solution, or nullopt if the system is infeasible
/// (a positive-weight cycle in the lower-bound graph, or an equality pushed
/// beyond its constant). Variables that occur in no constraint are absent.
std::optional<Valuation> dc_feasible(const DiffSystem& system);

/// Models of a compiled dc program: stable models of the Boolean rules, each
/// paired with the least timing satisfying the constraints it triggers.
/// With `nu_report`, every satisfying timing with last value <= nu_report is
/// reported instead of just the least one.
ModelSet<Valuation> enumerate_dc_models(const GroundProgram& program,
                                        std::optional<TimePoint> nu_report = std::nullopt,
                                        const HtcOptions& options = {});

/// The constraint system a Boolean candidate triggers in a compiled dc program.
DiffSystem triggered_constraints(const GroundProgram& program, const std::set<StepAtom>& atoms);

}  // namespace metac
