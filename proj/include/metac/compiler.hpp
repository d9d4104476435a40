// Step unrolling of metric programs: rule r at position k becomes one ground
// rule over step atoms a_k. Interval annotations are ignored here; the timing
// backends (timing_bool.hpp, timing_dc.hpp) add them back as constraints.

#pragma once

#include <optional>

#include "metac/core.hpp"

namespace metac {

struct CompileContext {
  Step lambda = 1;
  std::optional<TimePoint> nu;  // required by the Boolean backend
  bool simplify = true;
  /// Difference-constraint backend only: adds t_{lambda-1} - t_0 <= deadline.
  std::optional<TimePoint> deadline;

  /// Throws InputError if lambda == 0 or nu < lambda - 1.
  void validate() const;
};

/// Body translation at position k. I and F become verum/falsum constants.
std::vector<GroundLiteral> translate_body_at(const std::vector<Literal<BodyAtom>>& body, Step k,
                                             Step lambda);

/// Folds verum/falsum out of a rule. Returns nullopt when the rule is
/// trivially satisfied (falsum in the body or verum in the head).
std::optional<GroundRule> simplify_rule(GroundRule rule);

/// The ground rule for `rule` at position k, or nullopt if simplification drops it.
std::optional<GroundRule> translate_rule_at(const MetricRule& rule, Step k, const CompileContext& ctx);

/// Every rule at every position, in (rule, k) order. counts.core holds the
/// number of instances before simplification.
GroundProgram compile_core(const MetricProgram& program, const CompileContext& ctx);

/// Unrolled core plus the Boolean timing encoding. Requires ctx.nu.
GroundProgram compile_bool(const MetricProgram& program, const CompileContext& ctx);

/// Unrolled core plus the difference-constraint timing encoding.
GroundProgram compile_dc(const MetricProgram& program, const CompileContext& ctx);

GroundProgram compile(const MetricProgram& program, Backend backend, const CompileContext& ctx);

/// Same program with every interval bound multiplied by `factor`.
MetricProgram scale_durations(const MetricProgram& program, std::uint64_t factor);

}  // namespace metac
