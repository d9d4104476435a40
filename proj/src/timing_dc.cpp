#include "metac/timing_dc.hpp"

#include "metac/compiler.hpp"

namespace metac {

GroundProgram compile_delta_dc(Step lambda) {
  if (lambda == 0) throw InputError("lambda must be at least 1");
  GroundProgram out;
  out.backend = Backend::DifferenceConstraint;
  out.lambda = lambda;
  out.rules.push_back({{pos<GroundAtom>(DiffConstraintAtom::eq(TimeVar{0}, 0))}, {}});
  for (Step k = 0; k + 1 < lambda; ++k) {
    out.rules.push_back({{pos<GroundAtom>(DiffConstraintAtom::diff_leq(TimeVar{k}, TimeVar{k + 1}, -1))}, {}});
  }
  out.counts.delta = out.rules.size();
  return out;
}

GroundProgram compile_psi_dc(const MetricProgram& program, Step lambda) {
  GroundProgram out;
  out.backend = Backend::DifferenceConstraint;
  out.lambda = lambda;
  for (const auto& rule : program.rules) {
    if (!rule.is_next()) continue;
    const Interval& interval = rule.next_head().interval;
    for (Step k = 0; k + 1 < lambda; ++k) {
      const auto body = translate_body_at(rule.body, k, lambda);
      GroundRule lower{{}, body};
      lower.body.push_back(neg<GroundAtom>(DiffConstraintAtom::diff_leq(
          TimeVar{k}, TimeVar{k + 1}, -static_cast<std::int64_t>(interval.lower))));
      out.rules.push_back(std::move(lower));
      if (interval.upper) {
        GroundRule upper{{}, body};
        upper.body.push_back(neg<GroundAtom>(DiffConstraintAtom::diff_leq(
            TimeVar{k + 1}, TimeVar{k}, static_cast<std::int64_t>(*interval.upper) - 1)));
        out.rules.push_back(std::move(upper));
      }
    }
  }
  out.counts.psi = out.rules.size();
  return out;
}

}  // namespace metac
