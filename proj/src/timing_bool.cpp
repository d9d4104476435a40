#include "metac/timing_bool.hpp"

#include "metac/compiler.hpp"

namespace metac {

GroundProgram compile_delta_bool(Step lambda, TimePoint nu) {
  CompileContext ctx;
  ctx.lambda = lambda;
  ctx.nu = nu;
  ctx.validate();
  GroundProgram out;
  out.lambda = lambda;
  out.nu = nu;
  out.rules.push_back({{pos<GroundAtom>(TimeAtomBool{0, 0})}, {}});
  for (Step k = 0; k + 1 < lambda; ++k) {
    for (TimePoint d = 0; d <= nu; ++d) {
      GroundRule r;
      for (TimePoint later = d + 1; later <= nu; ++later) {
        r.head.push_back(pos<GroundAtom>(TimeAtomBool{k + 1, later}));
      }
      r.body.push_back(pos<GroundAtom>(TimeAtomBool{k, d}));
      out.rules.push_back(std::move(r));
    }
  }
  out.counts.delta = out.rules.size();
  return out;
}

namespace {
bool gap_violates(const Interval& interval, TimePoint gap) { return !interval.contains(gap); }
}  // namespace

void for_each_psi_bool(const MetricProgram& program, Step lambda, TimePoint nu,
                       const std::function<void(const GroundRule&)>& sink) {
  for (const auto& rule : program.rules) {
    if (!rule.is_next()) continue;
    const Interval& interval = rule.next_head().interval;
    for (Step k = 0; k + 1 < lambda; ++k) {
      const auto body = translate_body_at(rule.body, k, lambda);
      GroundRule r;
      r.body = body;
      r.body.push_back(pos<GroundAtom>(TimeAtomBool{k, 0}));
      r.body.push_back(pos<GroundAtom>(TimeAtomBool{k + 1, 0}));
      auto& at_k = std::get<TimeAtomBool>(r.body[body.size()].atom);
      auto& at_next = std::get<TimeAtomBool>(r.body[body.size() + 1].atom);
      for (TimePoint d = 0; d <= nu; ++d) {
        for (TimePoint later = d + 1; later <= nu; ++later) {
          // One constraint per pair: below the lower bound or at/above a finite upper bound.
          if (!gap_violates(interval, later - d)) continue;
          at_k.value = d;
          at_next.value = later;
          sink(r);
        }
      }
    }
  }
}

GroundProgram compile_psi_bool(const MetricProgram& program, Step lambda, TimePoint nu) {
  GroundProgram out;
  out.lambda = lambda;
  out.nu = nu;
  for_each_psi_bool(program, lambda, nu, [&](const GroundRule& r) { out.rules.push_back(r); });
  out.counts.psi = out.rules.size();
  return out;
}

std::uint64_t count_psi_bool(const MetricProgram& program, Step lambda, TimePoint nu) {
  if (lambda < 2) return 0;
  std::uint64_t per_step = 0;
  for (const auto& rule : program.rules) {
    if (!rule.is_next()) continue;
    const Interval& interval = rule.next_head().interval;
    // Pairs d < d' <= nu with gap g: there are nu - g + 1 of them.
    for (TimePoint gap = 1; gap <= nu; ++gap) {
      if (gap_violates(interval, gap)) per_step += nu - gap + 1;
    }
  }
  return per_step * (lambda - 1);
}

}  // namespace metac
