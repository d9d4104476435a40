#include "metac/compiler.hpp"

#include "metac/timing_bool.hpp"
#include "metac/timing_dc.hpp"

namespace metac {

void CompileContext::validate() const {
  if (lambda == 0) throw InputError("lambda must be at least 1");
  if (nu && *nu + 1 < lambda) {
    throw InputError("nu = " + std::to_string(*nu) + " admits no strictly increasing timing of length " +
                     std::to_string(lambda) + " (need nu >= lambda - 1)");
  }
}

std::vector<GroundLiteral> translate_body_at(const std::vector<Literal<BodyAtom>>& body, Step k,
                                             Step lambda) {
  std::vector<GroundLiteral> out;
  out.reserve(body.size());
  for (const auto& lit : body) {
    GroundAtom atom;
    switch (lit.atom.kind) {
      case BodyAtom::Kind::Atom: atom = StepAtom{lit.atom.atom, k}; break;
      case BodyAtom::Kind::Initial: atom = Truth{k == 0}; break;
      // F = not next top: next top fails exactly at the last position.
      case BodyAtom::Kind::Final: atom = Truth{k + 1 == lambda}; break;
    }
    out.push_back({std::move(atom), lit.negated});
  }
  return out;
}

std::optional<GroundRule> simplify_rule(GroundRule rule) {
  GroundRule out;
  for (auto& lit : rule.head) {
    if (const auto* c = std::get_if<Truth>(&lit.atom)) {
      if (c->value != lit.negated) return std::nullopt;
      continue;
    }
    out.head.push_back(std::move(lit));
  }
  for (auto& lit : rule.body) {
    if (const auto* c = std::get_if<Truth>(&lit.atom)) {
      if (c->value == lit.negated) return std::nullopt;
      continue;
    }
    out.body.push_back(std::move(lit));
  }
  return out;
}

std::optional<GroundRule> translate_rule_at(const MetricRule& rule, Step k, const CompileContext& ctx) {
  GroundRule out;
  if (rule.is_next()) {
    // Falsum at the last position; the interval is handled by the timing encodings.
    if (k + 1 < ctx.lambda) out.head.push_back(pos<GroundAtom>(StepAtom{rule.next_head().atom, k + 1}));
  } else {
    for (const auto& lit : rule.disjunction()) {
      out.head.push_back({StepAtom{lit.atom, k}, lit.negated});
    }
  }
  out.body = translate_body_at(rule.body, k, ctx.lambda);
  if (ctx.simplify) return simplify_rule(std::move(out));
  return out;
}

GroundProgram compile_core(const MetricProgram& program, const CompileContext& ctx) {
  ctx.validate();
  GroundProgram out;
  out.lambda = ctx.lambda;
  out.nu = ctx.nu;
  for (const auto& rule : program.rules) {
    for (Step k = 0; k < ctx.lambda; ++k) {
      if (auto r = translate_rule_at(rule, k, ctx)) out.rules.push_back(std::move(*r));
    }
  }
  out.counts.core = program.rules.size() * ctx.lambda;
  return out;
}

namespace {
void append_simplified(GroundProgram& into, const GroundProgram& part, bool simplify) {
  for (const auto& r : part.rules) {
    if (!simplify) {
      into.rules.push_back(r);
    } else if (auto s = simplify_rule(r)) {
      into.rules.push_back(std::move(*s));
    }
  }
  into.counts.delta += part.counts.delta;
  into.counts.psi += part.counts.psi;
}
}  // namespace

GroundProgram compile_bool(const MetricProgram& program, const CompileContext& ctx) {
  if (!ctx.nu) throw InputError("the Boolean backend needs an upper bound nu on time points");
  ctx.validate();
  GroundProgram out = compile_core(program, ctx);
  out.backend = Backend::Boolean;
  append_simplified(out, compile_delta_bool(ctx.lambda, *ctx.nu), ctx.simplify);
  append_simplified(out, compile_psi_bool(program, ctx.lambda, *ctx.nu), ctx.simplify);
  return out;
}

GroundProgram compile_dc(const MetricProgram& program, const CompileContext& ctx) {
  ctx.validate();
  GroundProgram out = compile_core(program, ctx);
  out.backend = Backend::DifferenceConstraint;
  out.nu.reset();
  GroundProgram delta = compile_delta_dc(ctx.lambda);
  if (ctx.deadline) {
    delta.rules.push_back(
        {{pos<GroundAtom>(DiffConstraintAtom::diff_leq(TimeVar{ctx.lambda - 1}, TimeVar{0},
                                                      static_cast<std::int64_t>(*ctx.deadline)))},
         {}});
    delta.counts.delta += 1;
  }
  append_simplified(out, delta, ctx.simplify);
  append_simplified(out, compile_psi_dc(program, ctx.lambda), ctx.simplify);
  return out;
}

GroundProgram compile(const MetricProgram& program, Backend backend, const CompileContext& ctx) {
  return backend == Backend::Boolean ? compile_bool(program, ctx) : compile_dc(program, ctx);
}

MetricProgram scale_durations(const MetricProgram& program, std::uint64_t factor) {
  MetricProgram out = program;
  for (auto& rule : out.rules) {
    if (auto* nh = std::get_if<NextHead>(&rule.head)) nh->interval = nh->interval.scaled(factor);
  }
  return out;
}

}  // namespace metac
