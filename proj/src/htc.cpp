#include "metac/htc.hpp"

#include <algorithm>
#include <sstream>

#include "metac/ht_solver.hpp"

namespace metac {

bool Valuation::subset_of(const Valuation& other) const {
  if (!std::includes(other.atoms.begin(), other.atoms.end(), atoms.begin(), atoms.end())) return false;
  return std::all_of(times.begin(), times.end(), [&](const auto& kv) {
    const auto it = other.times.find(kv.first);
    return it != other.times.end() && it->second == kv.second;
  });
}

std::string Valuation::str() const {
  std::ostringstream out;
  out << "{";
  const char* sep = "";
  for (const auto& a : atoms) {
    out << sep << to_string(a);
    sep = ", ";
  }
  for (const auto& [k, v] : times) {
    out << sep << "t_" << k << "=" << v;
    sep = ", ";
  }
  out << "}";
  return out.str();
}

namespace {

std::optional<std::int64_t> lookup(const std::map<Step, std::int64_t>& times, TimeVar x) {
  const auto it = times.find(x.step);
  if (it == times.end()) return std::nullopt;
  return it->second;
}

bool denotes_times(const std::map<Step, std::int64_t>& times, const DiffConstraintAtom& c) {
  const auto x = lookup(times, c.x);
  if (!x) return false;
  if (c.kind == DiffConstraintAtom::Kind::Eq) return *x == c.bound;
  const auto y = lookup(times, c.y);
  return y && *x - *y <= c.bound;
}

bool atom_at(const GroundAtom& atom, const Valuation& world) {
  return std::visit(
      [&](const auto& a) -> bool {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, StepAtom>) {
          return world.atoms.count(a) > 0;
        } else if constexpr (std::is_same_v<A, DiffConstraintAtom>) {
          return denotes_times(world.times, a);
        } else if constexpr (std::is_same_v<A, Truth>) {
          return a.value;
        } else {
          throw InputError("Boolean time atom " + to_string(a) + " in a difference-constraint program");
        }
      },
      atom);
}

bool literal_at(const GroundLiteral& lit, const Valuation& world, const Valuation& there) {
  if (!lit.negated) return atom_at(lit.atom, world);
  return !atom_at(lit.atom, world) && !atom_at(lit.atom, there);
}

bool rule_at(const GroundRule& rule, const Valuation& world, const Valuation& there) {
  for (const auto& lit : rule.body) {
    if (!literal_at(lit, world, there)) return true;
  }
  return std::any_of(rule.head.begin(), rule.head.end(),
                     [&](const GroundLiteral& lit) { return literal_at(lit, world, there); });
}

}  // namespace

bool denotes(const Valuation& v, const DiffConstraintAtom& c) { return denotes_times(v.times, c); }

bool htc_satisfies(const Valuation& here, const Valuation& there, const GroundRule& rule) {
  return rule_at(rule, here, there) && rule_at(rule, there, there);
}

bool htc_satisfies(const Valuation& here, const Valuation& there, const GroundProgram& program) {
  return std::all_of(program.rules.begin(), program.rules.end(),
                     [&](const GroundRule& r) { return htc_satisfies(here, there, r); });
}

// ---------------------------------------------------------------------------
// Bounded enumeration

namespace {

struct Vocabulary {
  std::vector<StepAtom> atoms;
  std::vector<Step> vars;
};

Vocabulary vocabulary(const GroundProgram& program) {
  std::set<StepAtom> atoms;
  std::set<Step> vars;
  for (const auto& r : program.rules) {
    for (const auto* part : {&r.head, &r.body}) {
      for (const auto& lit : *part) {
        if (const auto* s = std::get_if<StepAtom>(&lit.atom)) atoms.insert(*s);
        if (const auto* c = std::get_if<DiffConstraintAtom>(&lit.atom)) {
          vars.insert(c->x.step);
          vars.insert(c->y.step);
        }
        if (const auto* b = std::get_if<TimeAtomBool>(&lit.atom)) {
          throw InputError("Boolean time atom " + to_string(*b) + " in a difference-constraint program");
        }
      }
    }
  }
  return {{atoms.begin(), atoms.end()}, {vars.begin(), vars.end()}};
}

// A rule with its constraint and constant literals evaluated for one fixed
// pair of time valuations, leaving bit masks over the Boolean atoms.
struct FoldedRule {
  std::uint64_t body_pos = 0;
  std::uint64_t body_neg = 0;
  std::uint64_t head_pos = 0;
  std::uint64_t head_neg = 0;
  bool body_fixed_here = true;
  bool body_fixed_there = true;
  bool head_fixed_here = false;
  bool head_fixed_there = false;

  bool holds_at(std::uint64_t world, std::uint64_t there, bool at_here) const {
    const bool body = (at_here ? body_fixed_here : body_fixed_there) && (world & body_pos) == body_pos &&
                      (there & body_neg) == 0;
    if (!body) return true;
    return (at_here ? head_fixed_here : head_fixed_there) || (world & head_pos) != 0 ||
           (head_neg & ~there) != 0;
  }
  bool holds(std::uint64_t here, std::uint64_t there) const {
    return holds_at(here, there, true) && holds_at(there, there, false);
  }
};

class BoundedEnumerator {
 public:
  BoundedEnumerator(const GroundProgram& program, TimePoint nu, const HtcOptions& options)
      : program_(program), nu_(nu), voc_(vocabulary(program)) {
    const std::size_t vars = voc_.atoms.size() + voc_.vars.size();
    if (vars > options.variable_cap || voc_.atoms.size() > 62) {
      throw CapExceeded("bounded HT_c enumeration over " + std::to_string(vars) +
                        " variables exceeds the cap of " + std::to_string(options.variable_cap) +
                        " (raise it with --oracle-cap)");
    }
    for (std::size_t i = 0; i < voc_.atoms.size(); ++i) index_[voc_.atoms[i]] = static_cast<int>(i);
    for (std::size_t r = 0; r < program.rules.size(); ++r) {
      const auto& rule = program.rules[r];
      const bool boolean_free = std::none_of(rule.head.begin(), rule.head.end(), is_step) &&
                                std::none_of(rule.body.begin(), rule.body.end(), is_step);
      (boolean_free ? time_only_ : mixed_).push_back(r);
    }
  }

  ModelSet<Valuation> run() {
    std::map<Step, std::int64_t> times;
    enumerate_times(0, times);
    return std::move(models_);
  }

 private:
  static bool is_step(const GroundLiteral& lit) { return std::holds_alternative<StepAtom>(lit.atom); }

  FoldedRule fold(const GroundRule& rule, const std::map<Step, std::int64_t>& here,
                  const std::map<Step, std::int64_t>& there) const {
    FoldedRule f;
    // Non-Boolean literal values at the here and there worlds.
    auto fixed = [&](const GroundLiteral& lit, bool at_here) {
      auto value = [&](const std::map<Step, std::int64_t>& times) {
        if (const auto* c = std::get_if<Truth>(&lit.atom)) return c->value;
        return denotes_times(times, std::get<DiffConstraintAtom>(lit.atom));
      };
      if (!lit.negated) return value(at_here ? here : there);
      return !value(at_here ? here : there) && !value(there);
    };
    for (const auto& lit : rule.body) {
      if (const auto* s = std::get_if<StepAtom>(&lit.atom)) {
        (lit.negated ? f.body_neg : f.body_pos) |= std::uint64_t{1} << index_.at(*s);
        continue;
      }
      f.body_fixed_here = f.body_fixed_here && fixed(lit, true);
      f.body_fixed_there = f.body_fixed_there && fixed(lit, false);
    }
    for (const auto& lit : rule.head) {
      if (const auto* s = std::get_if<StepAtom>(&lit.atom)) {
        (lit.negated ? f.head_neg : f.head_pos) |= std::uint64_t{1} << index_.at(*s);
        continue;
      }
      f.head_fixed_here = f.head_fixed_here || fixed(lit, true);
      f.head_fixed_there = f.head_fixed_there || fixed(lit, false);
    }
    return f;
  }

  bool time_rules_hold(const std::map<Step, std::int64_t>& here, const std::map<Step, std::int64_t>& there) const {
    Valuation h{{}, here};
    Valuation t{{}, there};
    return std::all_of(time_only_.begin(), time_only_.end(),
                       [&](std::size_t r) { return htc_satisfies(h, t, program_.rules[r]); });
  }

  std::vector<FoldedRule> fold_all(const std::map<Step, std::int64_t>& here,
                                   const std::map<Step, std::int64_t>& there) const {
    std::vector<FoldedRule> out;
    out.reserve(mixed_.size());
    for (std::size_t r : mixed_) out.push_back(fold(program_.rules[r], here, there));
    return out;
  }

  static bool all_hold(const std::vector<FoldedRule>& rules, std::uint64_t here, std::uint64_t there) {
    return std::all_of(rules.begin(), rules.end(), [&](const FoldedRule& f) { return f.holds(here, there); });
  }

  void enumerate_times(std::size_t i, std::map<Step, std::int64_t>& times) {
    if (i == voc_.vars.size()) {
      visit_times(times);
      return;
    }
    const Step var = voc_.vars[i];
    enumerate_times(i + 1, times);  // undefined
    for (TimePoint d = 0; d <= nu_; ++d) {
      times[var] = static_cast<std::int64_t>(d);
      enumerate_times(i + 1, times);
    }
    times.erase(var);
  }

  void visit_times(const std::map<Step, std::int64_t>& there_times) {
    if (!time_rules_hold(there_times, there_times)) return;
    const auto total = fold_all(there_times, there_times);

    // Here-world time valuations: sub-maps of the there-world one.
    std::vector<std::pair<std::map<Step, std::int64_t>, std::vector<FoldedRule>>> smaller;
    std::vector<Step> defined;
    for (const auto& kv : there_times) defined.push_back(kv.first);
    for (std::uint64_t keep = 0; keep < (std::uint64_t{1} << defined.size()); ++keep) {
      std::map<Step, std::int64_t> here;
      for (std::size_t j = 0; j < defined.size(); ++j) {
        if (keep & (std::uint64_t{1} << j)) here[defined[j]] = there_times.at(defined[j]);
      }
      if (!time_rules_hold(here, there_times)) continue;
      smaller.emplace_back(here, fold_all(here, there_times));
    }

    const std::uint64_t limit = std::uint64_t{1} << voc_.atoms.size();
    for (std::uint64_t t = 0; t < limit; ++t) {
      if (!all_hold(total, t, t)) continue;
      bool minimal = true;
      for (const auto& [here_times, folded] : smaller) {
        const bool same_times = here_times.size() == there_times.size();
        // Walk every submask h of t, t itself included.
        for (std::uint64_t h = t;; h = (h - 1) & t) {
          if (!(same_times && h == t) && all_hold(folded, h, t)) {
            minimal = false;
            break;
          }
          if (h == 0) break;
        }
        if (!minimal) break;
      }
      if (!minimal) continue;
      Valuation v;
      v.times = there_times;
      for (std::size_t a = 0; a < voc_.atoms.size(); ++a) {
        if (t & (std::uint64_t{1} << a)) v.atoms.insert(voc_.atoms[a]);
      }
      models_.insert(std::move(v));
    }
  }

  const GroundProgram& program_;
  TimePoint nu_;
  Vocabulary voc_;
  std::map<StepAtom, int> index_;
  std::vector<std::size_t> time_only_;
  std::vector<std::size_t> mixed_;
  ModelSet<Valuation> models_;
};

}  // namespace

ModelSet<Valuation> enumerate_constraint_equilibrium_models_bounded(const GroundProgram& program, TimePoint nu,
                                                                    const HtcOptions& options) {
  return BoundedEnumerator(program, nu, options).run();
}

// ---------------------------------------------------------------------------
// Difference constraints

bool DiffSystem::holds(const std::map<Step, std::int64_t>& times) const {
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const DiffConstraintAtom& c) { return denotes_times(times, c); });
}

std::optional<Valuation> dc_feasible(const DiffSystem& system) {
  // x - y <= d reads as the lower bound y >= x - d. Starting every variable at
  // its least admissible value and raising bounds until nothing changes gives
  // the least solution; if raising goes on for more than |V| rounds, some cycle
  // keeps pushing and there is no solution.
  std::map<Step, std::int64_t> value;
  for (const auto& c : system.constraints) {
    value.emplace(c.x.step, 0);
    value.emplace(c.y.step, 0);
  }
  for (const auto& c : system.constraints) {
    if (c.kind == DiffConstraintAtom::Kind::Eq) {
      if (c.bound < 0) return std::nullopt;
      value[c.x.step] = std::max(value[c.x.step], c.bound);
    }
  }
  const std::size_t rounds = value.size() + 1;
  bool changed = true;
  for (std::size_t round = 0; changed; ++round) {
    if (round == rounds) return std::nullopt;
    changed = false;
    for (const auto& c : system.constraints) {
      if (c.kind != DiffConstraintAtom::Kind::DiffLeq) continue;
      const std::int64_t need = value[c.x.step] - c.bound;
      if (value[c.y.step] < need) {
        value[c.y.step] = need;
        changed = true;
      }
    }
  }
  for (const auto& c : system.constraints) {
    if (c.kind == DiffConstraintAtom::Kind::Eq && value[c.x.step] != c.bound) return std::nullopt;
  }
  return Valuation{{}, std::move(value)};
}

// ---------------------------------------------------------------------------
// Practical dc enumeration

namespace {

enum class RuleShape { Boolean, ConstraintFact, Guard };

// Guards are `:- B, not c.` with B Boolean; they require c whenever B holds.
RuleShape classify(const GroundRule& rule) {
  auto is_constraint = [](const GroundLiteral& l) { return std::holds_alternative<DiffConstraintAtom>(l.atom); };
  const auto head_c = std::count_if(rule.head.begin(), rule.head.end(), is_constraint);
  const auto body_c = std::count_if(rule.body.begin(), rule.body.end(), is_constraint);
  if (head_c == 0 && body_c == 0) return RuleShape::Boolean;
  if (head_c == 1 && rule.head.size() == 1 && !rule.head.front().negated && rule.body.empty()) {
    return RuleShape::ConstraintFact;
  }
  if (head_c == 0 && rule.head.empty() && body_c == 1) {
    const auto it = std::find_if(rule.body.begin(), rule.body.end(), is_constraint);
    if (it->negated) return RuleShape::Guard;
  }
  throw InputError("unsupported rule shape for the dc enumerator: " + to_string(rule));
}

bool boolean_body_holds(const GroundRule& rule, const std::set<StepAtom>& atoms) {
  for (const auto& lit : rule.body) {
    bool value;
    if (const auto* s = std::get_if<StepAtom>(&lit.atom)) {
      value = atoms.count(*s) > 0;
    } else if (const auto* c = std::get_if<Truth>(&lit.atom)) {
      value = c->value;
    } else {
      continue;
    }
    if (value == lit.negated) return false;
  }
  return true;
}

const DiffConstraintAtom& constraint_of(const GroundRule& rule) {
  for (const auto* part : {&rule.head, &rule.body}) {
    for (const auto& lit : *part) {
      if (const auto* c = std::get_if<DiffConstraintAtom>(&lit.atom)) return *c;
    }
  }
  throw InputError("rule has no constraint atom");
}

// Replaces constraint literals by their truth value under a fixed total timing.
GroundProgram fold_timing(const GroundProgram& program, const std::map<Step, std::int64_t>& times) {
  GroundProgram out = program;
  out.backend = Backend::Boolean;
  for (auto& rule : out.rules) {
    for (auto* part : {&rule.head, &rule.body}) {
      for (auto& lit : *part) {
        if (const auto* c = std::get_if<DiffConstraintAtom>(&lit.atom)) lit.atom = Truth{denotes_times(times, *c)};
      }
    }
  }
  return out;
}

}  // namespace

DiffSystem triggered_constraints(const GroundProgram& program, const std::set<StepAtom>& atoms) {
  DiffSystem system;
  for (const auto& rule : program.rules) {
    switch (classify(rule)) {
      case RuleShape::Boolean: break;
      case RuleShape::ConstraintFact: system.constraints.insert(constraint_of(rule)); break;
      case RuleShape::Guard:
        if (boolean_body_holds(rule, atoms)) system.constraints.insert(constraint_of(rule));
        break;
    }
  }
  return system;
}

ModelSet<Valuation> enumerate_dc_models(const GroundProgram& program, std::optional<TimePoint> nu_report,
                                        const HtcOptions& options) {
  GroundProgram boolean_part;
  boolean_part.lambda = program.lambda;
  for (const auto& rule : program.rules) {
    if (classify(rule) == RuleShape::Boolean) boolean_part.rules.push_back(rule);
  }
  SolverOptions solver;
  solver.atom_cap = options.atom_cap;
  const auto candidates = enumerate_equilibrium_models(boolean_part, solver);

  ModelSet<Valuation> models;
  for (const auto& candidate : candidates) {
    std::set<StepAtom> atoms;
    for (const auto& a : candidate) atoms.insert(std::get<StepAtom>(a));
    const DiffSystem system = triggered_constraints(program, atoms);
    const auto witness = dc_feasible(system);
    if (!witness) continue;

    std::vector<std::map<Step, std::int64_t>> timings;
    if (!nu_report) {
      timings.push_back(witness->times);
    } else {
      for_each_timing(program.lambda, *nu_report, [&](const TimingFunction& tau) {
        std::map<Step, std::int64_t> times;
        for (Step k = 0; k < tau.length(); ++k) times[k] = static_cast<std::int64_t>(tau[k]);
        if (system.holds(times)) timings.push_back(std::move(times));
      });
    }
    for (auto& times : timings) {
      // Minimality of the Boolean part under this timing.
      if (!is_equilibrium_model(fold_timing(program, times), candidate)) continue;
      models.insert(Valuation{atoms, std::move(times)});
    }
  }
  return models;
}

}  // namespace metac
