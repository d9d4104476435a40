#include "metac/ht_solver.hpp"

#include <algorithm>
#include <map>

namespace metac {

namespace {

void require_boolean(const GroundAtom& atom) {
  if (std::holds_alternative<DiffConstraintAtom>(atom)) {
    throw InputError("difference constraint " + to_string(atom) + " in a Boolean program");
  }
}

bool atom_in(const GroundAtom& atom, const Interpretation& world) {
  if (const auto* c = std::get_if<Truth>(&atom)) return c->value;
  require_boolean(atom);
  return world.count(atom) > 0;
}

// Literal at one world; `not a` is a -> bot and so must fail at both worlds.
bool literal_at(const GroundLiteral& lit, const Interpretation& world, const Interpretation& there) {
  if (!lit.negated) return atom_in(lit.atom, world);
  return !atom_in(lit.atom, world) && !atom_in(lit.atom, there);
}

bool rule_at(const GroundRule& rule, const Interpretation& world, const Interpretation& there) {
  for (const auto& lit : rule.body) {
    if (!literal_at(lit, world, there)) return true;
  }
  for (const auto& lit : rule.head) {
    if (literal_at(lit, world, there)) return true;
  }
  return false;
}

}  // namespace

bool ht_satisfies(const Interpretation& here, const Interpretation& there, const GroundRule& rule) {
  return rule_at(rule, here, there) && rule_at(rule, there, there);
}

bool ht_satisfies(const Interpretation& here, const Interpretation& there, const GroundProgram& program) {
  for (const auto& r : program.rules) {
    if (!ht_satisfies(here, there, r)) return false;
  }
  return true;
}

std::vector<GroundAtom> boolean_atoms(const GroundProgram& program) {
  std::set<GroundAtom> atoms;
  auto add = [&](const GroundLiteral& lit) {
    if (std::holds_alternative<Truth>(lit.atom)) return;
    require_boolean(lit.atom);
    atoms.insert(lit.atom);
  };
  for (const auto& r : program.rules) {
    for (const auto& l : r.head) add(l);
    for (const auto& l : r.body) add(l);
  }
  return {atoms.begin(), atoms.end()};
}

namespace {

// Rule over atom indices with constants folded away.
struct IndexedRule {
  std::vector<int> head_pos;
  std::vector<int> head_neg;
  std::vector<int> body_pos;
  std::vector<int> body_neg;
};

struct IndexedProgram {
  std::vector<GroundAtom> atoms;
  std::vector<IndexedRule> rules;
};

IndexedProgram index_program(const GroundProgram& program) {
  IndexedProgram out;
  out.atoms = boolean_atoms(program);
  std::map<GroundAtom, int> index;
  for (std::size_t i = 0; i < out.atoms.size(); ++i) index[out.atoms[i]] = static_cast<int>(i);
  for (const auto& r : program.rules) {
    IndexedRule ir;
    bool dropped = false;
    for (const auto& lit : r.head) {
      if (const auto* c = std::get_if<Truth>(&lit.atom)) {
        if (c->value != lit.negated) dropped = true;
        continue;
      }
      (lit.negated ? ir.head_neg : ir.head_pos).push_back(index.at(lit.atom));
    }
    for (const auto& lit : r.body) {
      if (const auto* c = std::get_if<Truth>(&lit.atom)) {
        if (c->value == lit.negated) dropped = true;
        continue;
      }
      (lit.negated ? ir.body_neg : ir.body_pos).push_back(index.at(lit.atom));
    }
    if (!dropped) out.rules.push_back(std::move(ir));
  }
  return out;
}

// Plain DPLL over clauses of signed 1-based literals.
class Dpll {
 public:
  Dpll(int vars, std::vector<std::vector<int>> clauses) : value_(vars, 0), clauses_(std::move(clauses)) {}

  bool solve() { return search(); }

 private:
  int lit_value(int lit) const {
    const int v = value_[std::abs(lit) - 1];
    return lit > 0 ? v : -v;
  }

  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& clause : clauses_) {
        int unassigned = 0;
        int last = 0;
        bool sat = false;
        for (int lit : clause) {
          const int v = lit_value(lit);
          if (v > 0) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++unassigned;
            last = lit;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          value_[std::abs(last) - 1] = last > 0 ? 1 : -1;
          trail.push_back(std::abs(last) - 1);
          changed = true;
        }
      }
    }
    return true;
  }

  bool search() {
    std::vector<int> trail;
    auto undo = [&] {
      for (int v : trail) value_[v] = 0;
    };
    if (!propagate(trail)) {
      undo();
      return false;
    }
    const auto it = std::find(value_.begin(), value_.end(), 0);
    if (it == value_.end()) return true;
    const auto var = static_cast<std::size_t>(it - value_.begin());
    for (int choice : {-1, 1}) {
      value_[var] = choice;
      if (search()) return true;
      value_[var] = 0;
    }
    undo();
    return false;
  }

  std::vector<int> value_;
  std::vector<std::vector<int>> clauses_;
};

// True iff some H strictly inside `there` satisfies the reduct of the program wrt `there`.
bool has_smaller_model(const IndexedProgram& prog, const std::vector<bool>& there) {
  std::vector<int> var(prog.atoms.size(), -1);
  int count = 0;
  for (std::size_t a = 0; a < there.size(); ++a) {
    if (there[a]) var[a] = count++;
  }
  if (count == 0) return false;
  std::vector<std::vector<int>> clauses;
  for (const auto& r : prog.rules) {
    // Rules whose negative part is false in T, or whose positive body leaves T, hold trivially.
    if (std::any_of(r.body_neg.begin(), r.body_neg.end(), [&](int a) { return there[a]; })) continue;
    if (std::any_of(r.head_neg.begin(), r.head_neg.end(), [&](int a) { return !there[a]; })) continue;
    if (std::any_of(r.body_pos.begin(), r.body_pos.end(), [&](int a) { return !there[a]; })) continue;
    std::vector<int> clause;
    for (int a : r.head_pos) {
      if (there[a]) clause.push_back(var[a] + 1);
    }
    for (int a : r.body_pos) clause.push_back(-(var[a] + 1));
    clauses.push_back(std::move(clause));
  }
  std::vector<int> strict;
  for (int v = 0; v < count; ++v) strict.push_back(-(v + 1));
  clauses.push_back(std::move(strict));
  return Dpll(count, std::move(clauses)).solve();
}

bool classical_model(const IndexedProgram& prog, const std::vector<bool>& t) {
  for (const auto& r : prog.rules) {
    const bool body = std::all_of(r.body_pos.begin(), r.body_pos.end(), [&](int a) { return t[a]; }) &&
                      std::none_of(r.body_neg.begin(), r.body_neg.end(), [&](int a) { return t[a]; });
    if (!body) continue;
    const bool head = std::any_of(r.head_pos.begin(), r.head_pos.end(), [&](int a) { return t[a]; }) ||
                      std::any_of(r.head_neg.begin(), r.head_neg.end(), [&](int a) { return !t[a]; });
    if (!head) return false;
  }
  return true;
}

// Backtracking over atom values. Besides unit propagation on each rule read
// as a clause, an atom is forced false once no rule can still support it
// (stable models are supported models). Per-rule counters keep both checks
// constant-time, which matters for the wide disjunctions of timing rules.
class StableSearch {
 public:
  StableSearch(const IndexedProgram& prog, std::optional<std::size_t> limit)
      : prog_(prog), limit_(limit), value_(prog.atoms.size(), kUnset), occurs_(prog.atoms.size()),
        supports_(prog.atoms.size()), counters_(prog.rules.size()) {
    for (std::size_t r = 0; r < prog.rules.size(); ++r) {
      const auto& rule = prog.rules[r];
      const int ri = static_cast<int>(r);
      for (int a : rule.head_pos) occurs_[a].push_back({ri, Role::HeadPos});
      for (int a : rule.head_neg) occurs_[a].push_back({ri, Role::HeadNeg});
      for (int a : rule.body_pos) occurs_[a].push_back({ri, Role::BodyPos});
      for (int a : rule.body_neg) occurs_[a].push_back({ri, Role::BodyNeg});
      counters_[r].unassigned = static_cast<int>(rule.head_pos.size() + rule.head_neg.size() +
                                                 rule.body_pos.size() + rule.body_neg.size());
      for (int a : rule.head_pos) supports_[a].push_back(ri);
    }
    // Decide atoms position by position: later states mostly follow from
    // earlier ones by propagation.
    order_.resize(prog.atoms.size());
    for (std::size_t a = 0; a < order_.size(); ++a) order_[a] = static_cast<int>(a);
    auto position = [&](int a) -> std::pair<Step, int> {
      const GroundAtom& atom = prog.atoms[a];
      if (const auto* s = std::get_if<StepAtom>(&atom)) return {s->step, 0};
      if (const auto* t = std::get_if<TimeAtomBool>(&atom)) return {t->step, 1};
      return {0, 2};
    };
    std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) { return position(x) < position(y); });
  }

  ModelSet<Interpretation> run() {
    std::vector<int> all_rules(prog_.rules.size());
    for (std::size_t r = 0; r < all_rules.size(); ++r) all_rules[r] = static_cast<int>(r);
    std::vector<int> all_atoms(prog_.atoms.size());
    for (std::size_t a = 0; a < all_atoms.size(); ++a) all_atoms[a] = static_cast<int>(a);
    search(all_rules, all_atoms);
    return std::move(models_);
  }

 private:
  static constexpr signed char kUnset = -1;

  // Where an atom occurs in a rule; the rule, read as a clause, is satisfied
  // by that occurrence when the atom takes the value `satisfying(role)`.
  enum class Role : std::uint8_t { HeadPos, HeadNeg, BodyPos, BodyNeg };
  static bool satisfying(Role role) { return role == Role::HeadPos || role == Role::BodyNeg; }

  struct Occurrence {
    int rule;
    Role role;
  };

  struct Counters {
    int unassigned = 0;
    int body_false = 0;     // satisfied body occurrences
    int head_true = 0;      // true positive head atoms
    int head_neg_false = 0; // false negated head atoms
    int satisfied() const { return body_false + head_true + head_neg_false; }
  };

  int& counter(Counters& c, Role role) {
    switch (role) {
      case Role::HeadPos: return c.head_true;
      case Role::HeadNeg: return c.head_neg_false;
      default: return c.body_false;
    }
  }

  bool is_true(int a) const { return value_[a] == 1; }
  bool is_false(int a) const { return value_[a] == 0; }

  bool can_support(int r, int atom) const {
    const Counters& c = counters_[r];
    if (c.body_false > 0) return false;
    const IndexedRule& rule = prog_.rules[r];
    int own_true = 0;
    if (is_true(atom)) own_true = static_cast<int>(std::count(rule.head_pos.begin(), rule.head_pos.end(), atom));
    if (c.head_true - own_true > 0) return false;
    if (c.head_neg_false == 0) return true;
    return std::none_of(rule.head_neg.begin(), rule.head_neg.end(), [&](int x) { return x != atom && is_false(x); });
  }

  void assign(int a, bool v, std::vector<int>& trail, std::vector<int>& rules, std::vector<int>& atoms) {
    value_[a] = v ? 1 : 0;
    trail.push_back(a);
    for (const auto& occ : occurs_[a]) {
      Counters& c = counters_[occ.rule];
      --c.unassigned;
      if (satisfying(occ.role) == v) {
        // The rule may no longer support the other atoms in its head.
        if (++counter(c, occ.role) <= 2) {
          for (int h : prog_.rules[occ.rule].head_pos) {
            if (h != a) atoms.push_back(h);
          }
          if (occ.role == Role::HeadPos) atoms.push_back(a);
        }
      } else if (c.satisfied() == 0 && c.unassigned <= 1) {
        rules.push_back(occ.rule);
      }
    }
  }

  void unassign(int a) {
    const bool v = value_[a] == 1;
    for (const auto& occ : occurs_[a]) {
      Counters& c = counters_[occ.rule];
      ++c.unassigned;
      if (satisfying(occ.role) == v) --counter(c, occ.role);
    }
    value_[a] = kUnset;
  }

  // The only unassigned literal of an otherwise falsified clause.
  std::pair<int, bool> unit_of(int r) const {
    const IndexedRule& rule = prog_.rules[r];
    for (int a : rule.head_pos) if (value_[a] == kUnset) return {a, true};
    for (int a : rule.head_neg) if (value_[a] == kUnset) return {a, false};
    for (int a : rule.body_pos) if (value_[a] == kUnset) return {a, false};
    for (int a : rule.body_neg) if (value_[a] == kUnset) return {a, true};
    return {-1, false};
  }

  // Returns false on conflict.
  bool propagate(std::vector<int> rules, std::vector<int> atoms, std::vector<int>& trail) {
    while (!rules.empty() || !atoms.empty()) {
      if (!rules.empty()) {
        const int r = rules.back();
        rules.pop_back();
        const Counters& c = counters_[r];
        if (c.satisfied() > 0) continue;
        if (c.unassigned == 0) return false;
        if (c.unassigned == 1) {
          const auto [a, v] = unit_of(r);
          // The same atom may sit in the clause twice with opposite signs.
          if (value_[a] == kUnset) assign(a, v, trail, rules, atoms);
        }
        continue;
      }
      const int a = atoms.back();
      atoms.pop_back();
      if (is_false(a)) continue;
      const bool supported =
          std::any_of(supports_[a].begin(), supports_[a].end(), [&](int r) { return can_support(r, a); });
      if (supported) continue;
      if (is_true(a)) return false;
      assign(a, false, trail, rules, atoms);
    }
    return true;
  }

  bool done() const { return limit_ && models_.size() >= *limit_; }

  void undo(std::vector<int>& trail) {
    for (auto it = trail.rbegin(); it != trail.rend(); ++it) unassign(*it);
    trail.clear();
  }

  void search(std::vector<int> rules, std::vector<int> atoms) {
    std::vector<int> trail;
    if (propagate(std::move(rules), std::move(atoms), trail)) {
      const auto it = std::find_if(order_.begin(), order_.end(), [&](int x) { return value_[x] == kUnset; });
      if (it == order_.end()) {
        leaf();
      } else {
        const int a = *it;
        for (bool v : {false, true}) {
          if (done()) break;
          std::vector<int> next_rules;
          std::vector<int> next_atoms;
          std::vector<int> branch_trail;
          assign(a, v, branch_trail, next_rules, next_atoms);
          // The decided atom's own support and rules are rechecked as well.
          next_atoms.push_back(a);
          search(std::move(next_rules), std::move(next_atoms));
          undo(branch_trail);
        }
      }
    }
    undo(trail);
  }

  void leaf() {
    std::vector<bool> there(value_.size());
    for (std::size_t a = 0; a < value_.size(); ++a) there[a] = value_[a] == 1;
    if (!classical_model(prog_, there)) return;
    if (has_smaller_model(prog_, there)) return;
    Interpretation model;
    for (std::size_t a = 0; a < there.size(); ++a) {
      if (there[a]) model.insert(prog_.atoms[a]);
    }
    models_.insert(std::move(model));
  }

  const IndexedProgram& prog_;
  std::optional<std::size_t> limit_;
  std::vector<signed char> value_;
  std::vector<std::vector<Occurrence>> occurs_;
  std::vector<std::vector<int>> supports_;
  std::vector<Counters> counters_;
  std::vector<int> order_;
  ModelSet<Interpretation> models_;
};

}  // namespace

ModelSet<Interpretation> enumerate_equilibrium_models(const GroundProgram& program, const SolverOptions& options) {
  const IndexedProgram prog = index_program(program);
  if (prog.atoms.size() > options.atom_cap) {
    throw CapExceeded("program has " + std::to_string(prog.atoms.size()) +
                      " Boolean atoms, above the cap of " + std::to_string(options.atom_cap) +
                      " (raise it with --atom-cap)");
  }
  if (options.model_limit && *options.model_limit == 0) return {};
  return StableSearch(prog, options.model_limit).run();
}

ModelSet<Interpretation> enumerate_equilibrium_models_bruteforce(const GroundProgram& program) {
  const auto atoms = boolean_atoms(program);
  if (atoms.size() > 16) {
    throw CapExceeded("brute-force enumeration is limited to 16 atoms, program has " +
                      std::to_string(atoms.size()));
  }
  auto subset = [&](std::uint32_t mask) {
    Interpretation out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (mask & (1u << i)) out.insert(atoms[i]);
    }
    return out;
  };
  ModelSet<Interpretation> models;
  const std::uint32_t limit = 1u << atoms.size();
  for (std::uint32_t t = 0; t < limit; ++t) {
    const Interpretation there = subset(t);
    if (!ht_satisfies(there, there, program)) continue;
    bool minimal = true;
    for (std::uint32_t h = 0; h < limit && minimal; ++h) {
      if ((h & t) != h || h == t) continue;
      if (ht_satisfies(subset(h), there, program)) minimal = false;
    }
    if (minimal) models.insert(there);
  }
  return models;
}

bool is_equilibrium_model(const GroundProgram& program, const Interpretation& there) {
  const IndexedProgram prog = index_program(program);
  std::vector<bool> t(prog.atoms.size(), false);
  std::size_t found = 0;
  for (std::size_t a = 0; a < prog.atoms.size(); ++a) {
    if (there.count(prog.atoms[a])) {
      t[a] = true;
      ++found;
    }
  }
  // Atoms outside the program can never be derived.
  if (found != there.size()) return false;
  return classical_model(prog, t) && !has_smaller_model(prog, t);
}

}  // namespace metac
