#include "metac/emit.hpp"

#include <json.hpp>
#include <sstream>

namespace metac {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string time_var(TimeVar v) { return "t(" + std::to_string(v.step) + ")"; }

std::string render_constraint(const DiffConstraintAtom& c) {
  if (c.kind == DiffConstraintAtom::Kind::Eq) {
    return "&sum{" + time_var(c.x) + "} = " + std::to_string(c.bound);
  }
  return "&sum{" + time_var(c.x) + " ; -" + time_var(c.y) + "} <= " + std::to_string(c.bound);
}

std::string render_literals(const std::vector<GroundLiteral>& lits, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) out += sep;
    if (lits[i].negated) out += "not ";
    out += render_atom(lits[i].atom);
  }
  return out;
}

std::string render(const std::vector<GroundLiteral>& head, const std::vector<GroundLiteral>& body) {
  std::string out = render_literals(head, ";");
  if (body.empty()) {
    // A solver needs something after `:-`; an empty rule is plain falsum.
    if (head.empty()) return ":- #true.";
    return out + ".";
  }
  if (!out.empty()) out += ' ';
  return out + ":- " + render_literals(body, ", ") + ".";
}

bool has_kind(const GroundProgram& program, auto pred) {
  for (const auto& r : program.rules) {
    for (const auto* part : {&r.head, &r.body}) {
      for (const auto& lit : *part) {
        if (pred(lit.atom)) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::string render_atom(const GroundAtom& atom) {
  return std::visit(
      [](const auto& a) -> std::string {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, StepAtom>) {
          return "o(" + a.base.str() + "," + std::to_string(a.step) + ")";
        } else if constexpr (std::is_same_v<A, TimeAtomBool>) {
          return "t(" + std::to_string(a.step) + "," + std::to_string(a.value) + ")";
        } else if constexpr (std::is_same_v<A, DiffConstraintAtom>) {
          return render_constraint(a);
        } else {
          return a.value ? "#true" : "#false";
        }
      },
      atom);
}

std::string render_rule(const GroundRule& rule) { return render(rule.head, rule.body); }

std::string emit_asp(const GroundProgram& program) {
  if (program.backend != Backend::Boolean ||
      has_kind(program, [](const GroundAtom& a) { return std::holds_alternative<DiffConstraintAtom>(a); })) {
    throw InputError("asp output needs a program compiled with the bool backend");
  }
  std::string out;
  for (const auto& r : program.rules) out += render_rule(r) + "\n";
  return out;
}

std::string emit_dc(const GroundProgram& program, bool head_shift) {
  if (program.backend != Backend::DifferenceConstraint ||
      has_kind(program, [](const GroundAtom& a) { return std::holds_alternative<TimeAtomBool>(a); })) {
    throw InputError("dc output needs a program compiled with the dc backend");
  }
  std::string out;
  for (const auto& r : program.rules) {
    if (head_shift && r.head.empty()) {
      std::vector<GroundLiteral> rest;
      std::vector<GroundLiteral> shifted;
      for (const auto& lit : r.body) {
        if (lit.negated && std::holds_alternative<DiffConstraintAtom>(lit.atom)) {
          shifted.push_back({lit.atom, false});
        } else {
          rest.push_back(lit);
        }
      }
      if (shifted.size() == 1) {
        out += render(shifted, rest) + "\n";
        continue;
      }
    }
    out += render_rule(r) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

ordered_json atom_json(const GroundAtom& atom) {
  return std::visit(
      [](const auto& a) -> ordered_json {
        using A = std::decay_t<decltype(a)>;
        ordered_json j;
        if constexpr (std::is_same_v<A, StepAtom>) {
          j["kind"] = "step";
          j["symbol"] = a.base.symbol;
          j["args"] = a.base.args;
          j["step"] = a.step;
        } else if constexpr (std::is_same_v<A, TimeAtomBool>) {
          j["kind"] = "tbool";
          j["step"] = a.step;
          j["value"] = a.value;
        } else if constexpr (std::is_same_v<A, DiffConstraintAtom>) {
          if (a.kind == DiffConstraintAtom::Kind::Eq) {
            j["kind"] = "eq";
            j["step"] = a.x.step;
            j["const"] = a.bound;
          } else {
            j["kind"] = "diffleq";
            j["x"] = a.x.step;
            j["y"] = a.y.step;
            j["bound"] = a.bound;
          }
        } else {
          j["kind"] = "const";
          j["value"] = a.value;
        }
        return j;
      },
      atom);
}

ordered_json literals_json(const std::vector<GroundLiteral>& lits) {
  ordered_json arr = ordered_json::array();
  for (const auto& lit : lits) {
    ordered_json l;
    l["neg"] = lit.negated;
    l["atom"] = atom_json(lit.atom);
    arr.push_back(std::move(l));
  }
  return arr;
}

GroundAtom atom_from_json(const ordered_json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "step") {
    return StepAtom{{j.at("symbol").get<std::string>(), j.at("args").get<std::vector<std::string>>()},
                    j.at("step").get<Step>()};
  }
  if (kind == "tbool") return TimeAtomBool{j.at("step").get<Step>(), j.at("value").get<TimePoint>()};
  if (kind == "eq") return DiffConstraintAtom::eq(TimeVar{j.at("step").get<Step>()}, j.at("const").get<std::int64_t>());
  if (kind == "diffleq") {
    return DiffConstraintAtom::diff_leq(TimeVar{j.at("x").get<Step>()}, TimeVar{j.at("y").get<Step>()},
                                        j.at("bound").get<std::int64_t>());
  }
  if (kind == "const") return Truth{j.at("value").get<bool>()};
  throw InputError("unknown atom kind '" + kind + "'");
}

std::vector<GroundLiteral> literals_from_json(const ordered_json& arr) {
  std::vector<GroundLiteral> out;
  for (const auto& l : arr) out.push_back({atom_from_json(l.at("atom")), l.at("neg").get<bool>()});
  return out;
}

}  // namespace

std::string emit_json(const GroundProgram& program) {
  ordered_json head;
  head["format"] = "metac-ground";
  head["version"] = 1;
  head["backend"] = backend_name(program.backend);
  head["lambda"] = program.lambda;
  head["nu"] = program.nu ? ordered_json(*program.nu) : ordered_json(nullptr);
  head["counts"] = {{"core", program.counts.core}, {"delta", program.counts.delta}, {"psi", program.counts.psi}};
  // One rule per line keeps large documents diffable.
  std::string text = head.dump();
  text.pop_back();
  text += ",\"rules\":[";
  for (std::size_t i = 0; i < program.rules.size(); ++i) {
    ordered_json r;
    r["head"] = literals_json(program.rules[i].head);
    r["body"] = literals_json(program.rules[i].body);
    text += (i ? ",\n" : "\n") + r.dump();
  }
  text += program.rules.empty() ? "]}\n" : "\n]}\n";
  return text;
}

GroundProgram read_json(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    if (j.at("format") != "metac-ground") throw InputError("not a metac-ground document");
    if (j.at("version") != 1) throw InputError("unsupported metac-ground version " + j.at("version").dump());
    GroundProgram out;
    out.backend = parse_backend(j.at("backend").get<std::string>());
    if (j.contains("lambda")) out.lambda = j.at("lambda").get<Step>();
    if (j.contains("nu") && !j.at("nu").is_null()) out.nu = j.at("nu").get<TimePoint>();
    if (j.contains("counts")) {
      const auto& c = j.at("counts");
      out.counts = {c.at("core").get<std::size_t>(), c.at("delta").get<std::size_t>(),
                    c.at("psi").get<std::size_t>()};
    }
    for (const auto& r : j.at("rules")) {
      out.rules.push_back({literals_from_json(r.at("head")), literals_from_json(r.at("body"))});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed metac-ground document: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Statistics

SizeReport stats(const GroundProgram& program) {
  SizeReport rep;
  rep.backend = program.backend;
  rep.sections = program.counts;
  rep.emitted_rules = program.rules.size();
  std::set<GroundAtom> seen;
  for (const auto& r : program.rules) {
    for (const auto* part : {&r.head, &r.body}) {
      for (const auto& lit : *part) {
        if (std::holds_alternative<DiffConstraintAtom>(lit.atom)) ++rep.constraint_occurrences;
        if (std::holds_alternative<Truth>(lit.atom) || !seen.insert(lit.atom).second) continue;
        if (std::holds_alternative<StepAtom>(lit.atom)) ++rep.step_atoms;
        if (std::holds_alternative<TimeAtomBool>(lit.atom)) ++rep.time_atoms;
        if (std::holds_alternative<DiffConstraintAtom>(lit.atom)) ++rep.constraint_atoms;
      }
    }
  }
  return rep;
}

std::string SizeReport::json() const {
  ordered_json j;
  j["format"] = "metac-stats";
  j["version"] = 1;
  j["backend"] = backend_name(backend);
  j["rules"] = {{"core", sections.core},
                {"delta", sections.delta},
                {"psi", sections.psi},
                {"total", sections.total()},
                {"emitted", emitted_rules}};
  j["atoms"] = {{"step", step_atoms}, {"time", time_atoms}, {"constraint", constraint_atoms}};
  j["constraint_occurrences"] = constraint_occurrences;
  return j.dump(2) + "\n";
}

std::string SizeReport::table() const {
  std::ostringstream out;
  out << "backend            " << backend_name(backend) << "\n"
      << "rules core         " << sections.core << "\n"
      << "rules delta        " << sections.delta << "\n"
      << "rules psi          " << sections.psi << "\n"
      << "rules total        " << sections.total() << "\n"
      << "rules emitted      " << emitted_rules << "\n"
      << "step atoms         " << step_atoms << "\n"
      << "time atoms         " << time_atoms << "\n"
      << "constraint atoms   " << constraint_atoms << "\n"
      << "constraint uses    " << constraint_occurrences << "\n";
  return out.str();
}

}  // namespace metac
