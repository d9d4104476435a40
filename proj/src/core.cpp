#include "metac/core.hpp"

#include <sstream>

namespace metac {

std::string AtomName::str() const {
  if (args.empty()) return symbol;
  std::string out = symbol + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  out += ')';
  return out;
}

Interval Interval::scaled(std::uint64_t factor) const {
  Interval out{lower * factor, std::nullopt};
  if (upper) out.upper = *upper * factor;
  return out;
}

std::string Interval::str() const {
  return "[" + std::to_string(lower) + "," + (upper ? std::to_string(*upper) : std::string("w")) + ")";
}

bool interval_contains(const Interval& interval, std::uint64_t d) { return interval.contains(d); }

AtomSet MetricProgram::alphabet() const {
  AtomSet out;
  for (const auto& rule : rules) {
    if (rule.is_next()) {
      out.insert(rule.next_head().atom);
    } else {
      for (const auto& lit : rule.disjunction()) out.insert(lit.atom);
    }
    for (const auto& lit : rule.body) {
      if (lit.atom.kind == BodyAtom::Kind::Atom) out.insert(lit.atom.atom);
    }
  }
  return out;
}

AtomSet program_alphabet(const MetricProgram& program) { return program.alphabet(); }

std::string backend_name(Backend backend) {
  return backend == Backend::Boolean ? "bool" : "dc";
}

Backend parse_backend(const std::string& name) {
  if (name == "bool") return Backend::Boolean;
  if (name == "dc") return Backend::DifferenceConstraint;
  throw InputError("unknown backend '" + name + "' (expected bool or dc)");
}

void GroundProgram::append(const GroundProgram& other) {
  rules.insert(rules.end(), other.rules.begin(), other.rules.end());
  counts.core += other.counts.core;
  counts.delta += other.counts.delta;
  counts.psi += other.counts.psi;
}

TimingFunction::TimingFunction(std::vector<TimePoint> values) : values_(std::move(values)) {
  if (values_.empty()) throw InputError("timing function must cover at least one position");
  if (values_.front() != 0) throw InputError("timing function must start at 0");
  for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
    if (values_[k] >= values_[k + 1]) {
      throw InputError("timing function must be strictly increasing (position " + std::to_string(k) +
                       ")");
    }
  }
}

TimingFunction TimingFunction::identity(Step length) {
  std::vector<TimePoint> values(length);
  for (Step k = 0; k < length; ++k) values[k] = k;
  return TimingFunction(std::move(values));
}

TimedTrace::TimedTrace(std::vector<AtomSet> here, std::vector<AtomSet> there, TimingFunction tau)
    : here_(std::move(here)), there_(std::move(there)), tau_(std::move(tau)) {
  if (here_.size() != there_.size() || here_.size() != tau_.length()) {
    throw InputError("timed trace components must have equal length");
  }
  for (std::size_t k = 0; k < here_.size(); ++k) {
    for (const auto& a : here_[k]) {
      if (!there_[k].count(a)) {
        throw InputError("here-state " + std::to_string(k) + " is not a subset of its there-state");
      }
    }
  }
}

TimedTrace TimedTrace::total(std::vector<AtomSet> states, TimingFunction tau) {
  auto copy = states;
  return TimedTrace(std::move(copy), std::move(states), std::move(tau));
}

std::strong_ordering TimedTrace::operator<=>(const TimedTrace& other) const {
  if (auto c = there_ <=> other.there_; c != 0) return c;
  if (auto c = tau_ <=> other.tau_; c != 0) return c;
  return here_ <=> other.here_;
}

std::string to_string(const StepAtom& a) { return a.base.str() + "_" + std::to_string(a.step); }

std::string to_string(const TimeAtomBool& a) {
  return "t_" + std::to_string(a.step) + "," + std::to_string(a.value);
}

std::string to_string(const DiffConstraintAtom& a) {
  if (a.kind == DiffConstraintAtom::Kind::Eq) {
    return "t" + std::to_string(a.x.step) + " = " + std::to_string(a.bound);
  }
  return "t" + std::to_string(a.x.step) + " - t" + std::to_string(a.y.step) + " <= " +
         std::to_string(a.bound);
}

std::string to_string(const GroundAtom& a) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Truth>) {
          return x.value ? "#true" : "#false";
        } else {
          return to_string(x);
        }
      },
      a);
}

namespace {
std::string join_literals(const std::vector<GroundLiteral>& lits, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) out += sep;
    if (lits[i].negated) out += "not ";
    out += to_string(lits[i].atom);
  }
  return out;
}
}  // namespace

std::string to_string(const GroundRule& r) {
  std::string out = join_literals(r.head, " ; ");
  if (!r.body.empty()) out += (out.empty() ? ":- " : " :- ") + join_literals(r.body, ", ");
  return out + ".";
}

std::string to_string(const TimingFunction& tau) {
  std::string out = "(";
  for (Step k = 0; k < tau.length(); ++k) {
    if (k) out += ',';
    out += std::to_string(tau[k]);
  }
  return out + ")";
}

std::string to_string(const TimedTrace& trace) {
  std::ostringstream out;
  for (Step k = 0; k < trace.length(); ++k) {
    out << "step " << k << ": {";
    bool first = true;
    for (const auto& a : trace.there()[k]) {
      out << (first ? "" : ", ") << a.str();
      if (!trace.here()[k].count(a)) out << "?";
      first = false;
    }
    out << "} @ time " << trace.tau()[k] << "\n";
  }
  return out.str();
}

}  // namespace metac
