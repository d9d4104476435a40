// Core domain types for metric logic programs and their ground translations.
//
// Everything here is an immutable value type with structural equality and a
// total order, so collections of them can be kept in canonical (sorted) form.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace metac {

using Step = std::uint32_t;
using TimePoint = std::uint64_t;

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported input (programs, traces, interchange files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A brute-force routine was asked to work beyond its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Metric programs

/// A ground atom `symbol(arg, ...)`.
struct AtomName {
  std::string symbol;
  std::vector<std::string> args;

  bool operator==(const AtomName&) const = default;
  auto operator<=>(const AtomName&) const = default;

  std::string str() const;
};

/// Half-open window [lower, upper); an absent upper bound stands for omega.
struct Interval {
  std::uint64_t lower = 0;
  std::optional<std::uint64_t> upper;

  static Interval unbounded(std::uint64_t lower = 0) { return {lower, std::nullopt}; }
  static Interval bounded(std::uint64_t lower, std::uint64_t upper) { return {lower, upper}; }

  bool is_unbounded() const { return !upper.has_value(); }
  bool is_empty() const { return upper.has_value() && lower >= *upper; }
  bool contains(std::uint64_t d) const { return d >= lower && (!upper || d < *upper); }
  /// Every bound multiplied by `factor`; omega stays omega.
  Interval scaled(std::uint64_t factor) const;

  bool operator==(const Interval&) const = default;
  auto operator<=>(const Interval&) const = default;

  std::string str() const;
};

bool interval_contains(const Interval& interval, std::uint64_t d);

/// A body atom: a proper atom or one of the markers for the initial and final state.
struct BodyAtom {
  enum class Kind { Atom, Initial, Final };
  Kind kind = Kind::Atom;
  AtomName atom;  // empty unless kind == Atom

  static BodyAtom of(AtomName a) { return {Kind::Atom, std::move(a)}; }
  static BodyAtom initial() { return {Kind::Initial, {}}; }
  static BodyAtom final() { return {Kind::Final, {}}; }

  bool operator==(const BodyAtom&) const = default;
  auto operator<=>(const BodyAtom&) const = default;
};

template <class X>
struct Literal {
  X atom;
  bool negated = false;

  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

template <class X>
Literal<X> pos(X x) {
  return {std::move(x), false};
}
template <class X>
Literal<X> neg(X x) {
  return {std::move(x), true};
}

/// Disjunction of literals; the empty disjunction is falsum.
using DisjunctiveHead = std::vector<Literal<AtomName>>;

/// Head of the form next_I a.
struct NextHead {
  Interval interval;
  AtomName atom;

  bool operator==(const NextHead&) const = default;
  auto operator<=>(const NextHead&) const = default;
};

/// A rule `head <- body`, implicitly under the always operator.
struct MetricRule {
  std::variant<DisjunctiveHead, NextHead> head;
  std::vector<Literal<BodyAtom>> body;

  bool is_next() const { return std::holds_alternative<NextHead>(head); }
  const NextHead& next_head() const { return std::get<NextHead>(head); }
  const DisjunctiveHead& disjunction() const { return std::get<DisjunctiveHead>(head); }

  bool operator==(const MetricRule&) const = default;
};

using AtomSet = std::set<AtomName>;

struct MetricProgram {
  std::vector<MetricRule> rules;

  /// All atoms occurring in heads and bodies; the I/F markers are not atoms.
  AtomSet alphabet() const;

  bool operator==(const MetricProgram&) const = default;
};

AtomSet program_alphabet(const MetricProgram& program);

// ---------------------------------------------------------------------------
// Ground target programs

/// a_k: the value of atom a at trace position k.
struct StepAtom {
  AtomName base;
  Step step = 0;

  bool operator==(const StepAtom&) const = default;
  auto operator<=>(const StepAtom&) const = default;
};

/// t_{k,d}: "the state at position k happens at time d".
struct TimeAtomBool {
  Step step = 0;
  TimePoint value = 0;

  bool operator==(const TimeAtomBool&) const = default;
  auto operator<=>(const TimeAtomBool&) const = default;
};

/// Integer variable t_k holding the time of position k.
struct TimeVar {
  Step step = 0;

  bool operator==(const TimeVar&) const = default;
  auto operator<=>(const TimeVar&) const = default;
};

/// `x = c` or `x - y <= d`. For Eq, `y` mirrors `x` and `bound` is the constant.
struct DiffConstraintAtom {
  enum class Kind { Eq, DiffLeq };
  Kind kind = Kind::DiffLeq;
  TimeVar x;
  TimeVar y;
  std::int64_t bound = 0;

  static DiffConstraintAtom eq(TimeVar x, std::int64_t value) { return {Kind::Eq, x, x, value}; }
  static DiffConstraintAtom diff_leq(TimeVar x, TimeVar y, std::int64_t d) {
    return {Kind::DiffLeq, x, y, d};
  }

  bool operator==(const DiffConstraintAtom&) const = default;
  auto operator<=>(const DiffConstraintAtom&) const = default;
};

/// Verum/falsum left in place when translation runs without simplification.
struct Truth {
  bool value = true;

  bool operator==(const Truth&) const = default;
  auto operator<=>(const Truth&) const = default;
};

using GroundAtom = std::variant<StepAtom, TimeAtomBool, DiffConstraintAtom, Truth>;
using GroundLiteral = Literal<GroundAtom>;

/// Disjunctive head (empty = falsum) and conjunctive body (empty = verum).
struct GroundRule {
  std::vector<GroundLiteral> head;
  std::vector<GroundLiteral> body;

  bool is_fact() const { return body.empty() && head.size() == 1 && !head.front().negated; }

  bool operator==(const GroundRule&) const = default;
  auto operator<=>(const GroundRule&) const = default;
};

enum class Backend { Boolean, DifferenceConstraint };

std::string backend_name(Backend backend);  // "bool" / "dc"
Backend parse_backend(const std::string& name);

/// Rule counts of the three program parts before simplification.
struct SectionCounts {
  std::size_t core = 0;
  std::size_t delta = 0;
  std::size_t psi = 0;

  std::size_t total() const { return core + delta + psi; }
  bool operator==(const SectionCounts&) const = default;
};

struct GroundProgram {
  Backend backend = Backend::Boolean;
  Step lambda = 1;
  std::optional<TimePoint> nu;
  std::vector<GroundRule> rules;
  SectionCounts counts;

  void append(const GroundProgram& other);

  bool operator==(const GroundProgram&) const = default;
};

// ---------------------------------------------------------------------------
// Traces

/// Strictly increasing sequence of time points starting at 0.
class TimingFunction {
 public:
  /// Throws InputError unless `values` is non-empty, starts at 0 and is strictly increasing.
  explicit TimingFunction(std::vector<TimePoint> values);

  /// The identity timing 0, 1, ..., length-1.
  static TimingFunction identity(Step length);

  const std::vector<TimePoint>& values() const { return values_; }
  Step length() const { return static_cast<Step>(values_.size()); }
  TimePoint operator[](Step k) const { return values_[k]; }
  TimePoint last() const { return values_.back(); }

  bool operator==(const TimingFunction&) const = default;
  auto operator<=>(const TimingFunction&) const = default;

 private:
  std::vector<TimePoint> values_;
};

/// Calls `visit` for every timing function of length `lambda` with last value <= nu,
/// in lexicographic order.
template <class Visit>
void for_each_timing(Step lambda, TimePoint nu, Visit&& visit);

/// Timed HT-trace: here/there traces of equal length plus a timing function.
class TimedTrace {
 public:
  /// Throws InputError if lengths differ or some here-state is not a subset of its there-state.
  TimedTrace(std::vector<AtomSet> here, std::vector<AtomSet> there, TimingFunction tau);
  static TimedTrace total(std::vector<AtomSet> states, TimingFunction tau);

  const std::vector<AtomSet>& here() const { return here_; }
  const std::vector<AtomSet>& there() const { return there_; }
  const TimingFunction& tau() const { return tau_; }
  Step length() const { return tau_.length(); }
  bool is_total() const { return here_ == there_; }

  bool operator==(const TimedTrace&) const = default;
  std::strong_ordering operator<=>(const TimedTrace& other) const;

 private:
  std::vector<AtomSet> here_;
  std::vector<AtomSet> there_;
  TimingFunction tau_;
};

/// Canonically ordered collection of models.
template <class Model>
using ModelSet = std::set<Model>;

// ---------------------------------------------------------------------------
// Rendering helpers used in diagnostics, reports and the CLI.

std::string to_string(const StepAtom& a);
std::string to_string(const TimeAtomBool& a);
std::string to_string(const DiffConstraintAtom& a);
std::string to_string(const GroundAtom& a);
std::string to_string(const GroundRule& r);
std::string to_string(const TimingFunction& tau);
/// One `step k: {atoms} @ time d` line per position.
std::string to_string(const TimedTrace& trace);

// ---------------------------------------------------------------------------

template <class Visit>
void for_each_timing(Step lambda, TimePoint nu, Visit&& visit) {
  if (lambda == 0) return;
  std::vector<TimePoint> values(lambda, 0);
  // Position k needs at least k time units and leaves room for the remaining positions.
  auto rec = [&](auto&& self, Step k) -> void {
    if (k == lambda) {
      visit(TimingFunction(values));
      return;
    }
    const TimePoint max_here = nu - (lambda - 1 - k);
    for (TimePoint d = values[k - 1] + 1; d <= max_here; ++d) {
      values[k] = d;
      self(self, k + 1);
    }
  };
  if (nu + 1 < lambda) return;
  rec(rec, 1);
}

}  // namespace metac
