// Metric temporal here-and-there: satisfaction over timed HT-traces and a
// bounded enumerator of metric equilibrium models. This is the reference
// semantics every translation is checked against, so it follows the
// satisfaction clauses literally and avoids any translation machinery.

#pragma once

#include <memory>

#include "metac/core.hpp"

namespace metac {

class MetricFormula {
 public:
  enum class Kind { Bot, Atom, Initial, And, Or, Impl, Next, Always, Eventually };

  static MetricFormula bot();
  static MetricFormula atom(AtomName a);
  static MetricFormula initial();
  static MetricFormula conj(MetricFormula lhs, MetricFormula rhs);
  static MetricFormula disj(MetricFormula lhs, MetricFormula rhs);
  static MetricFormula impl(MetricFormula lhs, MetricFormula rhs);
  static MetricFormula next(Interval i, MetricFormula sub);
  static MetricFormula always(Interval i, MetricFormula sub);
  static MetricFormula eventually(Interval i, MetricFormula sub);

  // Derived operators.
  static MetricFormula top();                      // not bot
  static MetricFormula negation(MetricFormula f);  // f -> bot
  static MetricFormula final();                    // not next_[0,w) top

  Kind kind() const;
  const AtomName& atom_name() const;  // Kind::Atom only
  const Interval& interval() const;   // Next/Always/Eventually only
  const MetricFormula& lhs() const;   // binary nodes; the operand of unary ones
  const MetricFormula& rhs() const;   // binary nodes only

  std::string str() const;

 private:
  struct Node;
  static std::shared_ptr<Node> make_node(Kind kind);
  explicit MetricFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// `body -> head` for one rule (the always operator is not included).
MetricFormula rule_formula(const MetricRule& rule);

/// M, k |= phi. Requires k < trace.length().
bool satisfies(const TimedTrace& trace, Step k, const MetricFormula& phi);

/// M, k |= body -> head for every position k.
bool rule_holds(const TimedTrace& trace, const MetricRule& rule);

/// Whether `trace` is an MHT-model of the program.
bool is_mht_model(const TimedTrace& trace, const MetricProgram& program);

struct OracleOptions {
  /// Upper bound on |alphabet| * lambda, i.e. the number of bits of a trace.
  std::size_t trace_bit_cap = 24;
};

/// All metric equilibrium models of length `lambda` whose timing ends at or
/// before `nu`. Throws InputError if lambda == 0 and CapExceeded past the cap.
ModelSet<TimedTrace> enumerate_metric_equilibrium_models(const MetricProgram& program, Step lambda,
                                                         TimePoint nu, const OracleOptions& options = {});

}  // namespace metac
