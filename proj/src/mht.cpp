#include "metac/mht.hpp"

#include <map>

namespace metac {

struct MetricFormula::Node {
  Kind kind = Kind::Bot;
  AtomName atom;
  Interval interval;
  std::optional<MetricFormula> lhs;
  std::optional<MetricFormula> rhs;
};

std::shared_ptr<MetricFormula::Node> MetricFormula::make_node(Kind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  return n;
}

MetricFormula MetricFormula::bot() { return MetricFormula(make_node(Kind::Bot)); }

MetricFormula MetricFormula::atom(AtomName a) {
  auto n = make_node(Kind::Atom);
  n->atom = std::move(a);
  return MetricFormula(std::move(n));
}

MetricFormula MetricFormula::initial() { return MetricFormula(make_node(Kind::Initial)); }

MetricFormula MetricFormula::conj(MetricFormula lhs, MetricFormula rhs) {
  auto n = make_node(Kind::And);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return MetricFormula(std::move(n));
}

MetricFormula MetricFormula::disj(MetricFormula lhs, MetricFormula rhs) {
  auto n = make_node(Kind::Or);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return MetricFormula(std::move(n));
}

MetricFormula MetricFormula::impl(MetricFormula lhs, MetricFormula rhs) {
  auto n = make_node(Kind::Impl);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return MetricFormula(std::move(n));
}

MetricFormula MetricFormula::next(Interval i, MetricFormula sub) {
  auto n = make_node(Kind::Next);
  n->interval = i;
  n->lhs = std::move(sub);
  return MetricFormula(std::move(n));
}

MetricFormula MetricFormula::always(Interval i, MetricFormula sub) {
  auto n = make_node(Kind::Always);
  n->interval = i;
  n->lhs = std::move(sub);
  return MetricFormula(std::move(n));
}

MetricFormula MetricFormula::eventually(Interval i, MetricFormula sub) {
  auto n = make_node(Kind::Eventually);
  n->interval = i;
  n->lhs = std::move(sub);
  return MetricFormula(std::move(n));
}

MetricFormula MetricFormula::top() { return negation(bot()); }

MetricFormula MetricFormula::negation(MetricFormula f) { return impl(std::move(f), bot()); }

MetricFormula MetricFormula::final() { return negation(next(Interval::unbounded(), top())); }

MetricFormula::Kind MetricFormula::kind() const { return node_->kind; }
const AtomName& MetricFormula::atom_name() const { return node_->atom; }
const Interval& MetricFormula::interval() const { return node_->interval; }
const MetricFormula& MetricFormula::lhs() const { return *node_->lhs; }
const MetricFormula& MetricFormula::rhs() const { return *node_->rhs; }

std::string MetricFormula::str() const {
  switch (kind()) {
    case Kind::Bot: return "#false";
    case Kind::Atom: return atom_name().str();
    case Kind::Initial: return "I";
    case Kind::And: return "(" + lhs().str() + " & " + rhs().str() + ")";
    case Kind::Or: return "(" + lhs().str() + " | " + rhs().str() + ")";
    case Kind::Impl: return "(" + lhs().str() + " -> " + rhs().str() + ")";
    case Kind::Next: return "next" + interval().str() + " " + lhs().str();
    case Kind::Always: return "always" + interval().str() + " " + lhs().str();
    case Kind::Eventually: return "eventually" + interval().str() + " " + lhs().str();
  }
  return {};
}

MetricFormula rule_formula(const MetricRule& rule) {
  std::optional<MetricFormula> body;
  for (const auto& lit : rule.body) {
    MetricFormula f = MetricFormula::bot();
    switch (lit.atom.kind) {
      case BodyAtom::Kind::Atom: f = MetricFormula::atom(lit.atom.atom); break;
      case BodyAtom::Kind::Initial: f = MetricFormula::initial(); break;
      case BodyAtom::Kind::Final: f = MetricFormula::final(); break;
    }
    if (lit.negated) f = MetricFormula::negation(f);
    body = body ? MetricFormula::conj(*body, f) : f;
  }
  if (!body) body = MetricFormula::top();

  std::optional<MetricFormula> head;
  if (rule.is_next()) {
    const auto& nh = rule.next_head();
    head = MetricFormula::next(nh.interval, MetricFormula::atom(nh.atom));
  } else {
    for (const auto& lit : rule.disjunction()) {
      MetricFormula f = MetricFormula::atom(lit.atom);
      if (lit.negated) f = MetricFormula::negation(f);
      head = head ? MetricFormula::disj(*head, f) : f;
    }
    if (!head) head = MetricFormula::bot();
  }
  return MetricFormula::impl(*body, *head);
}

namespace {

// Formula flattened into an array with atoms resolved to indices, so the
// same evaluator runs over set-based traces and packed bit traces.
struct FlatNode {
  MetricFormula::Kind kind;
  int atom = -1;
  Interval interval;
  int lhs = -1;
  int rhs = -1;
};

struct FlatFormula {
  std::vector<FlatNode> nodes;
  int root = -1;
  // True if the value can depend on the timing function.
  bool timing_sensitive = false;
};

int flatten(const MetricFormula& f, const std::map<AtomName, int>& index, FlatFormula& out) {
  FlatNode n{};
  n.kind = f.kind();
  using K = MetricFormula::Kind;
  switch (f.kind()) {
    case K::Atom: n.atom = index.at(f.atom_name()); break;
    case K::And:
    case K::Or:
    case K::Impl:
      n.lhs = flatten(f.lhs(), index, out);
      n.rhs = flatten(f.rhs(), index, out);
      break;
    case K::Next:
    case K::Always:
    case K::Eventually:
      n.interval = f.interval();
      n.lhs = flatten(f.lhs(), index, out);
      if (n.interval != Interval::unbounded()) out.timing_sensitive = true;
      break;
    default: break;
  }
  out.nodes.push_back(n);
  return static_cast<int>(out.nodes.size()) - 1;
}

void collect_atoms(const MetricFormula& f, AtomSet& out) {
  using K = MetricFormula::Kind;
  switch (f.kind()) {
    case K::Atom: out.insert(f.atom_name()); break;
    case K::And:
    case K::Or:
    case K::Impl:
      collect_atoms(f.lhs(), out);
      collect_atoms(f.rhs(), out);
      break;
    case K::Next:
    case K::Always:
    case K::Eventually: collect_atoms(f.lhs(), out); break;
    default: break;
  }
}

// Evaluates M, k |= node. `here` selects the world the atoms are read from:
// true for M itself, false for the total trace <T,T> used by implication.
template <class View>
bool eval(const View& m, const FlatFormula& f, int node, Step k, bool here) {
  const FlatNode& n = f.nodes[node];
  using K = MetricFormula::Kind;
  switch (n.kind) {
    case K::Bot: return false;
    case K::Atom: return m.holds(n.atom, k, here);
    case K::Initial: return k == 0;
    case K::And: return eval(m, f, n.lhs, k, here) && eval(m, f, n.rhs, k, here);
    case K::Or: return eval(m, f, n.lhs, k, here) || eval(m, f, n.rhs, k, here);
    case K::Impl: {
      // Both M' = M and M' = <T,T>; when already at <T,T> the two coincide.
      if (here && (eval(m, f, n.lhs, k, true) && !eval(m, f, n.rhs, k, true))) return false;
      return !eval(m, f, n.lhs, k, false) || eval(m, f, n.rhs, k, false);
    }
    case K::Next:
      return k + 1 < m.length() && eval(m, f, n.lhs, k + 1, here) &&
             n.interval.contains(m.tau(k + 1) - m.tau(k));
    case K::Eventually:
      for (Step i = k; i < m.length(); ++i) {
        if (n.interval.contains(m.tau(i) - m.tau(k)) && eval(m, f, n.lhs, i, here)) return true;
      }
      return false;
    case K::Always:
      for (Step i = k; i < m.length(); ++i) {
        if (n.interval.contains(m.tau(i) - m.tau(k)) && !eval(m, f, n.lhs, i, here)) return false;
      }
      return true;
  }
  return false;
}

struct SetView {
  const TimedTrace& trace;
  const std::vector<AtomName>& atoms;

  bool holds(int atom, Step k, bool here) const {
    const auto& state = here ? trace.here()[k] : trace.there()[k];
    return state.count(atoms[atom]) > 0;
  }
  Step length() const { return trace.length(); }
  TimePoint tau(Step k) const { return trace.tau()[k]; }
};

// Trace packed into one word: bit k * width + i is atom i at position k.
struct MaskView {
  std::uint64_t here_bits;
  std::uint64_t there_bits;
  int width;
  Step lambda;
  const std::vector<TimePoint>* timing;

  bool holds(int atom, Step k, bool here) const {
    const std::uint64_t bit = std::uint64_t{1} << (k * width + atom);
    return ((here ? here_bits : there_bits) & bit) != 0;
  }
  Step length() const { return lambda; }
  TimePoint tau(Step k) const { return (*timing)[k]; }
};

FlatFormula flatten_with(const MetricFormula& f, const std::map<AtomName, int>& index) {
  FlatFormula out;
  out.root = flatten(f, index, out);
  return out;
}

template <class View>
bool holds_everywhere(const View& m, const FlatFormula& f, bool here) {
  for (Step k = 0; k < m.length(); ++k) {
    if (!eval(m, f, f.root, k, here)) return false;
  }
  return true;
}

}  // namespace

bool satisfies(const TimedTrace& trace, Step k, const MetricFormula& phi) {
  if (k >= trace.length()) throw InputError("position out of range for trace");
  AtomSet atoms;
  collect_atoms(phi, atoms);
  std::vector<AtomName> names(atoms.begin(), atoms.end());
  std::map<AtomName, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
  const FlatFormula flat = flatten_with(phi, index);
  return eval(SetView{trace, names}, flat, flat.root, k, true);
}

bool rule_holds(const TimedTrace& trace, const MetricRule& rule) {
  const MetricFormula f = rule_formula(rule);
  for (Step k = 0; k < trace.length(); ++k) {
    if (!satisfies(trace, k, f)) return false;
  }
  return true;
}

bool is_mht_model(const TimedTrace& trace, const MetricProgram& program) {
  for (const auto& r : program.rules) {
    if (!rule_holds(trace, r)) return false;
  }
  return true;
}

ModelSet<TimedTrace> enumerate_metric_equilibrium_models(const MetricProgram& program, Step lambda,
                                                         TimePoint nu, const OracleOptions& options) {
  if (lambda == 0) throw InputError("trace length must be at least 1");
  const AtomSet alphabet = program.alphabet();
  const std::vector<AtomName> names(alphabet.begin(), alphabet.end());
  const int width = static_cast<int>(names.size());
  const std::size_t bits = names.size() * lambda;
  if (bits > options.trace_bit_cap || bits > 62) {
    throw CapExceeded("metric model enumeration needs " + std::to_string(bits) +
                      " trace bits, above the cap of " + std::to_string(options.trace_bit_cap) +
                      " (raise it with --oracle-cap)");
  }
  std::map<AtomName, int> index;
  for (int i = 0; i < width; ++i) index[names[i]] = i;

  std::vector<FlatFormula> fixed;      // rules whose truth ignores the timing
  std::vector<FlatFormula> sensitive;  // rules depending on the timing
  std::vector<FlatFormula> all;
  for (const auto& r : program.rules) {
    FlatFormula f = flatten_with(rule_formula(r), index);
    (f.timing_sensitive ? sensitive : fixed).push_back(f);
    all.push_back(f);
  }

  std::vector<std::vector<TimePoint>> timings;
  for_each_timing(lambda, nu, [&](const TimingFunction& tau) { timings.push_back(tau.values()); });

  auto unpack = [&](std::uint64_t mask) {
    std::vector<AtomSet> states(lambda);
    for (Step k = 0; k < lambda; ++k) {
      for (int i = 0; i < width; ++i) {
        if (mask & (std::uint64_t{1} << (k * width + i))) states[k].insert(names[i]);
      }
    }
    return states;
  };

  ModelSet<TimedTrace> models;
  if (timings.empty()) return models;
  const std::uint64_t limit = std::uint64_t{1} << bits;
  for (std::uint64_t t = 0; t < limit; ++t) {
    MaskView total{t, t, width, lambda, &timings.front()};
    bool ok = true;
    for (const auto& f : fixed) {
      if (!holds_everywhere(total, f, false)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (const auto& timing : timings) {
      total.timing = &timing;
      bool model = true;
      for (const auto& f : sensitive) {
        if (!holds_everywhere(total, f, false)) {
          model = false;
          break;
        }
      }
      if (!model) continue;
      // Minimality: no <H,T> with H < T (same timing) is a model.
      bool minimal = true;
      if (t != 0) {
        for (std::uint64_t h = (t - 1) & t;; h = (h - 1) & t) {
          MaskView m{h, t, width, lambda, &timing};
          bool h_model = true;
          for (const auto& f : all) {
            if (!holds_everywhere(m, f, true)) {
              h_model = false;
              break;
            }
          }
          if (h_model) {
            minimal = false;
            break;
          }
          if (h == 0) break;
        }
      }
      if (minimal) models.insert(TimedTrace::total(unpack(t), TimingFunction(timing)));
    }
  }
  return models;
}

}  // namespace metac
