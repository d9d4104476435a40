#include "support.hpp"

#include <random>

#include "metac/mht.hpp"
#include "metac/verify.hpp"
#include "oracle.hpp"

using namespace metac;
using metac::test::atom;
using F = MetricFormula;

namespace {

TimedTrace two_step(TimePoint t1) {
  return TimedTrace::total({{atom("a")}, {atom("b")}}, TimingFunction({0, t1}));
}

// Random formula over atoms a, b including every connective.
F random_formula(std::mt19937_64& rng, int depth) {
  const auto pick = rng() % (depth <= 0 ? 3 : 10);
  auto interval = [&] {
    const std::uint64_t m = rng() % 3;
    return rng() % 3 == 0 ? Interval::unbounded(m) : Interval::bounded(m, m + rng() % 3);
  };
  switch (pick) {
    case 0: return F::atom(atom(rng() % 2 ? "a" : "b"));
    case 1: return F::initial();
    case 2: return F::bot();
    case 3: return F::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4: return F::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5:
    case 6: return F::impl(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 7: return F::next(interval(), random_formula(rng, depth - 1));
    case 8: return F::always(interval(), random_formula(rng, depth - 1));
    default: return F::eventually(interval(), random_formula(rng, depth - 1));
  }
}

TimedTrace random_trace(std::mt19937_64& rng) {
  const Step n = 1 + rng() % 3;
  std::vector<AtomSet> h(n), t(n);
  std::vector<TimePoint> tau(n, 0);
  for (Step k = 0; k < n; ++k) {
    if (k) tau[k] = tau[k - 1] + 1 + rng() % 3;
    for (const char* name : {"a", "b"}) {
      const auto r = rng() % 3;  // 0 false, 1 there only, 2 both
      if (r >= 1) t[k].insert(atom(name));
      if (r == 2) h[k].insert(atom(name));
    }
  }
  return TimedTrace(h, t, TimingFunction(tau));
}

// Single-world evaluation written independently of the library.
bool classical(const std::vector<AtomSet>& s, const TimingFunction& tau, Step k, const F& f) {
  const Step n = tau.length();
  switch (f.kind()) {
    case F::Kind::Bot: return false;
    case F::Kind::Atom: return s[k].count(f.atom_name()) > 0;
    case F::Kind::Initial: return k == 0;
    case F::Kind::And: return classical(s, tau, k, f.lhs()) && classical(s, tau, k, f.rhs());
    case F::Kind::Or: return classical(s, tau, k, f.lhs()) || classical(s, tau, k, f.rhs());
    case F::Kind::Impl: return !classical(s, tau, k, f.lhs()) || classical(s, tau, k, f.rhs());
    case F::Kind::Next:
      return k + 1 < n && f.interval().contains(tau[k + 1] - tau[k]) && classical(s, tau, k + 1, f.lhs());
    case F::Kind::Always:
      for (Step j = k; j < n; ++j) {
        if (f.interval().contains(tau[j] - tau[k]) && !classical(s, tau, j, f.lhs())) return false;
      }
      return true;
    case F::Kind::Eventually:
      for (Step j = k; j < n; ++j) {
        if (f.interval().contains(tau[j] - tau[k]) && classical(s, tau, j, f.lhs())) return true;
      }
      return false;
  }
  return false;
}

}  // namespace

TEST_CASE("next with a window, every candidate gap") {
  // Gap 2 is the only one inside [2,3).
  for (TimePoint t1 : {1, 2, 3}) {
    CAPTURE(t1);
    CHECK(satisfies(two_step(t1), 0, F::next(Interval::bounded(2, 3), F::atom(atom("b")))) == (t1 == 2));
    CHECK(satisfies(two_step(t1), 0, F::next(Interval::bounded(3, 4), F::atom(atom("b")))) == (t1 == 3));
  }
  CHECK_FALSE(satisfies(two_step(2), 1, F::next(Interval::unbounded(), F::top())));
}

TEST_CASE("final holds exactly at the last position") {
  for (Step n = 1; n <= 4; ++n) {
    const auto m = TimedTrace::total(std::vector<AtomSet>(n), TimingFunction::identity(n));
    for (Step k = 0; k < n; ++k) CHECK(satisfies(m, k, F::final()) == (k + 1 == n));
  }
}

TEST_CASE("initial holds only at position 0") {
  const auto m = TimedTrace::total(std::vector<AtomSet>(3), TimingFunction::identity(3));
  CHECK(satisfies(m, 0, F::initial()));
  CHECK_FALSE(satisfies(m, 1, F::initial()));
  CHECK_FALSE(satisfies(m, 2, F::initial()));
}

TEST_CASE("implication is checked in both worlds") {
  // <H,T> = <{}, {a}>: "not a" fails (a is true there), "a" fails here.
  const TimedTrace m({{}}, {{atom("a")}}, TimingFunction::identity(1));
  CHECK_FALSE(satisfies(m, 0, F::atom(atom("a"))));
  CHECK_FALSE(satisfies(m, 0, F::negation(F::atom(atom("a")))));
  CHECK_FALSE(satisfies(m, 0, F::disj(F::atom(atom("a")), F::negation(F::atom(atom("a"))))));
  CHECK(satisfies(m, 0, F::negation(F::negation(F::atom(atom("a"))))));
  CHECK_FALSE(satisfies(m, 0, F::impl(F::top(), F::atom(atom("a")))));
}

TEST_CASE("always and eventually over windows") {
  const auto m = TimedTrace::total({{atom("a")}, {}, {atom("a")}}, TimingFunction({0, 2, 5}));
  const auto a = F::atom(atom("a"));
  CHECK(satisfies(m, 0, F::eventually(Interval::bounded(3, 6), a)));
  CHECK_FALSE(satisfies(m, 0, F::eventually(Interval::bounded(1, 5), a)));
  CHECK(satisfies(m, 0, F::always(Interval::bounded(3, 9), a)));
  CHECK_FALSE(satisfies(m, 0, F::always(Interval::unbounded(), a)));
  CHECK(satisfies(m, 1, F::always(Interval::bounded(0, 1), F::negation(a))));
}

TEST_CASE("rules hold at every position") {
  const auto r = metac::test::prog("a :- initially.").rules.at(0);
  CHECK(rule_holds(TimedTrace::total({{atom("a")}}, TimingFunction::identity(1)), r));
  CHECK_FALSE(rule_holds(TimedTrace::total({{}}, TimingFunction::identity(1)), r));
}

TEST_CASE("office to home move against every gap") {
  const auto r = metac::test::prog("next((15,16),at(ram,home)) :- at(ram,office), go(ram,home).").rules.at(0);
  const AtomSet start{atom("at(ram,office)"), atom("go(ram,home)")};
  for (TimePoint gap = 1; gap <= 20; ++gap) {
    const auto m = TimedTrace::total({start, {atom("at(ram,home)")}}, TimingFunction({0, gap}));
    CHECK(rule_holds(m, r) == (gap == 15));
  }
}

TEST_CASE("metric equilibrium models of small programs") {
  const auto tiny = metac::test::prog("a :- initially.\nnext((2,3),b) :- a.");
  const auto models = enumerate_metric_equilibrium_models(tiny, 2, 3);
  REQUIRE(models.size() == 1);
  CHECK(*models.begin() == TimedTrace::total({{atom("a")}, {atom("b")}}, TimingFunction({0, 2})));
  CHECK(models == metac::test::naive_equilibrium_models(tiny, 2, 3));

  CHECK(enumerate_metric_equilibrium_models(tiny, 1, 0).empty());
  CHECK(metac::test::naive_equilibrium_models(tiny, 1, 0).empty());

  const auto empty = enumerate_metric_equilibrium_models(MetricProgram{}, 2, 1);
  REQUIRE(empty.size() == 1);
  CHECK(*empty.begin() == TimedTrace::total({{}, {}}, TimingFunction({0, 1})));
}

TEST_CASE("oracle rejects lambda 0 and large alphabets") {
  CHECK_THROWS_AS(enumerate_metric_equilibrium_models(MetricProgram{}, 0, 3), InputError);
  const auto p = metac::test::corpus("dentist.mlp");
  CHECK_THROWS_AS(enumerate_metric_equilibrium_models(p, 4, 110), CapExceeded);
}

TEST_CASE("oracle agrees with the naive fragment reading on random programs") {
  RandomProgramOptions opts;
  opts.seed = 99;
  RandomProgramGenerator gen(opts);
  for (int i = 0; i < 150; ++i) {
    const auto p = gen.next();
    CAPTURE(pretty_print(p));
    for (Step n = 1; n <= 3; ++n) {
      CHECK(enumerate_metric_equilibrium_models(p, n, 3) == metac::test::naive_equilibrium_models(p, n, 3));
    }
  }
}

TEST_CASE("persistence") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 3000; ++i) {
    const auto m = random_trace(rng);
    const auto f = random_formula(rng, 3);
    const Step k = static_cast<Step>(rng() % m.length());
    if (satisfies(m, k, f)) {
      CAPTURE(f.str());
      CHECK(satisfies(TimedTrace::total(m.there(), m.tau()), k, f));
    }
  }
}

TEST_CASE("total traces evaluate classically") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 3000; ++i) {
    const auto m = random_trace(rng);
    const auto t = TimedTrace::total(m.there(), m.tau());
    const auto f = random_formula(rng, 3);
    const Step k = static_cast<Step>(rng() % m.length());
    CAPTURE(f.str());
    CHECK(satisfies(t, k, f) == classical(t.there(), t.tau(), k, f));
  }
}

TEST_CASE("larger nu never loses models") {
  const auto corpus = random_corpus(60, RandomProgramOptions{});
  for (const auto& p : corpus) {
    for (Step n = 1; n <= 3; ++n) {
      ModelSet<TimedTrace> prev;
      for (TimePoint nu = n - 1; nu <= 5; ++nu) {
        const auto cur = enumerate_metric_equilibrium_models(p, n, nu);
        CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
        prev = cur;
      }
    }
  }
}

TEST_CASE("without windows the timing does not matter") {
  auto opts = RandomProgramOptions{};
  opts.seed = 17;
  const auto corpus = random_corpus(80, opts);
  for (auto p : corpus) {
    for (auto& r : p.rules) {
      if (r.is_next()) r.head = NextHead{Interval::unbounded(), r.next_head().atom};
    }
    for (Step n = 1; n <= 3; ++n) {
      std::set<std::vector<AtomSet>> first, second;
      const auto models = enumerate_metric_equilibrium_models(p, n, 3 * (n - 1));
      const auto fix_a = TimingFunction::identity(n);
      std::vector<TimePoint> spread(n);
      for (Step k = 0; k < n; ++k) spread[k] = 3 * k;
      const TimingFunction fix_b(spread);
      for (const auto& m : models) {
        if (m.tau() == fix_a) first.insert(m.there());
        if (m.tau() == fix_b) second.insert(m.there());
      }
      CAPTURE(pretty_print(p));
      CHECK(first == second);
    }
  }
}
