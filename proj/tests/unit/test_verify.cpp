#include "support.hpp"

#include <random>

#include <json.hpp>

#include "metac/compiler.hpp"
#include "metac/ht_solver.hpp"
#include "metac/timing_bool.hpp"
#include "metac/timing_dc.hpp"
#include "metac/verify.hpp"

using namespace metac;
using metac::test::atom;

namespace {

TimedTrace random_trace(std::mt19937_64& rng) {
  const Step n = 1 + rng() % 4;
  std::vector<AtomSet> h(n), t(n);
  std::vector<TimePoint> tau(n, 0);
  for (Step k = 0; k < n; ++k) {
    if (k) tau[k] = tau[k - 1] + 1 + rng() % 4;
    for (const char* name : {"a", "b", "c(x)"}) {
      const auto r = rng() % 3;
      if (r >= 1) t[k].insert(atom(name));
      if (r == 2) h[k].insert(atom(name));
    }
  }
  return TimedTrace(h, t, TimingFunction(tau));
}

// All Boolean interpretations over the time atoms t_{k,d}, k < lambda, d <= nu.
std::vector<Interpretation> time_interpretations(Step lambda, TimePoint nu) {
  std::vector<GroundAtom> atoms;
  for (Step k = 0; k < lambda; ++k)
    for (TimePoint d = 0; d <= nu; ++d) atoms.push_back(TimeAtomBool{k, d});
  std::vector<Interpretation> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << atoms.size()); ++m) {
    Interpretation i;
    for (std::size_t b = 0; b < atoms.size(); ++b) {
      if (m >> b & 1) i.insert(atoms[b]);
    }
    out.push_back(std::move(i));
  }
  return out;
}

bool strictly_increasing_from_zero(const std::vector<std::int64_t>& v) {
  if (v.empty() || v[0] != 0) return false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) return false;
  }
  return true;
}

VerifyOptions roomy() {
  VerifyOptions o;
  o.solver.atom_cap = 200;
  o.htc.variable_cap = 40;
  o.htc.atom_cap = 200;
  o.oracle.trace_bit_cap = 40;
  return o;
}

}  // namespace

TEST_CASE("timedness of Boolean interpretations") {
  CHECK(is_timed_bool({TimeAtomBool{0, 0}, TimeAtomBool{1, 2}}, 2) == TimingFunction({0, 2}));
  CHECK_FALSE(is_timed_bool({TimeAtomBool{0, 0}, TimeAtomBool{1, 2}, TimeAtomBool{1, 3}}, 2).has_value());
  CHECK_FALSE(is_timed_bool({TimeAtomBool{0, 1}}, 1).has_value());
  CHECK_FALSE(is_timed_bool({TimeAtomBool{0, 0}}, 2).has_value());
  CHECK_FALSE(is_timed_bool({TimeAtomBool{0, 0}, TimeAtomBool{1, 0}}, 2).has_value());
  CHECK_FALSE(is_timed_bool({TimeAtomBool{0, 0}, TimeAtomBool{1, 1}}, 1).has_value());
  CHECK(is_timed_bool({StepAtom{atom("a"), 0}, TimeAtomBool{0, 0}}, 1) == TimingFunction::identity(1));
}

TEST_CASE("sigma and theta on examples") {
  const auto one = TimedTrace::total({{atom("a")}}, TimingFunction::identity(1));
  const Interpretation expected_one{StepAtom{atom("a"), 0}, TimeAtomBool{0, 0}};
  CHECK(sigma(one) == std::make_pair(expected_one, expected_one));
  CHECK(theta(expected_one, expected_one, 1) == one);

  const auto m = TimedTrace::total({{atom("a")}, {atom("b")}}, TimingFunction({0, 2}));
  const Interpretation expected{StepAtom{atom("a"), 0}, StepAtom{atom("b"), 1}, TimeAtomBool{0, 0},
                                TimeAtomBool{1, 2}};
  CHECK(sigma(m).second == expected);
  CHECK(theta(expected, expected, 2) == m);

  CHECK_THROWS_AS(theta({}, {TimeAtomBool{0, 1}}, 1), InputError);
  CHECK_THROWS_AS(theta({}, {TimeAtomBool{0, 0}}, 1), InputError);  // here lacks the time atom
}

TEST_CASE("sigma_c and theta_c on examples") {
  const auto m = TimedTrace::total({{atom("a")}, {atom("b")}}, TimingFunction({0, 2}));
  const Valuation expected{{StepAtom{atom("a"), 0}, StepAtom{atom("b"), 1}}, {{0, 0}, {1, 2}}};
  CHECK(sigma_c(m).second == expected);
  CHECK(theta_c(expected, expected, 2) == m);

  const auto empty = TimedTrace::total({{}}, TimingFunction::identity(1));
  CHECK(sigma_c(empty).second == Valuation{{}, {{0, 0}}});

  CHECK_THROWS_AS(theta_c(Valuation{{}, {{0, 0}}}, Valuation{{}, {{0, 0}}}, 2), InputError);
  CHECK_THROWS_AS(theta_c(Valuation{{}, {{0, 1}}}, Valuation{{}, {{0, 1}}}, 1), InputError);
  CHECK_THROWS_AS(theta_c(Valuation{{}, {}}, Valuation{{}, {{0, 0}}}, 1), InputError);
}

TEST_CASE("conversions are mutually inverse") {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 100; ++i) {
    const auto m = random_trace(rng);
    const auto [h, t] = sigma(m);
    CHECK(is_timed_bool(t, m.length()) == m.tau());
    CHECK(theta(h, t, m.length()) == m);
    const auto [hc, tc] = sigma_c(m);
    CHECK(hc.subset_of(tc));
    CHECK(theta_c(hc, tc, m.length()) == m);
    CHECK(sigma(theta(h, t, m.length())) == std::make_pair(h, t));
  }
}

TEST_CASE("cross-check examples") {
  const auto tiny = metac::test::corpus("tiny.mlp");
  const auto b = crosscheck_bool(tiny, 2, 3);
  CHECK(b.pass());
  CHECK(b.oracle_models == 1);
  CHECK(b.backend_models == 1);

  const auto e = crosscheck_bool(MetricProgram{}, 2, 2);
  CHECK(e.pass());
  CHECK(e.oracle_models == 2);
  CHECK(e.backend_models == 2);

  const auto d = crosscheck_dc(tiny, 2, 3);
  CHECK(d.pass());
  CHECK(d.oracle_models == 1);
  CHECK(d.backend_models == 1);
  const auto de = crosscheck_dc(MetricProgram{}, 2, 2);
  CHECK(de.pass());
  CHECK(de.backend_models == 2);

  CHECK(crosscheck_backends(tiny, 2, 3).pass());
}

TEST_CASE("report serializations") {
  const auto r = crosscheck_bool(metac::test::corpus("tiny.mlp"), 2, 3);
  const auto j = nlohmann::json::parse(r.json());
  CHECK(j.at("lambda") == 2);
  CHECK(j.at("nu") == 3);
  CHECK(j.at("pass") == true);
  CHECK(j.at("checks").size() == 2);
  CHECK(r.table().find("sigma(oracle)") != std::string::npos);
}

TEST_CASE("random corpus is reproducible") {
  RandomProgramOptions opts;
  opts.seed = 4;
  const auto a = random_corpus(50, opts);
  const auto b = random_corpus(50, opts);
  CHECK(a == b);
  opts.seed = 5;
  CHECK(random_corpus(50, opts) != a);
  for (const auto& p : a) {
    CHECK(p.alphabet().size() <= 3);
    CHECK(p.rules.size() >= 1);
    CHECK(p.rules.size() <= 4);
    for (const auto& r : p.rules) {
      if (!r.is_next()) continue;
      const auto& i = r.next_head().interval;
      CHECK(i.lower <= 3);
      if (i.upper) CHECK(*i.upper <= 3);
    }
  }
}

TEST_CASE("cross-checks on a random sample") {
  RandomProgramOptions opts;
  opts.seed = 321;
  const auto corpus = random_corpus(40, opts);
  for (const auto& p : corpus) {
    for (Step n = 1; n <= 3; ++n) {
      for (TimePoint nu = 2; nu <= 4; ++nu) {
        CAPTURE(pretty_print(p));
        CHECK(crosscheck_bool(p, n, nu).pass());
        CHECK(crosscheck_dc(p, n, nu).pass());
        CHECK(crosscheck_backends(p, n, nu).pass());
      }
    }
  }
}

TEST_CASE("a deliberately wrong backend is caught") {
  // Dropping the window constraints must make the cross-check fail.
  const auto tiny = metac::test::corpus("tiny.mlp");
  CompileContext c;
  c.lambda = 2;
  c.nu = 3;
  auto broken = compile_core(tiny, c);
  broken.append(compile_delta_bool(2, 3));
  const auto models = enumerate_equilibrium_models(broken);
  CHECK(models.size() == 3);
  CHECK(traces_of_bool(models, 2) != enumerate_metric_equilibrium_models(tiny, 2, 3));
}

TEST_CASE("generator models are timed") {
  for (Step n = 1; n <= 4; ++n) {
    for (TimePoint nu = n - 1; nu <= 4; ++nu) {
      const auto delta = compile_delta_bool(n, nu);
      const auto models = enumerate_equilibrium_models(delta);
      std::set<TimingFunction> taus;
      for (const auto& m : models) {
        const auto tau = is_timed_bool(m, n);
        REQUIRE(tau.has_value());
        CHECK(tau->last() <= nu);
        taus.insert(*tau);
      }
      // Every bounded timing appears, each exactly once.
      std::size_t count = 0;
      for_each_timing(n, nu, [&](const TimingFunction& tau) {
        ++count;
        Interpretation x;
        for (Step k = 0; k < n; ++k) x.insert(TimeAtomBool{k, tau[k]});
        CHECK(models.count(x) == 1);
        CHECK(is_equilibrium_model(delta, x));
      });
      CHECK(models.size() == count);
      CHECK(taus.size() == count);
    }
  }
}

TEST_CASE("timed interpretations satisfy the generator at their own horizon") {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 300; ++i) {
    const auto m = random_trace(rng);
    const auto [h, t] = sigma(m);
    const TimePoint horizon = m.tau().last();
    for (TimePoint extra : {0, 1, 3}) {
      const auto delta = compile_delta_bool(m.length(), horizon + extra);
      CHECK(ht_satisfies(t, t, delta));
      CHECK(ht_satisfies(h, t, delta));
    }
  }
}

TEST_CASE("only timed interpretations satisfy the generator, small cases") {
  // Exhaustive over all sets of time atoms for lambda, nu <= 2 (at most 9 atoms, checked as total models).
  for (Step n = 1; n <= 3; ++n) {
    for (TimePoint nu = n - 1; nu <= 2; ++nu) {
      const auto delta = compile_delta_bool(n, nu);
      for (const auto& t : time_interpretations(n, nu)) {
        if (!is_timed_bool(t, n)) continue;
        CHECK(ht_satisfies(t, t, delta));
      }
    }
  }
}

TEST_CASE("difference-constraint generator holds exactly on timed valuations") {
  // Every pair h <= t over t_0..t_{n-1} ranging over {undefined, 0..nu}.
  for (Step n = 1; n <= 3; ++n) {
    for (TimePoint nu = 0; nu <= 4; ++nu) {
      const auto delta = compile_delta_dc(n);
      std::vector<std::map<Step, std::int64_t>> all{{}};
      for (Step k = 0; k < n; ++k) {
        std::vector<std::map<Step, std::int64_t>> next;
        for (const auto& partial : all) {
          next.push_back(partial);
          for (TimePoint d = 0; d <= nu; ++d) {
            auto m = partial;
            m[k] = static_cast<std::int64_t>(d);
            next.push_back(std::move(m));
          }
        }
        all = std::move(next);
      }
      for (const auto& tt : all) {
        for (const auto& hh : all) {
          const Valuation h{{}, hh}, t{{}, tt};
          if (!h.subset_of(t)) continue;
          std::vector<std::int64_t> seq;
          bool defined = hh.size() == n;
          for (const auto& [k, v] : hh) seq.push_back(v);
          const bool timed = defined && hh == tt && strictly_increasing_from_zero(seq);
          CHECK(htc_satisfies(h, t, delta) == timed);
        }
      }
    }
  }
}

TEST_CASE("difference-constraint generator models define every variable") {
  for (Step n = 1; n <= 4; ++n) {
    for (TimePoint nu = 0; nu <= 4; ++nu) {
      const auto models = enumerate_constraint_equilibrium_models_bounded(compile_delta_dc(n), nu);
      std::size_t count = 0;
      for_each_timing(n, nu, [&](const TimingFunction&) { ++count; });
      CHECK(models.size() == count);
      for (const auto& v : models) CHECK(v.times.size() == n);
    }
  }
}

TEST_CASE("reduced dentist: every pipeline agrees") {
  const auto p = metac::test::corpus("dentist_reduced.mlp");
  const auto o = roomy();
  const auto b = crosscheck_bool(p, 3, 6, o);
  CHECK(b.pass());
  CHECK(b.oracle_models == 1);
  CHECK(crosscheck_dc(p, 3, 6, o).pass());
  CHECK(crosscheck_backends(p, 3, 6, o).pass());
}

TEST_CASE("benchmark trends on the dentist corpus") {
  const std::vector<std::pair<std::string, MetricProgram>> corpus{{"dentist", metac::test::corpus("dentist.mlp")}};
  const auto rep = bench(corpus, {1, 5, 10});
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.pass());
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  // Independent look at the numbers.
  CHECK(rep.entries[0].dc_counts.total() == rep.entries[2].dc_counts.total());
  CHECK(rep.entries[0].bool_total() < rep.entries[1].bool_total());
  CHECK(rep.entries[1].bool_total() < rep.entries[2].bool_total());
  const double r = static_cast<double>(rep.entries[2].bool_total()) / static_cast<double>(rep.entries[0].bool_total());
  CHECK(r > 80.0);
  CHECK(r < 120.0);
  CHECK(rep.entries[0].bool_materialized);
  CHECK(nlohmann::json::parse(rep.json()).at("entries").size() == 3);
}

TEST_CASE("benchmark on an empty corpus") {
  const auto rep = bench({}, {1, 5, 10});
  CHECK(rep.entries.empty());
  CHECK(rep.checks.empty());
  CHECK(rep.pass());
}
