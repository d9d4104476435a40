#include "support.hpp"

#include <cmath>
#include <random>

#include "metac/compiler.hpp"
#include "metac/timing_bool.hpp"
#include "metac/timing_dc.hpp"
#include "metac/verify.hpp"

using namespace metac;
using metac::test::atom;

namespace {

GroundLiteral tb(Step k, TimePoint d) { return pos<GroundAtom>(TimeAtomBool{k, d}); }

// Pairs d < d' <= nu whose gap lies outside [m, n), counted by brute force.
std::uint64_t outside_pairs(const Interval& i, TimePoint nu) {
  std::uint64_t c = 0;
  for (TimePoint d = 0; d <= nu; ++d) {
    for (TimePoint e = d + 1; e <= nu; ++e) {
      const TimePoint g = e - d;
      const bool inside = g >= i.lower && (!i.upper || g < *i.upper);
      if (!inside) ++c;
    }
  }
  return c;
}

const char* kMove = "next((15,16),at(ram,home)) :- at(ram,office), go(ram,home).";

}  // namespace

TEST_CASE("Boolean generator for two positions up to time 3") {
  const auto g = compile_delta_bool(2, 3);
  REQUIRE(g.rules.size() == 5);
  CHECK(g.rules[0] == GroundRule{{tb(0, 0)}, {}});
  for (TimePoint d = 0; d <= 3; ++d) {
    const auto& r = g.rules[1 + d];
    CHECK(r.body == std::vector<GroundLiteral>{tb(0, d)});
    std::vector<GroundLiteral> later;
    for (TimePoint e = 0; e <= 3; ++e) {
      if (e > d) later.push_back(tb(1, e));
    }
    CHECK(r.head == later);
  }
  CHECK(g.rules.back() == GroundRule{{}, {tb(0, 3)}});
  CHECK(g.counts.delta == 5);
}

TEST_CASE("Boolean generator for one position") {
  for (TimePoint nu : {0, 1, 7}) {
    const auto g = compile_delta_bool(1, nu);
    CHECK(g.rules == std::vector<GroundRule>{{{tb(0, 0)}, {}}});
  }
}

TEST_CASE("Boolean generator size law") {
  std::mt19937_64 rng(20);
  for (int i = 0; i < 20; ++i) {
    const Step lambda = 1 + rng() % 8;
    const TimePoint nu = lambda - 1 + rng() % 12;
    CAPTURE(lambda);
    CAPTURE(nu);
    CHECK(compile_delta_bool(lambda, nu).rules.size() == 1 + (lambda - 1) * (nu + 1));
  }
  CHECK_THROWS_AS(compile_delta_bool(4, 2), InputError);
  CHECK_THROWS_AS(compile_delta_bool(0, 2), InputError);
}

TEST_CASE("Boolean window constraints for a fifteen minute move") {
  const auto p = metac::test::prog(kMove);
  const TimePoint nu = 40;
  const auto g = compile_psi_bool(p, 2, nu);
  std::uint64_t below = 0, above = 0;
  for (const auto& r : g.rules) {
    REQUIRE(r.head.empty());
    REQUIRE(r.body.size() == 4);
    CHECK(r.body[0] == pos<GroundAtom>(StepAtom{atom("at(ram,office)"), 0}));
    CHECK(r.body[1] == pos<GroundAtom>(StepAtom{atom("go(ram,home)"), 0}));
    const auto d = std::get<TimeAtomBool>(r.body[2].atom);
    const auto e = std::get<TimeAtomBool>(r.body[3].atom);
    CHECK(d.step == 0);
    CHECK(e.step == 1);
    REQUIRE(e.value > d.value);
    const auto gap = e.value - d.value;
    CHECK(gap != 15);
    (gap < 15 ? below : above) += 1;
  }
  // Independent tallies: gap g occurs nu - g + 1 times.
  std::uint64_t want_below = 0, want_above = 0;
  for (TimePoint gap = 1; gap <= nu; ++gap) (gap < 15 ? want_below : want_above) += gap == 15 ? 0 : nu - gap + 1;
  CHECK(below == want_below);
  CHECK(above == want_above);
}

TEST_CASE("an open window from 0 produces no Boolean constraints") {
  const auto p = metac::test::prog("next((0,w),a) :- b.");
  CHECK(compile_psi_bool(p, 5, 9).rules.empty());
  CHECK(count_psi_bool(p, 5, 9) == 0);
}

TEST_CASE("window [2,3) with two positions up to time 3") {
  const auto p = metac::test::prog("a :- initially.\nnext((2,3),b) :- a.");
  const auto g = compile_psi_bool(p, 2, 3);
  std::set<std::pair<TimePoint, TimePoint>> pairs;
  for (const auto& r : g.rules) {
    pairs.insert({std::get<TimeAtomBool>(r.body[1].atom).value, std::get<TimeAtomBool>(r.body[2].atom).value});
  }
  CHECK(pairs == std::set<std::pair<TimePoint, TimePoint>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  CHECK(count_psi_bool(p, 2, 3) == 4);
}

TEST_CASE("constraint count estimate equals the generated rules") {
  RandomProgramOptions opts;
  opts.seed = 40;
  opts.max_bound = 6;
  opts.max_rules = 6;
  const auto corpus = random_corpus(60, opts);
  for (const auto& p : corpus) {
    for (Step n = 1; n <= 4; ++n) {
      for (TimePoint nu = n - 1; nu <= 8; ++nu) {
        const auto g = compile_psi_bool(p, n, nu);
        CHECK(count_psi_bool(p, n, nu) == g.rules.size());
        std::uint64_t brute = 0;
        for (const auto& r : p.rules) {
          if (r.is_next()) brute += outside_pairs(r.next_head().interval, nu) * (n - 1);
        }
        CHECK(brute == g.rules.size());
      }
    }
  }
  CHECK(count_psi_bool(metac::test::corpus("dentist.mlp"), 4, 110) ==
        compile_psi_bool(metac::test::corpus("dentist.mlp"), 4, 110).rules.size());
}

TEST_CASE("hundred positions, horizon 1000") {
  const auto p = metac::test::prog(kMove);
  const Step lambda = 100;
  const TimePoint nu = 1000;
  std::uint64_t below = 0, above = 0;
  for (TimePoint gap = 1; gap <= nu; ++gap) {
    if (gap < 15) below += nu - gap + 1;
    if (gap >= 16) above += nu - gap + 1;
  }
  CHECK(count_psi_bool(p, lambda, nu) == (below + above) * (lambda - 1));
  // The upper family alone is on the order of 10^8 instances.
  CHECK(std::lround(std::log10(static_cast<double>(above * (lambda - 1)))) == 8);
}

TEST_CASE("ten times the durations and the horizon: about a hundred times the constraints") {
  const auto p = metac::test::corpus("dentist.mlp");
  const auto small = static_cast<double>(count_psi_bool(p, 100, 110));
  const auto large = static_cast<double>(count_psi_bool(scale_durations(p, 10), 100, 1100));
  const double ratio = large / small;
  CAPTURE(ratio);
  CHECK(ratio >= 95.0);
  CHECK(ratio <= 105.0);
}

TEST_CASE("difference-constraint generator") {
  const auto one = compile_delta_dc(1);
  CHECK(one.rules == std::vector<GroundRule>{{{pos<GroundAtom>(DiffConstraintAtom::eq(TimeVar{0}, 0))}, {}}});

  const auto three = compile_delta_dc(3);
  const std::vector<GroundRule> expected{
      {{pos<GroundAtom>(DiffConstraintAtom::eq(TimeVar{0}, 0))}, {}},
      {{pos<GroundAtom>(DiffConstraintAtom::diff_leq(TimeVar{0}, TimeVar{1}, -1))}, {}},
      {{pos<GroundAtom>(DiffConstraintAtom::diff_leq(TimeVar{1}, TimeVar{2}, -1))}, {}},
  };
  CHECK(three.rules == expected);
  CHECK(three.backend == Backend::DifferenceConstraint);

  for (Step n = 1; n <= 50; ++n) CHECK(compile_delta_dc(n).rules.size() == n);
  CHECK_THROWS_AS(compile_delta_dc(0), InputError);
}

TEST_CASE("difference-constraint windows for a fifteen minute move") {
  const auto g = compile_psi_dc(metac::test::prog(kMove), 3);
  REQUIRE(g.rules.size() == 4);
  for (Step k = 0; k < 2; ++k) {
    const std::vector<GroundLiteral> body{pos<GroundAtom>(StepAtom{atom("at(ram,office)"), k}),
                                          pos<GroundAtom>(StepAtom{atom("go(ram,home)"), k})};
    auto lower = body;
    lower.push_back(neg<GroundAtom>(DiffConstraintAtom::diff_leq(TimeVar{k}, TimeVar{k + 1}, -15)));
    auto upper = body;
    upper.push_back(neg<GroundAtom>(DiffConstraintAtom::diff_leq(TimeVar{k + 1}, TimeVar{k}, 15)));
    CHECK(g.rules[2 * k] == GroundRule{{}, lower});
    CHECK(g.rules[2 * k + 1] == GroundRule{{}, upper});
  }
}

TEST_CASE("difference-constraint windows grow linearly") {
  const auto g = compile_psi_dc(metac::test::prog(kMove), 100);
  CHECK(g.rules.size() == 2 * 99);

  const auto open = compile_psi_dc(metac::test::prog("next((0,w),a) :- b."), 4);
  REQUIRE(open.rules.size() == 3);
  for (Step k = 0; k < 3; ++k) {
    CHECK(open.rules[k].body.back() == neg<GroundAtom>(DiffConstraintAtom::diff_leq(TimeVar{k}, TimeVar{k + 1}, 0)));
  }
}

TEST_CASE("difference-constraint size bound") {
  RandomProgramOptions opts;
  opts.seed = 41;
  opts.max_rules = 8;
  const auto corpus = random_corpus(20, opts);
  std::mt19937_64 rng(2);
  for (const auto& p : corpus) {
    const Step n = 1 + rng() % 10;
    CHECK(compile_psi_dc(p, n).rules.size() <= 2 * (n - 1) * p.rules.size());
  }
}

TEST_CASE("difference-constraint rule count does not depend on durations") {
  const auto p = metac::test::corpus("dentist.mlp");
  CompileContext c;
  c.lambda = 4;
  const auto base = compile_dc(p, c);
  for (std::uint64_t f : {5, 10, 37}) {
    const auto scaled = compile_dc(scale_durations(p, f), c);
    CHECK(scaled.rules.size() == base.rules.size());
    CHECK(scaled.counts == base.counts);
  }
}
