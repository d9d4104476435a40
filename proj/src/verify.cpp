#include "metac/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "metac/parser.hpp"
#include "metac/timing_bool.hpp"

namespace metac {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// sigma / theta

std::optional<TimingFunction> is_timed_bool(const Interpretation& t, Step lambda) {
  std::vector<std::optional<TimePoint>> at(lambda);
  for (const auto& atom : t) {
    const auto* ta = std::get_if<TimeAtomBool>(&atom);
    if (!ta) continue;
    if (ta->step >= lambda || at[ta->step]) return std::nullopt;
    at[ta->step] = ta->value;
  }
  std::vector<TimePoint> values;
  for (const auto& v : at) {
    if (!v) return std::nullopt;
    values.push_back(*v);
  }
  try {
    return TimingFunction(std::move(values));
  } catch (const InputError&) {
    return std::nullopt;
  }
}

std::pair<Interpretation, Interpretation> sigma(const TimedTrace& trace) {
  Interpretation here;
  Interpretation there;
  for (Step k = 0; k < trace.length(); ++k) {
    for (const auto& a : trace.here()[k]) here.insert(StepAtom{a, k});
    for (const auto& a : trace.there()[k]) there.insert(StepAtom{a, k});
    here.insert(TimeAtomBool{k, trace.tau()[k]});
    there.insert(TimeAtomBool{k, trace.tau()[k]});
  }
  return {std::move(here), std::move(there)};
}

namespace {

std::vector<AtomSet> states_of(const std::set<StepAtom>& atoms, Step lambda) {
  std::vector<AtomSet> states(lambda);
  for (const auto& a : atoms) {
    if (a.step >= lambda) throw InputError("atom " + to_string(a) + " lies beyond the trace length");
    states[a.step].insert(a.base);
  }
  return states;
}

std::set<StepAtom> step_atoms(const Interpretation& i) {
  std::set<StepAtom> out;
  for (const auto& a : i) {
    if (const auto* s = std::get_if<StepAtom>(&a)) out.insert(*s);
  }
  return out;
}

std::set<TimeAtomBool> time_atoms(const Interpretation& i) {
  std::set<TimeAtomBool> out;
  for (const auto& a : i) {
    if (const auto* t = std::get_if<TimeAtomBool>(&a)) out.insert(*t);
  }
  return out;
}

}  // namespace

TimedTrace theta(const Interpretation& here, const Interpretation& there, Step lambda) {
  auto tau = is_timed_bool(there, lambda);
  if (!tau) throw InputError("interpretation is not timed wrt lambda = " + std::to_string(lambda));
  if (time_atoms(here) != time_atoms(there)) throw InputError("here and there disagree on time atoms");
  return TimedTrace(states_of(step_atoms(here), lambda), states_of(step_atoms(there), lambda), *tau);
}

std::pair<Valuation, Valuation> sigma_c(const TimedTrace& trace) {
  Valuation here;
  Valuation there;
  for (Step k = 0; k < trace.length(); ++k) {
    for (const auto& a : trace.here()[k]) here.atoms.insert(StepAtom{a, k});
    for (const auto& a : trace.there()[k]) there.atoms.insert(StepAtom{a, k});
    here.times[k] = static_cast<std::int64_t>(trace.tau()[k]);
    there.times[k] = static_cast<std::int64_t>(trace.tau()[k]);
  }
  return {std::move(here), std::move(there)};
}

TimedTrace theta_c(const Valuation& here, const Valuation& there, Step lambda) {
  if (here.times != there.times) throw InputError("here and there disagree on time variables");
  if (there.times.size() != lambda) throw InputError("valuation is not timed wrt lambda = " + std::to_string(lambda));
  std::vector<TimePoint> values;
  for (Step k = 0; k < lambda; ++k) {
    const auto it = there.times.find(k);
    if (it == there.times.end() || it->second < 0) {
      throw InputError("valuation is not timed wrt lambda = " + std::to_string(lambda));
    }
    values.push_back(static_cast<TimePoint>(it->second));
  }
  return TimedTrace(states_of(here.atoms, lambda), states_of(there.atoms, lambda), TimingFunction(std::move(values)));
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string one_line(const TimedTrace& t) {
  std::string s = to_string(t);
  std::replace(s.begin(), s.end(), '\n', ';');
  if (!s.empty() && s.back() == ';') s.pop_back();
  return s;
}

std::string render(const Interpretation& i) {
  std::string out = "{";
  const char* sep = "";
  for (const auto& a : i) {
    out += sep + to_string(a);
    sep = ", ";
  }
  return out + "}";
}

template <class M, class Render>
CheckResult compare(std::string name, const ModelSet<M>& expected, const ModelSet<M>& actual, Render render) {
  CheckResult res{std::move(name), true, {}};
  auto note = [&](const std::string& s) {
    res.pass = false;
    if (res.counterexamples.size() < 3) res.counterexamples.push_back(s);
  };
  for (const auto& m : expected) {
    if (!actual.count(m)) note("missing: " + render(m));
  }
  for (const auto& m : actual) {
    if (!expected.count(m)) note("unexpected: " + render(m));
  }
  return res;
}

ordered_json checks_json(const std::vector<CheckResult>& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"counterexamples", c.counterexamples}});
  }
  return arr;
}

void checks_table(std::ostream& out, const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) {
    out << (c.pass ? "  PASS  " : "  FAIL  ") << c.name << "\n";
    for (const auto& ce : c.counterexamples) out << "        " << ce << "\n";
  }
}

CompileContext context(Step lambda, std::optional<TimePoint> nu, bool simplify) {
  CompileContext ctx;
  ctx.lambda = lambda;
  ctx.nu = nu;
  ctx.simplify = simplify;
  return ctx;
}

}  // namespace

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerificationReport::json() const {
  ordered_json j;
  j["format"] = "metac-verify";
  j["version"] = 1;
  j["backend"] = backend;
  j["lambda"] = lambda;
  j["nu"] = nu;
  j["program"] = program;
  j["oracle_models"] = oracle_models;
  j["backend_models"] = backend_models;
  j["pass"] = pass();
  j["checks"] = checks_json(checks);
  return j.dump(2) + "\n";
}

std::string VerificationReport::table() const {
  std::ostringstream out;
  out << (pass() ? "PASS" : "FAIL") << "  backend=" << backend << " lambda=" << lambda << " nu=" << nu
      << " oracle=" << oracle_models << " backend=" << backend_models << "\n";
  checks_table(out, checks);
  if (!pass()) out << "  program:\n" << program;
  return out.str();
}

ModelSet<TimedTrace> traces_of_bool(const ModelSet<Interpretation>& models, Step lambda) {
  ModelSet<TimedTrace> out;
  for (const auto& t : models) out.insert(theta(t, t, lambda));
  return out;
}

ModelSet<TimedTrace> traces_of_dc(const ModelSet<Valuation>& models, Step lambda) {
  ModelSet<TimedTrace> out;
  for (const auto& t : models) out.insert(theta_c(t, t, lambda));
  return out;
}

VerificationReport crosscheck_bool(const MetricProgram& p, Step lambda, TimePoint nu, const VerifyOptions& options) {
  VerificationReport rep;
  rep.program = pretty_print(p);
  rep.backend = "bool";
  rep.lambda = lambda;
  rep.nu = nu;
  const auto oracle = enumerate_metric_equilibrium_models(p, lambda, nu, options.oracle);
  const auto program = compile_bool(p, context(lambda, nu, options.simplify));
  const auto models = enumerate_equilibrium_models(program, options.solver);
  rep.oracle_models = oracle.size();
  rep.backend_models = models.size();

  ModelSet<Interpretation> image;
  for (const auto& m : oracle) image.insert(sigma(m).second);
  rep.checks.push_back(compare("sigma(oracle) = equilibrium models", image, models, render));

  ModelSet<TimedTrace> back;
  CheckResult timed{"theta(equilibrium models) = oracle", true, {}};
  for (const auto& t : models) {
    try {
      back.insert(theta(t, t, lambda));
    } catch (const InputError&) {
      timed.pass = false;
      if (timed.counterexamples.size() < 3) timed.counterexamples.push_back("not timed: " + render(t));
    }
  }
  if (timed.pass) timed = compare(timed.name, oracle, back, one_line);
  rep.checks.push_back(std::move(timed));
  return rep;
}

VerificationReport crosscheck_dc(const MetricProgram& p, Step lambda, TimePoint nu, const VerifyOptions& options) {
  VerificationReport rep;
  rep.program = pretty_print(p);
  rep.backend = "dc";
  rep.lambda = lambda;
  rep.nu = nu;
  const auto oracle = enumerate_metric_equilibrium_models(p, lambda, nu, options.oracle);
  const auto program = compile_dc(p, context(lambda, std::nullopt, options.simplify));
  const auto bounded = enumerate_constraint_equilibrium_models_bounded(program, nu, options.htc);
  const auto practical = enumerate_dc_models(program, nu, options.htc);
  rep.oracle_models = oracle.size();
  rep.backend_models = bounded.size();

  auto show = [](const Valuation& v) { return v.str(); };
  ModelSet<Valuation> image;
  for (const auto& m : oracle) image.insert(sigma_c(m).second);
  rep.checks.push_back(compare("sigma_c(oracle) = bounded constraint equilibrium models", image, bounded, show));

  ModelSet<TimedTrace> back;
  CheckResult timed{"theta_c(bounded models) = oracle", true, {}};
  for (const auto& v : bounded) {
    try {
      back.insert(theta_c(v, v, lambda));
    } catch (const InputError&) {
      timed.pass = false;
      if (timed.counterexamples.size() < 3) timed.counterexamples.push_back("not timed: " + v.str());
    }
  }
  if (timed.pass) timed = compare(timed.name, oracle, back, one_line);
  rep.checks.push_back(std::move(timed));
  rep.checks.push_back(compare("dc enumerator = bounded constraint equilibrium models", bounded, practical, show));
  return rep;
}

VerificationReport crosscheck_backends(const MetricProgram& p, Step lambda, TimePoint nu,
                                       const VerifyOptions& options) {
  VerificationReport rep;
  rep.program = pretty_print(p);
  rep.backend = "both";
  rep.lambda = lambda;
  rep.nu = nu;
  const auto bool_models =
      enumerate_equilibrium_models(compile_bool(p, context(lambda, nu, options.simplify)), options.solver);
  const auto dc_models =
      enumerate_dc_models(compile_dc(p, context(lambda, std::nullopt, options.simplify)), nu, options.htc);
  const auto from_bool = traces_of_bool(bool_models, lambda);
  const auto from_dc = traces_of_dc(dc_models, lambda);
  rep.oracle_models = from_bool.size();
  rep.backend_models = from_dc.size();
  rep.checks.push_back(compare("bool traces = dc traces", from_bool, from_dc, one_line));
  return rep;
}

// ---------------------------------------------------------------------------
// Random programs

std::string RandomProgramOptions::str() const {
  return "seed=" + std::to_string(seed) + " atoms=" + std::to_string(atoms) + " max_rules=" +
         std::to_string(max_rules) + " max_bound=" + std::to_string(max_bound);
}

RandomProgramGenerator::RandomProgramGenerator(RandomProgramOptions options)
    : options_(options), state_(options.seed) {
  if (options_.atoms == 0 || options_.atoms > 26) throw InputError("atom pool size must be in 1..26");
  if (options_.max_rules == 0) throw InputError("max_rules must be positive");
}

std::uint64_t RandomProgramGenerator::below(std::uint64_t n) {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z % n;
}

MetricProgram RandomProgramGenerator::next() {
  auto atom = [&] { return AtomName{std::string(1, static_cast<char>('a' + below(options_.atoms))), {}}; };
  MetricProgram p;
  const std::uint64_t rules = 1 + below(options_.max_rules);
  for (std::uint64_t i = 0; i < rules; ++i) {
    MetricRule r;
    if (below(2) == 0) {
      const std::uint64_t m = below(options_.max_bound + 1);
      Interval interval = Interval::unbounded(m);
      if (below(8) == 0) {
        interval = Interval::bounded(m, m);
      } else {
        // Upper bound drawn from m+1..max_bound, or omega.
        const std::uint64_t choices = options_.max_bound - m + 1;
        const std::uint64_t pick = below(choices);
        if (pick + 1 < choices) interval = Interval::bounded(m, m + 1 + pick);
      }
      r.head = NextHead{interval, atom()};
    } else {
      DisjunctiveHead head;
      // Integrity constraints (empty heads) are kept rarer than proper heads.
      const std::uint64_t n = below(6) == 0 ? 0 : 1 + below(2);
      for (std::uint64_t j = 0; j < n; ++j) head.push_back({atom(), below(4) == 0});
      r.head = head;
    }
    std::uint64_t body = below(3);
    if (body == 0 && !r.is_next() && r.disjunction().empty()) body = 1;
    for (std::uint64_t j = 0; j < body; ++j) {
      const std::uint64_t pick = below(options_.atoms + 2);
      BodyAtom b = pick < options_.atoms ? BodyAtom::of(AtomName{std::string(1, static_cast<char>('a' + pick)), {}})
                   : pick == options_.atoms ? BodyAtom::initial()
                                            : BodyAtom::final();
      r.body.push_back({std::move(b), below(3) == 0});
    }
    // A next rule whose body holds in the final state has no models, so most
    // get guarded the way inertia rules are.
    if (r.is_next() && below(4) != 0) r.body.push_back({BodyAtom::final(), true});
    p.rules.push_back(std::move(r));
  }
  return p;
}

std::vector<MetricProgram> random_corpus(std::size_t count, const RandomProgramOptions& options) {
  RandomProgramGenerator gen(options);
  std::vector<MetricProgram> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.next());
  return out;
}

// ---------------------------------------------------------------------------
// Benchmark

namespace {

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

bool BenchReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string BenchReport::json() const {
  ordered_json j;
  j["format"] = "metac-bench";
  j["version"] = 1;
  ordered_json arr = ordered_json::array();
  for (const auto& e : entries) {
    arr.push_back({{"name", e.name},
                   {"scale", e.scale},
                   {"nu", e.nu},
                   {"dc_rules", e.dc_counts.total()},
                   {"bool_rules", e.bool_total()},
                   {"bool_core", e.bool_core},
                   {"bool_delta", e.bool_delta},
                   {"bool_psi", e.bool_psi},
                   {"bool_materialized", e.bool_materialized},
                   {"dc_compile_s", e.dc_compile_s},
                   {"bool_compile_s", e.bool_compile_s}});
  }
  j["entries"] = arr;
  j["pass"] = pass();
  j["checks"] = checks_json(checks);
  return j.dump(2) + "\n";
}

std::string BenchReport::table() const {
  std::ostringstream out;
  out << "program               scale     nu   dc rules     bool rules   dc compile (s)\n";
  for (const auto& e : entries) {
    char line[160];
    std::snprintf(line, sizeof line, "%-20s %6llu %6llu %10llu %14llu%s %14.6f\n", e.name.c_str(),
                  static_cast<unsigned long long>(e.scale), static_cast<unsigned long long>(e.nu),
                  static_cast<unsigned long long>(e.dc_counts.total()),
                  static_cast<unsigned long long>(e.bool_total()), e.bool_materialized ? " " : "*", e.dc_compile_s);
    out << line;
  }
  if (std::any_of(entries.begin(), entries.end(), [](const BenchEntry& e) { return !e.bool_materialized; })) {
    out << "(* counted, not built)\n";
  }
  checks_table(out, checks);
  return out.str();
}

BenchReport bench(const std::vector<std::pair<std::string, MetricProgram>>& corpus,
                  const std::vector<std::uint64_t>& scales, const BenchOptions& options) {
  BenchReport rep;
  for (const auto& [name, program] : corpus) {
    std::vector<BenchEntry> rows;
    for (std::uint64_t scale : scales) {
      BenchEntry e;
      e.name = name;
      e.scale = scale;
      e.nu = options.nu_base * scale;
      const MetricProgram scaled = scale_durations(program, scale);

      GroundProgram dc;
      e.dc_compile_s = std::numeric_limits<double>::infinity();
      for (unsigned r = 0; r < std::max(1u, options.repetitions); ++r) {
        e.dc_compile_s = std::min(e.dc_compile_s, seconds([&] { dc = compile_dc(scaled, context(options.lambda, {}, false)); }));
      }
      e.dc_counts = dc.counts;

      e.bool_core = scaled.rules.size() * options.lambda;
      e.bool_delta = 1 + static_cast<std::uint64_t>(options.lambda - 1) * (e.nu + 1);
      e.bool_psi = count_psi_bool(scaled, options.lambda, e.nu);
      if (e.bool_total() <= options.materialize_limit) {
        GroundProgram b;
        e.bool_compile_s = seconds([&] { b = compile_bool(scaled, context(options.lambda, e.nu, false)); });
        e.bool_materialized = true;
        if (b.counts.core != e.bool_core || b.counts.delta != e.bool_delta || b.counts.psi != e.bool_psi) {
          rep.checks.push_back({name + ": Boolean size estimate matches the built program", false,
                                {"scale " + std::to_string(scale)}});
        }
      }
      rows.push_back(e);
    }
    if (rows.empty()) continue;

    CheckResult constant{name + ": dc rule count is scale-invariant", true, {}};
    CheckResult growing{name + ": Boolean rule count strictly increases with nu", true, {}};
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].dc_counts.total() != rows[0].dc_counts.total()) {
        constant.pass = false;
        constant.counterexamples.push_back("scale " + std::to_string(rows[i].scale) + ": " +
                                           std::to_string(rows[i].dc_counts.total()) + " vs " +
                                           std::to_string(rows[0].dc_counts.total()));
      }
      if (rows[i].nu > rows[i - 1].nu && rows[i].bool_total() <= rows[i - 1].bool_total()) {
        growing.pass = false;
        growing.counterexamples.push_back("scale " + std::to_string(rows[i].scale));
      }
    }
    rep.checks.push_back(constant);
    if (rows.size() > 1) rep.checks.push_back(growing);

    // Least-squares fit y = c * nu^2.
    double sxy = 0;
    double sxx = 0;
    for (const auto& r : rows) {
      const double x2 = static_cast<double>(r.nu) * static_cast<double>(r.nu);
      sxy += x2 * static_cast<double>(r.bool_total());
      sxx += x2 * x2;
    }
    if (sxx > 0) {
      const double c = sxy / sxx;
      CheckResult fit{name + ": Boolean rule count within 20% of c*nu^2", true, {}};
      for (const auto& r : rows) {
        const double predicted = c * static_cast<double>(r.nu) * static_cast<double>(r.nu);
        const double dev = std::abs(static_cast<double>(r.bool_total()) - predicted) / predicted;
        if (dev > 0.20) {
          fit.pass = false;
          fit.counterexamples.push_back("scale " + std::to_string(r.scale) + ": deviation " + std::to_string(dev));
        }
      }
      rep.checks.push_back(fit);
    }

    const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(),
                                              [](const BenchEntry& a, const BenchEntry& b) { return a.scale < b.scale; });
    if (lo != hi) {
      CheckResult time{name + ": dc compile time at the largest scale within 2x of the smallest", true, {}};
      // Sub-microsecond differences are timer noise.
      if (hi->dc_compile_s > 2 * lo->dc_compile_s + 1e-6) {
        time.pass = false;
        time.counterexamples.push_back(std::to_string(hi->dc_compile_s) + " s vs " + std::to_string(lo->dc_compile_s) + " s");
      }
      rep.checks.push_back(time);
    }
    for (auto& r : rows) rep.entries.push_back(std::move(r));
  }
  return rep;
}

}  // namespace metac
