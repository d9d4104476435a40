#include "support.hpp"

#include <sys/stat.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>

#include "metac/adapters.hpp"

using namespace metac;
using metac::test::atom;

namespace {

// Writes an executable shell script that plays a solver.
struct FakeSolver {
  std::string path;
  explicit FakeSolver(const std::string& body) {
    char dir[] = "/tmp/metac-fake-XXXXXX";
    REQUIRE(::mkdtemp(dir) != nullptr);
    path = std::string(dir) + "/solver";
    std::ofstream(path) << "#!/bin/sh\n"
                        << "if [ \"$1\" = \"--version\" ]; then echo 'fake-solver 1.0'; exit 0; fi\n"
                        << body << "\n";
    ::chmod(path.c_str(), 0755);
  }
  ~FakeSolver() {
    ::unlink(path.c_str());
    ::rmdir(path.substr(0, path.rfind('/')).c_str());
  }
  AdapterConfig config() const {
    AdapterConfig c;
    c.asp_bin = path;
    c.aspdc_bin = path;
    return c;
  }
};

struct ClearEnv {
  ClearEnv() {
    ::unsetenv("METAC_ASP_BIN");
    ::unsetenv("METAC_ASPDC_BIN");
  }
};

}  // namespace

TEST_CASE("plain answer sets") {
  const std::string out =
      "clingo version 5.6.2\nReading from stdin\nSolving...\n"
      "Answer: 1\no(a,0) o(at(ram,home),1) t(0,0) t(1,2) other(x)\n"
      "Answer: 2\no(a,0) t(0,0) t(1,1)\n"
      "SATISFIABLE\n\nModels       : 2\n";
  std::size_t answers = 0;
  const auto models = parse_solver_output(out, &answers);
  CHECK(answers == 2);
  REQUIRE(models.size() == 2);
  ExternalModel first;
  first.atoms = {StepAtom{atom("a"), 0}, StepAtom{atom("at(ram,home)"), 1}};
  first.time_atoms = {TimeAtomBool{0, 0}, TimeAtomBool{1, 2}};
  CHECK(models.count(first) == 1);
}

TEST_CASE("hybrid answers with assignments") {
  const std::string out =
      "clingcon version 5.2.0\nSolving...\n"
      "Answer: 1\no(a,0) o(b,1)\nAssignment:\nt(0)=0 t(1)=2\n"
      "Answer: 2\no(a,0)\nAssignment: t(0)=0 t(1)=3\n"
      "SATISFIABLE\n";
  const auto models = parse_solver_output(out);
  REQUIRE(models.size() == 2);
  ExternalModel m;
  m.atoms = {StepAtom{atom("a"), 0}, StepAtom{atom("b"), 1}};
  m.times = {{0, 0}, {1, 2}};
  CHECK(models.count(m) == 1);
  ExternalModel n;
  n.atoms = {StepAtom{atom("a"), 0}};
  n.times = {{0, 0}, {1, 3}};
  CHECK(models.count(n) == 1);
}

TEST_CASE("unparseable shown atoms") {
  CHECK_THROWS_AS(parse_solver_output("Answer: 1\no(a,x)\n"), AdapterError);
  try {
    parse_solver_output("Answer: 1\nt(0,zz)\n");
    FAIL("expected a parse failure");
  } catch (const AdapterError& e) {
    CHECK(e.kind() == AdapterError::Kind::ParseFailure);
    CHECK(e.raw_output().find("t(0,zz)") != std::string::npos);
  }
  CHECK(parse_solver_output("UNSATISFIABLE\n").empty());
}

TEST_CASE("term parsing") {
  CHECK(parse_term("at(ram,office)") == atom("at(ram,office)"));
  CHECK(parse_term("a") == atom("a"));
  CHECK_FALSE(parse_term("f(a").has_value());
  CHECK_FALSE(parse_term("").has_value());
}

TEST_CASE("missing binary") {
  ClearEnv clear;
  CHECK_FALSE(find_solver(SolverKind::Asp).has_value());
  AdapterConfig c;
  c.aspdc_bin = "/nonexistent/solver";
  try {
    run_external(SolverKind::AspDc, "a.", true, 5, c);
    FAIL("expected BinaryNotFound");
  } catch (const AdapterError& e) {
    CHECK(e.kind() == AdapterError::Kind::BinaryNotFound);
    CHECK(std::string(e.what()).find("METAC_ASPDC_BIN") != std::string::npos);
  }
}

TEST_CASE("environment wins over configuration") {
  ClearEnv clear;
  FakeSolver env_solver("exit 20");
  AdapterConfig c;
  c.asp_bin = "/nonexistent/solver";
  ::setenv("METAC_ASP_BIN", env_solver.path.c_str(), 1);
  CHECK(find_solver(SolverKind::Asp, c) == env_solver.path);
  ::unsetenv("METAC_ASP_BIN");
  CHECK_FALSE(find_solver(SolverKind::Asp, c).has_value());
}

TEST_CASE("fake solver: input on stdin, models back") {
  ClearEnv clear;
  // Echoes the program length so the test can see stdin arrived, then one answer.
  FakeSolver fake(
      "prog=$(cat)\n"
      "[ \"$1\" = \"0\" ] || exit 3\n"
      "[ \"$prog\" = \"o(a,0).\" ] || exit 4\n"
      "echo 'Answer: 1'\necho 'o(a,0)'\necho SATISFIABLE\nexit 30");
  const auto r = run_external(SolverKind::Asp, "o(a,0).", true, 10, fake.config());
  CHECK(r.version == "fake-solver 1.0");
  CHECK(r.exit_status == 30);
  CHECK_FALSE(r.unsat);
  REQUIRE(r.models.size() == 1);
  CHECK(r.models.begin()->atoms == std::set<StepAtom>{StepAtom{atom("a"), 0}});
}

TEST_CASE("fake solver: unsatisfiable is zero models, not an error") {
  ClearEnv clear;
  FakeSolver fake("cat >/dev/null\necho UNSATISFIABLE\nexit 20");
  const auto r = run_external(SolverKind::Asp, ":- .", true, 10, fake.config());
  CHECK(r.unsat);
  CHECK(r.models.empty());
}

TEST_CASE("fake solver: error exit and timeout") {
  ClearEnv clear;
  FakeSolver broken("cat >/dev/null\necho 'parse error' >&2\nexit 65");
  try {
    run_external(SolverKind::AspDc, "x.", false, 10, broken.config());
    FAIL("expected ExitError");
  } catch (const AdapterError& e) {
    CHECK(e.kind() == AdapterError::Kind::ExitError);
    CHECK(std::string(e.what()).find("parse error") != std::string::npos);
  }

  FakeSolver slow("exec sleep 30");
  try {
    run_external(SolverKind::AspDc, "x.", false, 1, slow.config());
    FAIL("expected Timeout");
  } catch (const AdapterError& e) {
    CHECK(e.kind() == AdapterError::Kind::Timeout);
  }
}
