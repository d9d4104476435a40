#include "metac/adapters.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace metac {

std::string solver_env_key(SolverKind kind) { return kind == SolverKind::Asp ? "METAC_ASP_BIN" : "METAC_ASPDC_BIN"; }

std::optional<std::string> find_solver(SolverKind kind, const AdapterConfig& config) {
  std::optional<std::string> path;
  if (const char* env = std::getenv(solver_env_key(kind).c_str()); env && *env) {
    path = env;
  } else {
    path = kind == SolverKind::Asp ? config.asp_bin : config.aspdc_bin;
  }
  if (!path || ::access(path->c_str(), X_OK) != 0) return std::nullopt;
  return path;
}

// ---------------------------------------------------------------------------
// Output parsing

namespace {

// Splits `f(a,g(b),c)` style text at top-level commas.
std::optional<std::vector<std::string>> split_args(const std::string& text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) return std::nullopt;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (depth != 0) return std::nullopt;
  out.push_back(cur);
  return out;
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno || *end != '\0') return std::nullopt;
  return v;
}

// Splits an answer line at spaces outside parentheses and quotes.
std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (!quoted && c == '(') ++depth;
    if (!quoted && c == ')') --depth;
    if (!quoted && depth == 0 && (c == ' ' || c == '\t' || c == '\r')) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Adds one shown token to the model; unknown predicates are ignored.
bool absorb(const std::string& tok, ExternalModel& model) {
  const auto eq = tok.find('=');
  if (eq != std::string::npos && tok.compare(0, 2, "t(") == 0) {
    // Integer assignment t(K)=D.
    const auto lhs = tok.substr(0, eq);
    if (lhs.back() != ')') return false;
    const auto k = parse_int(lhs.substr(2, lhs.size() - 3));
    const auto d = parse_int(tok.substr(eq + 1));
    if (!k || !d || *k < 0) return false;
    model.times[static_cast<Step>(*k)] = *d;
    return true;
  }
  const auto open = tok.find('(');
  if (open == std::string::npos || tok.back() != ')') return true;
  const std::string name = tok.substr(0, open);
  const auto args = split_args(tok.substr(open + 1, tok.size() - open - 2));
  if (!args) return false;
  if (name == "o" && args->size() == 2) {
    const auto base = parse_term((*args)[0]);
    const auto k = parse_int((*args)[1]);
    if (!base || !k || *k < 0) return false;
    model.atoms.insert(StepAtom{*base, static_cast<Step>(*k)});
  } else if (name == "t" && args->size() == 2) {
    const auto k = parse_int((*args)[0]);
    const auto d = parse_int((*args)[1]);
    if (!k || !d || *k < 0 || *d < 0) return false;
    model.time_atoms.insert(TimeAtomBool{static_cast<Step>(*k), static_cast<TimePoint>(*d)});
  }
  return true;
}

}  // namespace

std::optional<AtomName> parse_term(const std::string& text) {
  const auto open = text.find('(');
  AtomName out;
  if (open == std::string::npos) {
    if (text.empty()) return std::nullopt;
    out.symbol = text;
    return out;
  }
  if (text.back() != ')' || open == 0) return std::nullopt;
  out.symbol = text.substr(0, open);
  auto args = split_args(text.substr(open + 1, text.size() - open - 2));
  if (!args) return std::nullopt;
  out.args = std::move(*args);
  return out;
}

ModelSet<ExternalModel> parse_solver_output(const std::string& output, std::size_t* answers) {
  ModelSet<ExternalModel> models;
  std::size_t count = 0;
  std::istringstream in(output);
  std::string line;
  std::optional<ExternalModel> current;
  auto flush = [&] {
    if (current) models.insert(std::move(*current));
    current.reset();
  };
  // After "Answer:" comes the atom line; a hybrid solver follows it with an
  // "Assignment:" line and the assignment on the next line.
  bool expect_atoms = false;
  bool expect_assignment = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("Answer:", 0) == 0) {
      flush();
      current.emplace();
      ++count;
      expect_atoms = true;
      continue;
    }
    if (!current) continue;
    if (line.rfind("Assignment:", 0) == 0) {
      expect_assignment = true;
      const std::string rest = line.substr(std::strlen("Assignment:"));
      if (!tokens(rest).empty()) {
        for (const auto& tok : tokens(rest)) {
          if (!absorb(tok, *current)) throw AdapterError(AdapterError::Kind::ParseFailure, "cannot parse '" + tok + "'", output);
        }
        expect_assignment = false;
      }
      continue;
    }
    if (expect_atoms || expect_assignment) {
      for (const auto& tok : tokens(line)) {
        if (!absorb(tok, *current)) {
          throw AdapterError(AdapterError::Kind::ParseFailure, "cannot parse solver token '" + tok + "'", output);
        }
      }
      if (expect_atoms) {
        expect_atoms = false;
      } else {
        expect_assignment = false;
      }
      continue;
    }
    flush();
  }
  flush();
  if (answers) *answers = count;
  return models;
}

// ---------------------------------------------------------------------------
// Process handling

namespace {

struct TempFile {
  std::string path;
  int fd = -1;
  TempFile() {
    const char* dir = std::getenv("TMPDIR");
    path = std::string(dir && *dir ? dir : "/tmp") + "/metac-XXXXXX";
    fd = ::mkstemp(path.data());
    if (fd < 0) throw Error("cannot create temporary file: " + std::string(std::strerror(errno)));
  }
  ~TempFile() {
    if (fd >= 0) ::close(fd);
    ::unlink(path.c_str());
  }
};

struct ProcessOutput {
  int status = -1;
  std::string out;
  std::string err;
};

ProcessOutput run_process(const std::vector<std::string>& argv, const std::string& input, unsigned timeout_s) {
  TempFile in;
  for (std::size_t done = 0; done < input.size();) {
    const ssize_t n = ::write(in.fd, input.data() + done, input.size() - done);
    if (n <= 0) throw Error("cannot write solver input");
    done += static_cast<std::size_t>(n);
  }
  ::lseek(in.fd, 0, SEEK_SET);

  int out_pipe[2];
  int err_pipe[2];
  if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) throw Error("pipe() failed");

  const pid_t pid = ::fork();
  if (pid < 0) throw Error("fork() failed");
  if (pid == 0) {
    ::dup2(in.fd, 0);
    ::dup2(out_pipe[1], 1);
    ::dup2(err_pipe[1], 2);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    ::execv(args[0], args.data());
    _exit(127);
  }
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  ProcessOutput res;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_s);
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  bool timed_out = false;
  char buf[65536];
  while (open_fds > 0) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (timeout_s > 0 && left.count() <= 0) {
      timed_out = true;
      break;
    }
    const int ready = ::poll(fds, 2, timeout_s > 0 ? static_cast<int>(left.count()) : -1);
    if (ready < 0 && errno == EINTR) continue;
    if (ready < 0) break;
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
      if (n > 0) {
        (i == 0 ? res.out : res.err).append(buf, static_cast<std::size_t>(n));
      } else {
        ::close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      }
    }
  }
  for (auto& f : fds) {
    if (f.fd >= 0) ::close(f.fd);
  }
  if (timed_out) {
    ::kill(pid, SIGKILL);
    ::waitpid(pid, nullptr, 0);
    throw AdapterError(AdapterError::Kind::Timeout,
                       argv[0] + " did not finish within " + std::to_string(timeout_s) + " s", res.out);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  res.status = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return res;
}

}  // namespace

ExternalResult run_external(SolverKind kind, const std::string& program_text, bool enumerate_all,
                            unsigned timeout_s, const AdapterConfig& config) {
  const auto bin = find_solver(kind, config);
  if (!bin) {
    throw AdapterError(AdapterError::Kind::BinaryNotFound,
                       "no solver binary configured; set " + solver_env_key(kind) + " or the matching metac.toml key");
  }
  ExternalResult result;
  {
    const auto v = run_process({*bin, "--version"}, "", timeout_s);
    result.version = v.out.substr(0, v.out.find('\n'));
  }
  const auto run = run_process({*bin, enumerate_all ? "0" : "1"}, program_text, timeout_s);
  result.exit_status = run.status;
  switch (run.status) {
    case 0:
    case 10:
    case 30: break;
    case 20: result.unsat = true; break;
    default:
      throw AdapterError(AdapterError::Kind::ExitError,
                         *bin + " exited with status " + std::to_string(run.status) + ": " + run.err,
                         run.out + run.err);
  }
  result.models = parse_solver_output(run.out, &result.answers);
  if (result.unsat && !result.models.empty()) {
    throw AdapterError(AdapterError::Kind::ParseFailure, "solver reported UNSAT but printed answers", run.out);
  }
  return result;
}

}  // namespace metac
