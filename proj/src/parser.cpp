#include "metac/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace metac {

std::string ParseDiagnostic::str() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " +
         (severity == Severity::Error ? "error" : "warning") + ": " + message;
}

std::vector<ParseDiagnostic> ParseResult::errors() const {
  std::vector<ParseDiagnostic> out;
  for (const auto& d : diagnostics) {
    if (d.severity == ParseDiagnostic::Severity::Error) out.push_back(d);
  }
  return out;
}

std::vector<ParseDiagnostic> ParseResult::warnings() const {
  std::vector<ParseDiagnostic> out;
  for (const auto& d : diagnostics) {
    if (d.severity == ParseDiagnostic::Severity::Warning) out.push_back(d);
  }
  return out;
}

namespace {

enum class Tok { Ident, Variable, Nat, LParen, RParen, Comma, Semicolon, Dot, If, Bad, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token tok;
      tok.line = line_;
      tok.column = col_;
      if (pos_ >= src_.size()) {
        tok.kind = Tok::End;
        out.push_back(tok);
        return out;
      }
      const char c = src_[pos_];
      if (std::islower(static_cast<unsigned char>(c))) {
        tok.kind = Tok::Ident;
        tok.text = take_word();
      } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        tok.kind = Tok::Variable;
        tok.text = take_word();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        tok.kind = Tok::Nat;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          tok.text += src_[pos_];
          advance();
        }
      } else if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        tok.kind = Tok::If;
        tok.text = ":-";
        advance();
        advance();
      } else {
        tok.text = std::string(1, c);
        switch (c) {
          case '(': tok.kind = Tok::LParen; break;
          case ')': tok.kind = Tok::RParen; break;
          case ',': tok.kind = Tok::Comma; break;
          case ';': tok.kind = Tok::Semicolon; break;
          case '.': tok.kind = Tok::Dot; break;
          default: tok.kind = Tok::Bad; break;
        }
        advance();
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string take_word() {
    std::string out;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') break;
      out += c;
      advance();
    }
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

bool is_keyword(const std::string& s) {
  return s == "not" || s == "next" || s == "initially" || s == "finally";
}

// Raised inside the parser to abandon the current rule.
struct SyntaxError {
  ParseDiagnostic diag;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParseResult run() {
    MetricProgram program;
    bool failed = false;
    while (peek().kind != Tok::End) {
      try {
        program.rules.push_back(rule());
      } catch (const SyntaxError& e) {
        diags_.push_back(e.diag);
        failed = true;
        recover();
      }
    }
    ParseResult result;
    result.diagnostics = std::move(diags_);
    if (!failed) result.program = std::move(program);
    return result;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, std::string message) {
    throw SyntaxError{{at.line, at.column, ParseDiagnostic::Severity::Error, std::move(message)}};
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::Bad: return "unexpected character '" + t.text + "'";
      default: return "'" + t.text + "'";
    }
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      const Token& t = peek();
      if (t.kind == Tok::Bad && t.text == "|") {
        fail(t, "'|' is not a disjunction separator; use ';'");
      }
      fail(t, std::string("expected ") + what + ", found " + describe(t));
    }
    return take();
  }

  void recover() {
    while (peek().kind != Tok::End && peek().kind != Tok::Dot) take();
    if (peek().kind == Tok::Dot) take();
  }

  MetricRule rule() {
    MetricRule r;
    if (peek().kind == Tok::If) {
      take();
      r.head = DisjunctiveHead{};
      r.body = body();
      expect(Tok::Dot, "'.'");
      return r;
    }
    r.head = head();
    if (peek().kind == Tok::If) {
      take();
      r.body = body();
    }
    expect(Tok::Dot, "'.' or ':-'");
    return r;
  }

  std::variant<DisjunctiveHead, NextHead> head() {
    if (peek().kind == Tok::Ident && peek().text == "next" && peek(1).kind == Tok::LParen) {
      return next_head();
    }
    DisjunctiveHead lits;
    for (;;) {
      bool negated = false;
      if (peek().kind == Tok::Ident && peek().text == "not") {
        take();
        negated = true;
      }
      lits.push_back({atom(), negated});
      if (peek().kind != Tok::Semicolon) break;
      take();
    }
    return lits;
  }

  NextHead next_head() {
    take();  // next
    expect(Tok::LParen, "'('");
    const Token& open = expect(Tok::LParen, "'(' opening the interval");
    const std::uint64_t lower = natural(expect(Tok::Nat, "a natural lower bound"));
    expect(Tok::Comma, "','");
    Interval interval{lower, std::nullopt};
    if (peek().kind == Tok::Ident && peek().text == "w") {
      take();
    } else if (peek().kind == Tok::Nat) {
      interval.upper = natural(take());
    } else {
      fail(peek(), "expected a natural upper bound or 'w', found " + describe(peek()));
    }
    expect(Tok::RParen, "')' closing the interval");
    expect(Tok::Comma, "','");
    AtomName a = atom();
    expect(Tok::RParen, "')'");
    if (interval.is_empty()) {
      diags_.push_back({open.line, open.column, ParseDiagnostic::Severity::Warning,
                        "empty interval " + interval.str() + " can never be satisfied"});
    }
    return {interval, std::move(a)};
  }

  std::vector<Literal<BodyAtom>> body() {
    std::vector<Literal<BodyAtom>> lits;
    if (peek().kind == Tok::Dot) return lits;  // `:- .` is the unconditional constraint
    for (;;) {
      bool negated = false;
      if (peek().kind == Tok::Ident && peek().text == "not") {
        take();
        negated = true;
      }
      if (peek().kind == Tok::Ident && peek().text == "initially") {
        take();
        lits.push_back({BodyAtom::initial(), negated});
      } else if (peek().kind == Tok::Ident && peek().text == "finally") {
        take();
        lits.push_back({BodyAtom::final(), negated});
      } else {
        lits.push_back({BodyAtom::of(atom()), negated});
      }
      if (peek().kind != Tok::Comma) break;
      take();
    }
    return lits;
  }

  AtomName atom() {
    const Token& t = peek();
    if (t.kind == Tok::Variable) {
      fail(t, "variable '" + t.text + "' is not supported; programs must be ground");
    }
    if (t.kind != Tok::Ident) fail(t, "expected an atom, found " + describe(t));
    if (is_keyword(t.text)) fail(t, "'" + t.text + "' is a reserved word and cannot name an atom");
    if (t.text == "o" || t.text == "t") {
      fail(t, "atom name '" + t.text + "' is reserved for the translated program");
    }
    AtomName a{take().text, {}};
    if (peek().kind == Tok::LParen) {
      take();
      for (;;) {
        const Token& arg = peek();
        if (arg.kind == Tok::Variable) {
          fail(arg, "variable '" + arg.text + "' is not supported; programs must be ground");
        }
        if (arg.kind != Tok::Ident && arg.kind != Tok::Nat) {
          fail(arg, "expected a constant or number, found " + describe(arg));
        }
        if (arg.kind == Tok::Nat) natural(arg);
        a.args.push_back(take().text);
        if (peek().kind != Tok::Comma) break;
        take();
      }
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  std::uint64_t natural(const Token& t) {
    std::uint64_t value = 0;
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) fail(t, "number '" + t.text + "' is out of range");
    return value;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ParseDiagnostic> diags_;
};

std::string render_literal(const Literal<BodyAtom>& lit) {
  std::string out = lit.negated ? "not " : "";
  switch (lit.atom.kind) {
    case BodyAtom::Kind::Initial: return out + "initially";
    case BodyAtom::Kind::Final: return out + "finally";
    case BodyAtom::Kind::Atom: return out + lit.atom.atom.str();
  }
  return out;
}

}  // namespace

ParseResult parse_program(std::string_view source) {
  return Parser(Lexer(source).run()).run();
}

MetricProgram parse_program_or_throw(std::string_view source, const std::string& origin) {
  auto result = parse_program(source);
  if (!result.ok()) {
    std::string msg;
    for (const auto& d : result.errors()) {
      if (!msg.empty()) msg += "\n";
      msg += origin + ":" + d.str();
    }
    throw InputError(msg);
  }
  return std::move(*result.program);
}

MetricProgram load_program(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_program_or_throw(buf.str(), path);
}

std::string pretty_print(const MetricRule& rule) {
  std::string out;
  if (rule.is_next()) {
    const auto& nh = rule.next_head();
    out = "next((" + std::to_string(nh.interval.lower) + "," +
          (nh.interval.upper ? std::to_string(*nh.interval.upper) : std::string("w")) + ")," +
          nh.atom.str() + ")";
  } else {
    const auto& lits = rule.disjunction();
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i) out += "; ";
      if (lits[i].negated) out += "not ";
      out += lits[i].atom.str();
    }
  }
  if (!rule.body.empty() || out.empty()) {
    out += out.empty() ? ":-" : " :-";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      out += i ? ", " : " ";
      out += render_literal(rule.body[i]);
    }
  }
  return out + ".";
}

std::string pretty_print(const MetricProgram& program) {
  std::string out;
  for (const auto& r : program.rules) out += pretty_print(r) + "\n";
  return out;
}

}  // namespace metac
