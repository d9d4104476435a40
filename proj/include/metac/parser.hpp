// Text format for ground metric logic programs (`.mlp` files).
//
//   program := rule*
//   rule    := head ":-" body "." | head "." | ":-" body "."
//   head    := hlit (";" hlit)* | "next" "(" "(" nat "," (nat | "w") ")" "," atom ")"
//   hlit    := atom | "not" atom
//   body    := blit ("," blit)*
//   blit    := ["not"] (atom | "initially" | "finally")
//   atom    := ident ["(" term ("," term)* ")"]     term := ident | nat
//
// `%` starts a comment running to the end of the line. Every rule is read as
// being under the always operator.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metac/core.hpp"

namespace metac {

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in bytes
  Severity severity = Severity::Error;
  std::string message;

  std::string str() const;
};

struct ParseResult {
  std::optional<MetricProgram> program;  // set iff there are no errors
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
  std::vector<ParseDiagnostic> errors() const;
  std::vector<ParseDiagnostic> warnings() const;
};

ParseResult parse_program(std::string_view source);

/// Parses or throws InputError carrying the rendered diagnostics.
MetricProgram parse_program_or_throw(std::string_view source, const std::string& origin = "<input>");

/// Reads a `.mlp` file; throws InputError on I/O or syntax errors.
MetricProgram load_program(const std::string& path);

/// Renders a program in the input syntax, one rule per line.
std::string pretty_print(const MetricProgram& program);
std::string pretty_print(const MetricRule& rule);

}  // namespace metac
