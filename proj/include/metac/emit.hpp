// Text serializations of ground programs and their size statistics.
//
//   asp   plain ground ASP: step atoms as o(A,K), time atoms as t(K,D)
//   dc    ASP with difference constraints: t(K) integer variables, &sum atoms
//   json  versioned interchange document, readable back with read_json
//
// Output is byte-for-byte deterministic: LF newlines, no locale formatting.

#pragma once

#include <string>

#include "metac/core.hpp"

namespace metac {

/// Throws InputError on difference-constraint programs.
std::string emit_asp(const GroundProgram& program);

/// Throws InputError on Boolean-backend programs. With `head_shift`,
/// `:- B, not c.` is printed as `c :- B.`.
std::string emit_dc(const GroundProgram& program, bool head_shift = true);

std::string emit_json(const GroundProgram& program);
/// Inverse of emit_json. Throws InputError on malformed documents.
GroundProgram read_json(const std::string& text);

/// Renders one ground atom / rule in the asp or dc surface syntax.
std::string render_atom(const GroundAtom& atom);
std::string render_rule(const GroundRule& rule);

struct SizeReport {
  Backend backend = Backend::Boolean;
  /// Rule counts per program part before simplification.
  SectionCounts sections;
  /// Rules actually present (after simplification).
  std::size_t emitted_rules = 0;
  /// Distinct atoms by kind.
  std::size_t step_atoms = 0;
  std::size_t time_atoms = 0;
  std::size_t constraint_atoms = 0;
  /// Occurrences of constraint atoms across all rules.
  std::size_t constraint_occurrences = 0;

  std::string json() const;
  std::string table() const;
};

SizeReport stats(const GroundProgram& program);

}  // namespace metac
