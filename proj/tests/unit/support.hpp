// Small helpers shared by the unit tests.

#pragma once

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "metac/core.hpp"
#include "metac/parser.hpp"

namespace metac::test {

inline MetricProgram prog(const std::string& src) { return parse_program_or_throw(src); }

inline AtomName atom(const std::string& text) {
  const auto p = parse_program_or_throw(text + ".");
  return p.rules.at(0).disjunction().at(0).atom;
}

inline StepAtom sa(const std::string& text, Step k) { return StepAtom{atom(text), k}; }

inline std::string source_path(const std::string& rel) { return std::string(METAC_SOURCE_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline MetricProgram corpus(const std::string& name) { return load_program(source_path("corpus/" + name)); }


}  // namespace metac::test
