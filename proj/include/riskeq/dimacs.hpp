// Copyright 2026 The riskeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "riskeq/gadgets.hpp"

namespace riskeq {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// DIMACS CNF: "c" comment lines, one "p cnf <vars> <clauses>" header, then
// zero-terminated clauses which may span lines. A trailing "%" ends input.
inline CnfFormula read_dimacs(std::istream& in) {
  CnfFormula phi;
  long declared_clauses = -1;
  std::vector<int> current;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "%") break;
    if (tok == "p") {
      std::string fmt;
      long vars = 0;
      if (declared_clauses >= 0) throw ParseError("line " + std::to_string(lineno) + ": duplicate header");
      if (!(ls >> fmt >> vars >> declared_clauses) || fmt != "cnf" || vars <= 0 || declared_clauses < 0)
        throw ParseError("line " + std::to_string(lineno) + ": bad header, expected 'p cnf <vars> <clauses>'");
      phi.num_vars = static_cast<int>(vars);
      continue;
    }
    if (declared_clauses < 0) throw ParseError("line " + std::to_string(lineno) + ": clause before header");
    ls.clear();
    ls.str(line);
    long lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (current.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty clause");
        phi.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::labs(lit) > phi.num_vars)
        throw ParseError("line " + std::to_string(lineno) + ": literal " + std::to_string(lit) +
                         " exceeds declared variable count");
      current.push_back(static_cast<int>(lit));
    }
    if (!ls.eof()) throw ParseError("line " + std::to_string(lineno) + ": non-integer token");
  }
  if (declared_clauses < 0) throw ParseError("missing 'p cnf' header");
  if (!current.empty()) phi.clauses.push_back(std::move(current));
  if (static_cast<long>(phi.clauses.size()) != declared_clauses)
    throw ParseError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(phi.clauses.size()));
  validate(phi);
  return phi;
}

inline CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return read_dimacs(in);
}

inline std::string to_dimacs(const CnfFormula& phi) {
  std::ostringstream os;
  os << "p cnf " << phi.num_vars << ' ' << phi.clauses.size() << '\n';
  for (const auto& c : phi.clauses) {
    for (int lit : c) os << lit << ' ';
    os << "0\n";
  }
  return os.str();
}

// 3DM text: first line q, then one 1-based triple "w x y" per line. Blank
// lines and lines starting with '#' are skipped.
inline TdmInstance read_tdm(std::istream& in) {
  TdmInstance t;
  std::string line;
  int lineno = 0;
  bool have_q = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string extra;
    if (!have_q) {
      if (!(ls >> t.q) || (ls >> extra)) throw ParseError("line " + std::to_string(lineno) + ": expected q");
      have_q = true;
      continue;
    }
    std::array<long, 3> tr{};
    if (!(ls >> tr[0] >> tr[1] >> tr[2]) || (ls >> extra))
      throw ParseError("line " + std::to_string(lineno) + ": expected a triple 'w x y'");
    t.triples.push_back(tr);
  }
  if (!have_q) throw ParseError("empty 3DM input");
  try {
    validate(t);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return t;
}

inline TdmInstance parse_tdm(const std::string& text) {
  std::istringstream in(text);
  return read_tdm(in);
}

}  // namespace riskeq
