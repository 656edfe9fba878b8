#pragma once

#include <iosfwd>
#include <string>

#include "klauskit/formula.hpp"
#include "klauskit/graph.hpp"

namespace klauskit {

// "p cnf V C" header followed by zero-terminated clause lines.
void export_dimacs(const cnf_formula& cnf, std::ostream& out);
std::string export_dimacs(const cnf_formula& cnf);

// Parser accepts leading comment lines ('c ...') anywhere; throws parse_error
// with a 1-based line number on malformed headers, out-of-range literals,
// or clause-count mismatches.
cnf_formula import_dimacs(std::istream& in);
cnf_formula import_dimacs_string(const std::string& text);

// Sidecar {"n","d","mode","edge_vars":[{"id","i","j","a","b"}...]} so models
// from any DIMACS solver can be decoded back to edges.
std::string varmap_json(const slot_space& slots);

} // namespace klauskit
