#pragma once

#include <string>

#include "klauskit/graph.hpp"
#include "klauskit/ket.hpp"
#include "klauskit/solution.hpp"

namespace klauskit {

// {"n","d","mode":"mono"|"bi","edges":[{"i","j","a","b","w":[re,im]}...]}
std::string graph_json(const colored_graph& g);
colored_graph graph_from_json(const std::string& text);

// {"n","d","terms":[{"ket":[...],"amp":[re,im]}...]}; normalized on load
std::string ket_json(const ket& k);
ket ket_from_json(const std::string& text);

// Graphviz export: one undirected edge per slot, color-pair label,
// penwidth proportional to |w|
std::string graph_dot(const colored_graph& g);

// graph JSON plus fidelity/phases/run metadata
std::string solution_json(const design_solution& sol);

// Accepts a library name or a path to a target-state JSON file.
ket load_target(const std::string& name_or_path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace klauskit
