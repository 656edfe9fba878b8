#pragma once

#include <string>
#include <vector>

#include "klauskit/klaus.hpp"
#include "klauskit/optimizer.hpp"
#include "klauskit/solution.hpp"

namespace klauskit {

struct bench_record {
    std::string algorithm;
    std::string target; // carries a trailing '*' for non-representable targets
    uint64_t seed = 0;
    int edges = 0;
    double fidelity = 0.0;
    double total_ms = 0.0;
    double encode_ms = 0.0;
    double sat_ms = 0.0;
    double opt_ms = 0.0;
    bool converged = false;
    double finisher_ms = 0.0; // not a CSV column; hybrid comparisons read it
};

struct bench_options {
    std::vector<std::string> targets;    // library names
    std::vector<std::string> algorithms; // klaus|theseus|theseusopt|klausopt
    int runs = 25;
    uint64_t base_seed = 1; // run i uses base_seed + i
    sat_mode mode = sat_mode::free_search;
    optimizer_config opt;
    int threads = 0; // worker pool size; 0 = library default
    int64_t solver_conflicts = -1;
    double solver_time_ms = -1.0;
};

// The paper-shaped suite: representable targets first, then the three
// starred ones. GHZ_8_2 only joins the extended suite.
std::vector<std::string> default_suite();
std::vector<std::string> extended_suite();
std::vector<std::string> default_algorithms();

// One record per (algorithm, target, run); failures are recorded, not fatal.
std::vector<bench_record> run_bench(const bench_options& opt);

// algorithm,target,seed,edges,fidelity,total_ms,encode_ms,sat_ms,opt_ms,converged
std::string bench_csv(const std::vector<bench_record>& records);

// mean/std per (algorithm, target) cell, computed from the records
std::string bench_summary_json(const std::vector<bench_record>& records);

// Single cell runner shared with the CLI.
design_solution run_algorithm(const std::string& algorithm, const ket& target,
                              edge_mode mode, uint64_t seed, sat_mode smode,
                              const optimizer_config& ocfg, int64_t solver_conflicts,
                              double solver_time_ms);

} // namespace klauskit
