#pragma once

#include <string>
#include <vector>

#include "klauskit/graph.hpp"

namespace klauskit {

// How a feasibility check treats the edges that are not yet classified:
// fixed_true evaluates K with all of them present (pure evaluation);
// free_search leaves them open for the CDCL solver.
enum class sat_mode { fixed_true, free_search };

inline const char* to_string(sat_mode m) {
    return m == sat_mode::fixed_true ? "fixed-true" : "free";
}

struct trace_entry {
    edge_key edge;
    bool disposable; // false: indispensable
};

struct phase_times {
    double encode_ms = 0.0; // table / clause generation
    double sat_ms = 0.0;    // feasibility checks
    double opt_ms = 0.0;    // continuous minimization
    double total_ms = 0.0;
};

struct design_solution {
    colored_graph graph; // surviving edges carrying the optimized weights
    double fidelity = 0.0;
    int edge_count = 0;
    bool converged = false;
    uint64_t seed = 0;
    std::string algorithm;
    sat_mode mode = sat_mode::fixed_true;
    phase_times phases;
    double finisher_ms = 0.0; // the hybrid pass alone: K checks or re-minimizations
    std::vector<trace_entry> trace; // classification decisions, in order
};

} // namespace klauskit
