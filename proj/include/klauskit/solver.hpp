#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "klauskit/formula.hpp"

namespace klauskit {

struct assumption {
    int var;    // 1-based, within the CNF range
    bool value;
};

// budget_exceeded is a definite "don't know", never conflated with UNSAT.
enum class sat_status { satisfiable, unsatisfiable, budget_exceeded };

struct solver_stats {
    uint64_t decisions = 0;
    uint64_t propagations = 0;
    uint64_t conflicts = 0;
    uint64_t restarts = 0;
    double elapsed_ms = 0.0;
};

struct solver_config {
    int64_t max_conflicts = -1; // negative: unlimited
    double max_time_ms = -1.0;  // negative: unlimited
    uint64_t seed = 0;          // reserved; the search itself is deterministic
    bool default_polarity = false; // branch False first: absent edges, sparse models
    int restart_base = 100;        // Luby unit, in conflicts
    // Prefer these variables for decisions (1-based). Tseitin auxiliaries are
    // functionally determined by the edge variables, so restricting decisions
    // to the edges keeps completeness and shrinks the search space; a
    // fallback scan still decides any variable propagation leaves open.
    std::vector<int> decision_vars;
};

struct sat_outcome {
    sat_status status;
    std::vector<int8_t> model; // 1-based by variable; filled when satisfiable
    solver_stats stats;
};

// CDCL with two-watched literals, VSIDS-style activity branching, first-UIP
// clause learning and Luby restarts. Deterministic: identical inputs give
// identical outcomes and decision counts. Throws invalid_assumptions when
// the same variable is assumed with both polarities.
sat_outcome solve(const cnf_formula& cnf, std::span<const assumption> assumptions = {},
                  const solver_config& cfg = {});

// True iff the model assigns every variable and satisfies every clause.
bool verify_model(const cnf_formula& cnf, std::span<const int8_t> model);

} // namespace klauskit
