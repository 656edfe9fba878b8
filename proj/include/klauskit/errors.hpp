#pragma once

#include <stdexcept>
#include <string>

namespace klauskit {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Odd vertex count, or a matching request that cannot be met.
struct no_perfect_matching : error {
    using error::error;
};

// Every coloring weight vanished; nothing survives post-selection.
struct zero_state : error {
    using error::error;
};

// Kets with mismatched party count or local dimension.
struct shape_error : error {
    using error::error;
};

// Formula evaluation hit a variable the assignment does not cover.
struct incomplete_assignment : error {
    using error::error;
};

// A support coloring admits no structural matching at all.
struct unsatisfiable_by_construction : error {
    using error::error;
};

// The same variable assumed with both polarities.
struct invalid_assumptions : error {
    using error::error;
};

// Malformed input file; carries a 1-based line number.
struct parse_error : error {
    parse_error(const std::string& msg, int line_no)
        : error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    int line;
};

// K is already unsatisfiable at the complete graph.
struct infeasible_target : error {
    using error::error;
};

// Solver ran out of its configured time/conflict budget.
struct budget_exceeded : error {
    using error::error;
};

} // namespace klauskit
