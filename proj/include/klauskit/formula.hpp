#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "klauskit/graph.hpp"

namespace klauskit {

// Boolean formula over positive integer variables, stored as an arena so
// subformulas (the per-matching conjunctions) can be shared.
class formula {
public:
    enum class op : uint8_t { constant, variable, f_and, f_or, f_not };

    struct node {
        op kind;
        int32_t var = 0;   // variable id (op::variable) or truth value (op::constant)
        std::vector<int32_t> kids;
    };

    explicit formula(int var_count = 0) : var_count_(var_count) {}

    int var_count() const { return var_count_; }
    void set_var_count(int v) { var_count_ = v; }

    int32_t add_const(bool value);
    int32_t add_var(int var); // 1-based, must be <= var_count
    int32_t add_not(int32_t kid);
    int32_t add_and(std::vector<int32_t> kids); // empty -> True, singleton -> kid
    int32_t add_or(std::vector<int32_t> kids);  // empty -> False, singleton -> kid

    void set_root(int32_t r) { root_ = r; }
    int32_t root() const { return root_; }
    const std::vector<node>& nodes() const { return nodes_; }
    const node& at(int32_t idx) const { return nodes_[idx]; }
    size_t size() const { return nodes_.size(); }

private:
    int32_t push(node n);

    int var_count_;
    std::vector<node> nodes_;
    int32_t root_ = -1;
};

// Standard Boolean evaluation. assignment[v] for v in 1..var_count is 0, 1,
// or -1 for unassigned; touching an unassigned variable throws
// incomplete_assignment.
bool evaluate(const formula& f, std::span<const int8_t> assignment);

// Clause-normal form with 1-based variables; positive literal v, negative -v.
struct cnf_formula {
    int var_count = 0;
    std::vector<std::vector<int>> clauses;

    bool operator==(const cnf_formula&) const = default;
};

// Equisatisfiable CNF. Fresh auxiliary variables are introduced, with full
// biconditional defining clauses, for every conjunction (or disjunction)
// that sits inside a clause; plain and/or nesting is flattened. Models of
// the CNF project onto models of f, and any model of f extends to the CNF.
cnf_formula tseitin(const formula& f);

} // namespace klauskit
