#include "klauskit/formula.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace klauskit {

int32_t formula::push(node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int32_t>(nodes_.size() - 1);
}

int32_t formula::add_const(bool value) {
    return push({op::constant, value ? 1 : 0, {}});
}

int32_t formula::add_var(int var) {
    if (var < 1 || var > var_count_) throw error("formula variable out of range");
    return push({op::variable, var, {}});
}

int32_t formula::add_not(int32_t kid) { return push({op::f_not, 0, {kid}}); }

int32_t formula::add_and(std::vector<int32_t> kids) {
    if (kids.empty()) return add_const(true);
    if (kids.size() == 1) return kids[0];
    return push({op::f_and, 0, std::move(kids)});
}

int32_t formula::add_or(std::vector<int32_t> kids) {
    if (kids.empty()) return add_const(false);
    if (kids.size() == 1) return kids[0];
    return push({op::f_or, 0, std::move(kids)});
}

namespace {

int8_t eval_rec(const formula& f, int32_t idx, std::span<const int8_t> assignment,
                std::vector<int8_t>& memo) {
    if (memo[idx] >= 0) return memo[idx];
    const auto& n = f.at(idx);
    int8_t value = 0;
    switch (n.kind) {
        case formula::op::constant:
            value = static_cast<int8_t>(n.var);
            break;
        case formula::op::variable: {
            if (n.var >= static_cast<int32_t>(assignment.size()) || assignment[n.var] < 0)
                throw incomplete_assignment("variable " + std::to_string(n.var) +
                                            " unassigned during evaluation");
            value = assignment[n.var];
            break;
        }
        case formula::op::f_not:
            value = eval_rec(f, n.kids[0], assignment, memo) ? 0 : 1;
            break;
        case formula::op::f_and: {
            value = 1;
            for (int32_t k : n.kids)
                if (!eval_rec(f, k, assignment, memo)) {
                    value = 0;
                    break;
                }
            break;
        }
        case formula::op::f_or: {
            value = 0;
            for (int32_t k : n.kids)
                if (eval_rec(f, k, assignment, memo)) {
                    value = 1;
                    break;
                }
            break;
        }
    }
    memo[idx] = value;
    return value;
}

class tseitin_builder {
public:
    explicit tseitin_builder(const formula& f) : f_(f), aux_of_(f.size(), 0) {
        cnf_.var_count = f.var_count();
    }

    cnf_formula run() {
        if (f_.root() < 0) throw error("formula has no root");
        std::vector<int32_t> conjuncts;
        flatten_and(f_.root(), conjuncts);
        for (int32_t g : conjuncts) emit_conjunct(g);
        return std::move(cnf_);
    }

private:
    // top-level conjunction structure; a constant False collapses everything
    void flatten_and(int32_t idx, std::vector<int32_t>& out) {
        const auto& n = f_.at(idx);
        if (n.kind == formula::op::f_and) {
            for (int32_t k : n.kids) flatten_and(k, out);
        } else if (n.kind == formula::op::constant && n.var == 1) {
            // contributes nothing
        } else {
            out.push_back(idx);
        }
    }

    void emit_conjunct(int32_t idx) {
        std::vector<int> lits;
        bool tautology = false;
        flatten_or(idx, lits, tautology);
        if (tautology) return;
        add_clause(std::move(lits));
    }

    void flatten_or(int32_t idx, std::vector<int>& lits, bool& tautology) {
        const auto& n = f_.at(idx);
        switch (n.kind) {
            case formula::op::f_or:
                for (int32_t k : n.kids) flatten_or(k, lits, tautology);
                return;
            case formula::op::constant:
                if (n.var == 1) tautology = true;
                return; // False adds no literal
            default:
                lits.push_back(lit_of(idx));
                return;
        }
    }

    // literal standing for an arbitrary subformula; gated subformulas get a
    // biconditionally defined auxiliary variable
    int lit_of(int32_t idx) {
        const auto& n = f_.at(idx);
        switch (n.kind) {
            case formula::op::variable:
                return n.var;
            case formula::op::f_not: {
                const auto& kid = f_.at(n.kids[0]);
                if (kid.kind == formula::op::constant)
                    throw error("negated constant must be simplified before tseitin");
                return -lit_of(n.kids[0]);
            }
            case formula::op::f_and:
                return gate(idx, true);
            case formula::op::f_or:
                return gate(idx, false);
            case formula::op::constant:
            default:
                throw error("constant in literal position");
        }
    }

    int gate(int32_t idx, bool is_and) {
        if (aux_of_[idx] != 0) return aux_of_[idx];
        const auto& n = f_.at(idx);
        std::vector<int> kid_lits;
        kid_lits.reserve(n.kids.size());
        for (int32_t k : n.kids) kid_lits.push_back(lit_of(k));
        int p = ++cnf_.var_count;
        aux_of_[idx] = p;
        if (is_and) {
            // p -> each kid; all kids -> p
            std::vector<int> big;
            big.reserve(kid_lits.size() + 1);
            for (int l : kid_lits) {
                add_clause({-p, l});
                big.push_back(-l);
            }
            big.push_back(p);
            add_clause(std::move(big));
        } else {
            // each kid -> p; p -> some kid
            std::vector<int> big;
            big.reserve(kid_lits.size() + 1);
            big.push_back(-p);
            for (int l : kid_lits) {
                add_clause({-l, p});
                big.push_back(l);
            }
            add_clause(std::move(big));
        }
        return p;
    }

    void add_clause(std::vector<int> lits) {
        // drop duplicates, keep first-occurrence order; skip tautologies
        std::vector<int> out;
        out.reserve(lits.size());
        if (lits.size() <= 16) {
            for (int l : lits) {
                bool dup = false;
                for (int o : out) {
                    if (o == l) dup = true;
                    if (o == -l) return; // x or not-x
                }
                if (!dup) out.push_back(l);
            }
        } else {
            seen_.clear();
            for (int l : lits) {
                if (seen_.count(-l)) return;
                if (seen_.insert(l).second) out.push_back(l);
            }
        }
        cnf_.clauses.push_back(std::move(out));
    }

    const formula& f_;
    std::vector<int> aux_of_;
    cnf_formula cnf_;
    std::unordered_set<int> seen_;
};

} // namespace

bool evaluate(const formula& f, std::span<const int8_t> assignment) {
    if (f.root() < 0) throw error("formula has no root");
    std::vector<int8_t> memo(f.size(), -1);
    return eval_rec(f, f.root(), assignment, memo) != 0;
}

cnf_formula tseitin(const formula& f) { return tseitin_builder(f).run(); }

} // namespace klauskit
