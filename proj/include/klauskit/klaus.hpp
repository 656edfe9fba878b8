#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klauskit/engine.hpp"
#include "klauskit/ket.hpp"
#include "klauskit/optimizer.hpp"
#include "klauskit/solution.hpp"
#include "klauskit/solver.hpp"

namespace klauskit {

enum class edge_status : uint8_t { unclassified, disposable, indispensable };

struct klaus_config {
    sat_mode mode = sat_mode::fixed_true;
    uint64_t seed = 0;
    optimizer_config opt;       // final weight fit (opt.restarts retries)
    int64_t solver_conflicts = -1; // free-search budgets; negative: unlimited
    double solver_time_ms = -1.0;
};

// Feasibility oracle for one (target, edge mode) pair. fixed_true answers by
// evaluating K with unclassified edges present; free_search hands the open
// edges to the CDCL solver under assumptions.
class feasibility_checker {
public:
    feasibility_checker(const ket& target, edge_mode mode, sat_mode smode,
                        int64_t solver_conflicts = -1, double solver_time_ms = -1.0);

    const slot_space& slots() const { return program_.table.slots; }
    double encode_ms() const { return encode_ms_; }
    sat_mode mode() const { return mode_; }

    // K with `candidate` tentatively absent on top of the classification.
    // Throws budget_exceeded if the solver runs out of budget (free mode).
    bool sat_check(const std::vector<edge_status>& status, int candidate_slot);

    // K restricted to exactly the given presence assignment.
    bool satisfied_by(const std::vector<uint8_t>& presence) const;

    // Is K satisfiable at all (complete graph in fixed mode, free otherwise)?
    bool feasible();

private:
    sat_mode mode_;
    k_program program_;
    exec_policy policy_;
    double encode_ms_ = 0.0;
    // free-search machinery, built lazily
    cnf_formula cnf_;
    bool cnf_ready_ = false;
    int64_t solver_conflicts_;
    double solver_time_ms_;
    const ket target_;
    void ensure_cnf();
};

// The greedy logic loop: start from the complete graph, draw random edges,
// classify each as disposable or indispensable by a K check, then fit the
// weights of the survivors. Throws infeasible_target when K is already
// unsatisfiable at the complete graph.
design_solution klaus(const ket& target, edge_mode mode, const klaus_config& cfg);

// Hybrid finisher: delete the start graph's edges one by one while K stays
// satisfiable, then run a single weight optimization.
design_solution klaus_opt(const design_solution& start, const ket& target,
                          const klaus_config& cfg);

struct conjecture_result {
    sat_status status;
    std::optional<colored_graph> witness; // decoded and re-verified when satisfiable
    solver_stats stats;
    double encode_ms = 0.0;
    int var_count = 0;
    size_t clause_count = 0;
};

// Monochromatic GHZ(n,d) feasibility, decided by a full free-variable solve
// of K. The paper-level expectation: satisfiable for (4,2), unsatisfiable
// for n > 4 with d = n/2.
conjecture_result check_monochromatic_conjecture(int n, int d,
                                                 const solver_config& scfg = {});

// {"decisions":[{"edge":{...},"verdict":...}...]}
std::string trace_json(const design_solution& sol);

} // namespace klauskit
