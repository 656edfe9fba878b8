#pragma once

#include <span>
#include <vector>

#include "klauskit/engine.hpp"
#include "klauskit/ket.hpp"
#include "klauskit/solution.hpp"

namespace klauskit {

struct optimizer_config {
    int restarts = 5;
    int max_iterations = 300;
    double loss_tolerance = 1e-10; // convergence tolerance on the loss
    double tau = 0.05;             // deletion threshold, relative to max |w|
    double tau_floor = 1e-3;
    double compromise = 1e-3;          // tolerated fidelity drop per deletion step
    double fidelity_threshold = 0.999; // converged flag
    uint64_t seed = 0;
    bool real_weights = false;
    exec_policy policy = exec_policy::parallel;
};

// Infidelity of the graph state of `topology` (slot ids) carrying `weights`
// against the target; 1 when the state vanishes. Weights are packed (re, im)
// per edge, or re only in real mode.
double loss(std::span<const double> weights, const std::vector<int>& topology,
            const ket& target, edge_mode mode, bool real_weights = false);

// Analytic d(loss)/d(param); multilinearity makes each partial a sum of
// matching cofactors. Matches central finite differences.
std::vector<double> gradient(std::span<const double> weights,
                             const std::vector<int>& topology, const ket& target,
                             edge_mode mode, bool real_weights = false);

struct minimize_result {
    std::vector<double> params;
    double loss = 1.0;
    double fidelity = 0.0;
    int restarts_used = 0;
};

// Best-of-restarts L-BFGS from uniform [-1,1] initial weights; an optional
// warm start is tried first.
minimize_result minimize_infidelity(const loss_program& prog, const optimizer_config& cfg,
                                    std::span<const double> warm_start = {});
minimize_result minimize_infidelity(const std::vector<int>& topology, const ket& target,
                                    edge_mode mode, const optimizer_config& cfg);

// Continuous design search: minimize over the complete graph, repeatedly
// drop every edge whose weight falls under tau (relative to the largest),
// re-minimize, and halve tau whenever a batch would compromise fidelity.
design_solution theseus(const ket& target, edge_mode mode, const optimizer_config& cfg);

// Certification pass over an optimized solution: per-edge trial deletion in
// seeded random order with full re-minimization; an edge returns if the best
// fidelity drops by more than the compromise threshold.
design_solution theseus_opt(const design_solution& start, const ket& target,
                            const optimizer_config& cfg);

// ---- helpers shared with the klaus engine --------------------------------

// Solution assembly: weights onto a graph, global-phase gauge fixing,
// independent fidelity recomputation via graph_to_state.
design_solution make_solution(const std::vector<int>& topology,
                              std::span<const double> params, const ket& target,
                              edge_mode mode, bool real_weights, double threshold);

std::vector<int> complete_topology(const slot_space& slots);

} // namespace klauskit
