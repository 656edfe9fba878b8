#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "klauskit/graph.hpp"
#include "klauskit/ket.hpp"

namespace klauskit {

// Kernels run either single-threaded or OpenMP-parallel. Both policies walk
// the same fixed-size chunks and combine partial sums in chunk order, so
// results are bit-identical across policies and thread counts.
enum class exec_policy { serial, parallel };

// Pick the parallel path only when there is enough work (total matchings
// across the coloring space) to pay for the fork/join.
exec_policy auto_policy(uint64_t work_units);

// Structural matchings for every vertex coloring of (n, d, mode), stored as
// flat slot-id lists in CSR form. Monochromatic mode keeps only pairings
// whose every pair joins same-colored vertices; bichromatic mode admits all
// pairings for every coloring.
struct matching_table {
    slot_space slots;
    int half; // edges per matching = n/2
    uint64_t coloring_count;
    std::vector<uint32_t> m_begin;  // per coloring, index into matchings; size coloring_count+1
    std::vector<uint32_t> slot_ids; // half entries per matching

    static matching_table build(int n, int d, edge_mode mode);

    uint32_t matching_count(uint64_t c) const { return m_begin[c + 1] - m_begin[c]; }
    uint64_t total_matchings() const { return m_begin.back(); }
};

// Compiled evaluator of the feasibility predicate K over full edge-presence
// assignments: every support coloring keeps at least one fully present
// matching, and no forbidden coloring is left with exactly one.
struct k_program {
    matching_table table;
    std::vector<uint8_t> is_support; // per coloring

    static k_program build(const ket& target, edge_mode mode);

    // presence has one byte per edge slot (0 = absent).
    bool evaluate(std::span<const uint8_t> presence, exec_policy policy) const;
};

// Independent straightforward implementation of the same predicate, kept as
// the reference the kernels are tested and benchmarked against.
bool evaluate_k_reference(const k_program& prog, std::span<const uint8_t> presence);

// Infidelity of the graph state generated by an active edge subset, compiled
// against a fixed target. Parameters are packed per active edge: (re, im)
// interleaved, or just re in real mode.
struct loss_program {
    int param_count = 0;     // real parameter count
    int active_edges = 0;
    int half = 0;
    bool real_mode = false;
    uint64_t coloring_count = 0; // colorings kept (some matching survives)
    uint32_t max_matchings = 0;  // per kept coloring

    std::vector<uint32_t> m_begin;     // per kept coloring
    std::vector<uint32_t> edge_params; // flat, half per matching; active-edge index
    std::vector<cplx> target_amp;      // per kept coloring

    // active_slot[k] = slot id of active edge k (defines the param order)
    std::vector<int> active_slot;

    static loss_program build(const matching_table& table, const ket& target,
                              const std::vector<int>& active_slots, bool real_mode);

    int params_per_edge() const { return real_mode ? 1 : 2; }
    uint64_t total_matchings() const { return edge_params.size() / std::max(half, 1); }
    cplx weight_of(std::span<const double> params, int edge) const;

    // 1 - |<target|state(w)>|^2 / <state|state>; 1 when the state vanishes.
    double loss(std::span<const double> params, exec_policy policy) const;

    // Same, also filling d(loss)/d(param). Gradient is analytic: coloring
    // weights are multilinear, so each partial is a sum of matching cofactors.
    double loss_grad(std::span<const double> params, std::span<double> grad,
                     exec_policy policy) const;

    // Unnormalized W(c) for every kept coloring, plus squared norm.
    void coloring_weights(std::span<const double> params, std::vector<cplx>& w,
                          double& norm_sq, exec_policy policy) const;
};

// Straightforward reference infidelity, independent of the chunked kernels.
double loss_reference(const loss_program& prog, std::span<const double> params);

} // namespace klauskit
