#pragma once

#include <set>
#include <vector>

#include "klauskit/formula.hpp"
#include "klauskit/graph.hpp"
#include "klauskit/ket.hpp"

namespace klauskit {

// Pairings compatible with coloring c in the given edge mode, realized as
// matchings over edge slots. Bichromatic mode admits every pairing;
// monochromatic mode keeps only pairings joining same-colored vertices.
std::vector<perfect_matching> structural_matchings(const vertex_coloring& c,
                                                   const slot_space& slots);

// Conjunction of the edge variables of one matching (variable id = slot + 1).
formula pm_conjunction(const perfect_matching& p, const slot_space& slots);

// S: every support coloring keeps at least one matching. Throws
// unsatisfiable_by_construction when a support coloring admits no structural
// matching at all.
formula build_state_clauses(const std::set<vertex_coloring>& support, int n, int d,
                            edge_mode mode);

// C: no forbidden coloring may be left with exactly one matching. One clause
// (not b_k or some other b_P) per forbidden coloring and matching k;
// colorings without structural matchings contribute nothing.
formula build_obstruction_clauses(const std::set<vertex_coloring>& forbidden, int n,
                                  int d, edge_mode mode);

// K = S and C, with C streamed over the complement of the target support.
// Variable ids 1..slot_count follow the canonical slot order.
formula build_k(const ket& target, edge_mode mode);

// Edge-variable universe of an encoding, for decoding solver models.
inline slot_space edge_vars_of(const ket& target, edge_mode mode) {
    return slot_space(target.party_count(), target.local_dim(), mode);
}

} // namespace klauskit
