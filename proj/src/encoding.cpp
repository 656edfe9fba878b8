#include "klauskit/encoding.hpp"

#include <algorithm>

namespace klauskit {

namespace {

std::vector<perfect_matching> matchings_from_pairings(const std::vector<pairing>& pairings,
                                                      const vertex_coloring& c,
                                                      const slot_space& slots) {
    std::vector<perfect_matching> out;
    for (const pairing& p : pairings) {
        perfect_matching m;
        m.edges.reserve(p.size());
        bool ok = true;
        for (auto [i, j] : p) {
            if (slots.mode == edge_mode::monochromatic && c[i] != c[j]) {
                ok = false;
                break;
            }
            m.edges.push_back({i, j, c[i], c[j]});
        }
        if (ok) out.push_back(std::move(m));
    }
    return out;
}

// Conjunction node over the matching's edge variables, appended to f.
int32_t append_pm_conjunction(formula& f, const perfect_matching& p,
                              const slot_space& slots) {
    std::vector<int32_t> kids;
    kids.reserve(p.edges.size());
    for (const edge_key& e : p.edges) kids.push_back(f.add_var(slots.slot(e) + 1));
    return f.add_and(std::move(kids));
}

// B(c): disjunction over the matchings of one support coloring.
int32_t append_support_coloring(formula& f, const std::vector<pairing>& pairings,
                                const vertex_coloring& c, const slot_space& slots) {
    auto matchings = matchings_from_pairings(pairings, c, slots);
    if (matchings.empty())
        throw unsatisfiable_by_construction(
            "support coloring admits no structural matching");
    std::vector<int32_t> disjuncts;
    disjuncts.reserve(matchings.size());
    for (const auto& m : matchings) disjuncts.push_back(append_pm_conjunction(f, m, slots));
    return f.add_or(std::move(disjuncts));
}

// Clauses of one forbidden coloring: for each matching k, not b_k or some
// other b_P. A lone matching degenerates to not b_k.
void append_forbidden_coloring(formula& f, const std::vector<pairing>& pairings,
                               const vertex_coloring& c, const slot_space& slots,
                               std::vector<int32_t>& conjuncts) {
    auto matchings = matchings_from_pairings(pairings, c, slots);
    if (matchings.empty()) return;
    std::vector<int32_t> b;
    b.reserve(matchings.size());
    for (const auto& m : matchings) b.push_back(append_pm_conjunction(f, m, slots));
    for (size_t k = 0; k < b.size(); ++k) {
        std::vector<int32_t> clause;
        clause.reserve(b.size());
        clause.push_back(f.add_not(b[k]));
        for (size_t p = 0; p < b.size(); ++p)
            if (p != k) clause.push_back(b[p]);
        conjuncts.push_back(f.add_or(std::move(clause)));
    }
}

} // namespace

std::vector<perfect_matching> structural_matchings(const vertex_coloring& c,
                                                   const slot_space& slots) {
    return matchings_from_pairings(enumerate_pairings(slots.n), c, slots);
}

formula pm_conjunction(const perfect_matching& p, const slot_space& slots) {
    formula f(slots.slot_count());
    f.set_root(append_pm_conjunction(f, p, slots));
    return f;
}

formula build_state_clauses(const std::set<vertex_coloring>& support, int n, int d,
                            edge_mode mode) {
    if (support.empty()) throw error("support must be non-empty");
    slot_space slots(n, d, mode);
    const auto pairings = enumerate_pairings(n);
    formula f(slots.slot_count());
    std::vector<int32_t> conjuncts;
    conjuncts.reserve(support.size());
    for (const auto& c : support)
        conjuncts.push_back(append_support_coloring(f, pairings, c, slots));
    f.set_root(f.add_and(std::move(conjuncts)));
    return f;
}

formula build_obstruction_clauses(const std::set<vertex_coloring>& forbidden, int n,
                                  int d, edge_mode mode) {
    slot_space slots(n, d, mode);
    const auto pairings = enumerate_pairings(n);
    formula f(slots.slot_count());
    std::vector<int32_t> conjuncts;
    for (const auto& c : forbidden)
        append_forbidden_coloring(f, pairings, c, slots, conjuncts);
    f.set_root(f.add_and(std::move(conjuncts)));
    return f;
}

formula build_k(const ket& target, edge_mode mode) {
    const int n = target.party_count();
    const int d = target.local_dim();
    if (n % 2 != 0) throw no_perfect_matching("odd party count cannot be matched");
    slot_space slots(n, d, mode);
    const auto pairings = enumerate_pairings(n);
    formula f(slots.slot_count());
    std::vector<int32_t> conjuncts;

    std::vector<uint64_t> support_idx;
    support_idx.reserve(target.term_count());
    for (const auto& basis : target.support()) support_idx.push_back(coloring_index(basis, d));
    std::sort(support_idx.begin(), support_idx.end());

    for (uint64_t idx : support_idx)
        conjuncts.push_back(
            append_support_coloring(f, pairings, coloring_from_index(idx, n, d), slots));

    // complement streamed in ascending coloring order
    const uint64_t total = coloring_space_size(n, d);
    size_t next_support = 0;
    for (uint64_t idx = 0; idx < total; ++idx) {
        if (next_support < support_idx.size() && support_idx[next_support] == idx) {
            ++next_support;
            continue;
        }
        append_forbidden_coloring(f, pairings, coloring_from_index(idx, n, d), slots,
                                  conjuncts);
    }

    f.set_root(f.add_and(std::move(conjuncts)));
    return f;
}

} // namespace klauskit
