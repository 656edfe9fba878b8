#include "klauskit/graph.hpp"

#include <cmath>
#include <string>

#include "klauskit/ket.hpp"

namespace klauskit {

colored_graph::colored_graph(int n, int d, edge_mode mode) : n_(n), d_(d), mode_(mode) {
    if (n < 2) throw error("graph needs at least 2 vertices, got " + std::to_string(n));
    if (d < 1) throw error("graph needs at least 1 color, got " + std::to_string(d));
}

int colored_graph::max_edges() const {
    int pairs = n_ * (n_ - 1) / 2;
    return mode_ == edge_mode::bichromatic ? pairs * d_ * d_ : pairs * d_;
}

void colored_graph::validate_key(const edge_key& e) const {
    if (!(0 <= e.i && e.i < e.j && e.j < n_))
        throw error("edge vertices out of range or not canonical (i<j)");
    if (e.alpha < 0 || e.alpha >= d_ || e.beta < 0 || e.beta >= d_)
        throw error("edge color out of range");
    if (mode_ == edge_mode::monochromatic && e.alpha != e.beta)
        throw error("bichromatic edge in a monochromatic graph");
}

void colored_graph::set_edge(const edge_key& e, cplx w) {
    validate_key(e);
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw error("edge weight must be finite");
    edges_[e] = w;
}

void colored_graph::remove_edge(const edge_key& e) { edges_.erase(e); }

bool colored_graph::has_edge(const edge_key& e) const { return edges_.count(e) != 0; }

cplx colored_graph::weight(const edge_key& e) const {
    auto it = edges_.find(e);
    return it == edges_.end() ? cplx{0.0, 0.0} : it->second;
}

colored_graph colored_graph::complete(int n, int d, edge_mode mode, cplx w) {
    colored_graph g(n, d, mode);
    slot_space slots(n, d, mode);
    for (int s = 0; s < slots.slot_count(); ++s) g.set_edge(slots.key_of(s), w);
    return g;
}

namespace {

void pairings_rec(std::vector<int>& unmatched, pairing& current,
                  std::vector<pairing>& out) {
    if (unmatched.empty()) {
        out.push_back(current);
        return;
    }
    int lo = unmatched.front();
    for (size_t k = 1; k < unmatched.size(); ++k) {
        int partner = unmatched[k];
        std::vector<int> rest;
        rest.reserve(unmatched.size() - 2);
        for (size_t m = 1; m < unmatched.size(); ++m)
            if (m != k) rest.push_back(unmatched[m]);
        current.emplace_back(lo, partner);
        pairings_rec(rest, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<pairing> enumerate_pairings(int n) {
    if (n < 2) throw no_perfect_matching("need at least 2 vertices");
    if (n % 2 != 0) throw no_perfect_matching("odd vertex count has no perfect matching");
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::vector<pairing> out;
    out.reserve(pairing_count(n));
    pairing current;
    pairings_rec(all, current, out);
    return out;
}

uint64_t pairing_count(int n) {
    uint64_t c = 1;
    for (int k = n - 1; k > 1; k -= 2) c *= static_cast<uint64_t>(k);
    return c;
}

std::vector<perfect_matching> matchings_for_coloring(const colored_graph& g,
                                                     const vertex_coloring& c) {
    const int n = g.vertex_count();
    if (static_cast<int>(c.size()) != n) throw error("coloring length != vertex count");
    for (int col : c)
        if (col < 0 || col >= g.color_count()) throw error("coloring color out of range");

    std::vector<perfect_matching> out;
    for (const pairing& p : enumerate_pairings(n)) {
        perfect_matching m;
        m.edges.reserve(p.size());
        bool ok = true;
        for (auto [i, j] : p) {
            edge_key e{i, j, c[i], c[j]};
            if (!g.has_edge(e)) {
                ok = false;
                break;
            }
            m.edges.push_back(e);
        }
        if (ok) out.push_back(std::move(m));
    }
    return out;
}

cplx coloring_weight(const colored_graph& g, const vertex_coloring& c) {
    cplx total{0.0, 0.0};
    for (const perfect_matching& m : matchings_for_coloring(g, c)) {
        cplx prod{1.0, 0.0};
        for (const edge_key& e : m.edges) prod *= g.weight(e);
        total += prod;
    }
    return total;
}

ket graph_to_state(const colored_graph& g) {
    const int n = g.vertex_count();
    const int d = g.color_count();
    if (n % 2 != 0) throw no_perfect_matching("odd vertex count has no perfect matching");

    ket state(n, d);
    const uint64_t total = coloring_space_size(n, d);
    for (uint64_t idx = 0; idx < total; ++idx) {
        vertex_coloring c = coloring_from_index(idx, n, d);
        cplx w = coloring_weight(g, c);
        if (w != cplx{0.0, 0.0}) state.set_amplitude(c, w);
    }
    state.normalize(); // throws zero_state when empty
    return state;
}

uint64_t coloring_index(const vertex_coloring& c, int d) {
    uint64_t idx = 0;
    for (int col : c) idx = idx * static_cast<uint64_t>(d) + static_cast<uint64_t>(col);
    return idx;
}

vertex_coloring coloring_from_index(uint64_t idx, int n, int d) {
    vertex_coloring c(n);
    for (int k = n - 1; k >= 0; --k) {
        c[k] = static_cast<int>(idx % d);
        idx /= d;
    }
    return c;
}

uint64_t coloring_space_size(int n, int d) {
    uint64_t total = 1;
    for (int k = 0; k < n; ++k) total *= static_cast<uint64_t>(d);
    return total;
}

slot_space::slot_space(int n_, int d_, edge_mode m) : n(n_), d(d_), mode(m) {
    if (n < 2 || d < 1) throw error("invalid slot space");
}

int slot_space::pair_index(int i, int j) const {
    // lexicographic rank of (i, j), i < j
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

int slot_space::slot(const edge_key& e) const {
    int color = mode == edge_mode::bichromatic ? e.alpha * d + e.beta : e.alpha;
    return pair_index(e.i, e.j) * colors_per_pair() + color;
}

edge_key slot_space::key_of(int slot) const {
    const int cpp = colors_per_pair();
    int pair = slot / cpp;
    int color = slot % cpp;
    int i = 0;
    while (pair >= n - i - 1) {
        pair -= n - i - 1;
        ++i;
    }
    int j = i + 1 + pair;
    if (mode == edge_mode::bichromatic) return {i, j, color / d, color % d};
    return {i, j, color, color};
}

} // namespace klauskit
