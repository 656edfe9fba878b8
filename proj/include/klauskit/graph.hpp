#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "klauskit/errors.hpp"

namespace klauskit {

using cplx = std::complex<double>;

enum class edge_mode { monochromatic, bichromatic };

// One edge slot of an edge-colored graph: vertices i<j, color alpha delivered
// to i and beta to j. Monochromatic graphs keep alpha == beta.
struct edge_key {
    int i = 0;
    int j = 0;
    int alpha = 0;
    int beta = 0;

    auto operator<=>(const edge_key&) const = default;
};

// Color per vertex, index 0..d-1. Entry k is the color of vertex k.
using vertex_coloring = std::vector<int>;

// Partition of {0..n-1} into unordered pairs, each pair stored (lo, hi),
// pairs sorted by first vertex.
using pairing = std::vector<std::pair<int, int>>;

// A perfect matching of a colored graph: vertex-disjoint edges covering
// every vertex once.
struct perfect_matching {
    std::vector<edge_key> edges;

    bool operator==(const perfect_matching&) const = default;
};

class ket; // state emerging from a graph; see ket.hpp

class colored_graph {
public:
    colored_graph() : colored_graph(2, 1, edge_mode::monochromatic) {}
    colored_graph(int n, int d, edge_mode mode);

    int vertex_count() const { return n_; }
    int color_count() const { return d_; }
    edge_mode mode() const { return mode_; }

    // Total number of edge slots this (n, d, mode) admits.
    int max_edges() const;

    void set_edge(const edge_key& e, cplx w);
    void remove_edge(const edge_key& e);
    bool has_edge(const edge_key& e) const;
    cplx weight(const edge_key& e) const;
    size_t edge_count() const { return edges_.size(); }

    const std::map<edge_key, cplx>& edges() const { return edges_; }

    // Convenience for monochromatic edges.
    void set_edge(int i, int j, int color, cplx w) { set_edge({i, j, color, color}, w); }

    static colored_graph complete(int n, int d, edge_mode mode, cplx w = 1.0);

private:
    void validate_key(const edge_key& e) const;

    int n_;
    int d_;
    edge_mode mode_;
    std::map<edge_key, cplx> edges_;
};

// All partitions of {0..n-1} into unordered pairs, canonical order: the
// lowest unmatched vertex is paired first, partners ascending. Count is
// (n-1)!! for even n. Throws no_perfect_matching for odd n.
std::vector<pairing> enumerate_pairings(int n);

// Double factorial (n-1)!! as the expected pairing count.
uint64_t pairing_count(int n);

// Matchings of g whose inherited vertex coloring equals c: pairings where
// every pair (i, j) has edge (i, j, c_i, c_j) present in g.
std::vector<perfect_matching> matchings_for_coloring(const colored_graph& g,
                                                     const vertex_coloring& c);

// W(c) = sum over matchings with coloring c of the product of edge weights.
cplx coloring_weight(const colored_graph& g, const vertex_coloring& c);

// Normalized state sum_c W(c)|c>; zero amplitudes omitted. Throws zero_state
// when every coloring weight vanishes.
ket graph_to_state(const colored_graph& g);

// ---- coloring indexing -------------------------------------------------

// Big-endian mixed-radix index: |c_0 c_1 ... c_{n-1}> -> number base d.
uint64_t coloring_index(const vertex_coloring& c, int d);
vertex_coloring coloring_from_index(uint64_t idx, int n, int d);
uint64_t coloring_space_size(int n, int d);

// ---- slot space ---------------------------------------------------------

// Canonical dense numbering of all edge slots for a given (n, d, mode).
// Pairs run lexicographically (0,1),(0,2),...,(n-2,n-1); within a pair,
// colors run as alpha*d+beta (bichromatic) or alpha (monochromatic).
struct slot_space {
    int n;
    int d;
    edge_mode mode;

    slot_space(int n_, int d_, edge_mode m);

    int pair_count() const { return n * (n - 1) / 2; }
    int colors_per_pair() const { return mode == edge_mode::bichromatic ? d * d : d; }
    int slot_count() const { return pair_count() * colors_per_pair(); }

    int pair_index(int i, int j) const;
    int slot(const edge_key& e) const;
    edge_key key_of(int slot) const;
};

} // namespace klauskit
