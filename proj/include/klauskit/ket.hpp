#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "klauskit/graph.hpp"

namespace klauskit {

// Sparse pure state over n parties with a shared local dimension d.
// Amplitudes below 1e-15 in magnitude are dropped on normalization.
class ket {
public:
    ket(int n, int d) : n_(n), d_(d) {}

    int party_count() const { return n_; }
    int local_dim() const { return d_; }

    void set_amplitude(const vertex_coloring& basis, cplx amp);
    cplx amplitude(const vertex_coloring& basis) const;

    const std::map<vertex_coloring, cplx>& amplitudes() const { return amps_; }
    size_t term_count() const { return amps_.size(); }

    double norm() const;
    // Scales to unit norm and prunes negligible amplitudes.
    // Throws zero_state if there is nothing to normalize.
    void normalize();

    // Basis labels with nonzero amplitude.
    std::vector<vertex_coloring> support() const;

    bool operator==(const ket&) const = default;

private:
    int n_;
    int d_;
    std::map<vertex_coloring, cplx> amps_;
};

// |<a|b>|^2 via the conjugated sparse overlap. Throws shape_error unless
// both party count and local dimension agree.
double fidelity(const ket& a, const ket& b);

// 1/sqrt(d) sum_k |k>^n
ket ghz(int n, int d);

// Appends one party pinned to color 0; norm preserved.
ket herald_ancilla(const ket& k);

// Schmidt-rank-vector triple, quoted from the source that defined the state;
// never recomputed here.
struct srv_triple {
    int a, b, c;
};

struct target_spec {
    std::string name;
    ket state;
    std::optional<srv_triple> srv;
    std::optional<bool> graph_representable;
};

// Every benchmark target: GHZ(4,3), GHZ(6,2), GHZ(8,2), the heralded SRV
// states 544/644/654/955, and the non-representable GHZ(6,3), 544*, 644*.
const std::vector<target_spec>& target_library();

// Library lookup by name; nullptr when absent.
const target_spec* find_target(const std::string& name);

} // namespace klauskit
