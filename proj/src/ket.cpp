#include "klauskit/ket.hpp"

#include <cmath>

namespace klauskit {

namespace {
constexpr double kAmpFloor = 1e-15;
}

void ket::set_amplitude(const vertex_coloring& basis, cplx amp) {
    if (static_cast<int>(basis.size()) != n_) throw shape_error("basis label length != n");
    for (int c : basis)
        if (c < 0 || c >= d_) throw shape_error("basis digit out of range");
    if (amp == cplx{0.0, 0.0})
        amps_.erase(basis);
    else
        amps_[basis] = amp;
}

cplx ket::amplitude(const vertex_coloring& basis) const {
    auto it = amps_.find(basis);
    return it == amps_.end() ? cplx{0.0, 0.0} : it->second;
}

double ket::norm() const {
    double s = 0.0;
    for (const auto& [_, a] : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void ket::normalize() {
    double nrm = norm();
    if (nrm == 0.0) throw zero_state("state has no nonzero amplitude");
    for (auto it = amps_.begin(); it != amps_.end();) {
        it->second /= nrm;
        if (std::abs(it->second) < kAmpFloor)
            it = amps_.erase(it);
        else
            ++it;
    }
    if (amps_.empty()) throw zero_state("state vanished after pruning");
}

std::vector<vertex_coloring> ket::support() const {
    std::vector<vertex_coloring> out;
    out.reserve(amps_.size());
    for (const auto& [c, _] : amps_) out.push_back(c);
    return out;
}

double fidelity(const ket& a, const ket& b) {
    if (a.party_count() != b.party_count() || a.local_dim() != b.local_dim())
        throw shape_error("fidelity between states of different shape");
    // iterate the sparser map
    const ket& small = a.term_count() <= b.term_count() ? a : b;
    const ket& large = a.term_count() <= b.term_count() ? b : a;
    cplx overlap{0.0, 0.0};
    for (const auto& [basis, amp] : small.amplitudes()) {
        cplx other = large.amplitude(basis);
        if (&small == &a)
            overlap += std::conj(amp) * other;
        else
            overlap += std::conj(other) * amp;
    }
    return std::norm(overlap);
}

ket ghz(int n, int d) {
    if (n < 2 || d < 2) throw error("ghz requires n >= 2 and d >= 2");
    ket k(n, d);
    const cplx amp{1.0 / std::sqrt(static_cast<double>(d)), 0.0};
    for (int color = 0; color < d; ++color)
        k.set_amplitude(vertex_coloring(n, color), amp);
    return k;
}

ket herald_ancilla(const ket& in) {
    ket out(in.party_count() + 1, in.local_dim());
    for (const auto& [basis, amp] : in.amplitudes()) {
        vertex_coloring extended = basis;
        extended.push_back(0);
        out.set_amplitude(extended, amp);
    }
    return out;
}

} // namespace klauskit
