#include "klauskit/engine.hpp"

#include <cmath>

namespace klauskit {

namespace {
constexpr uint64_t kParallelThreshold = 8192; // matchings
// Fixed-size reduction chunks, a function of the problem alone so results
// never depend on the thread count. About 32 chunks, at least 64 colorings
// each.
inline uint64_t chunk_for(uint64_t colorings) {
    uint64_t c = (colorings + 31) / 32;
    return c < 64 ? 64 : c;
}
constexpr double kZeroNorm = 1e-300;
} // namespace

exec_policy auto_policy(uint64_t work_units) {
    return work_units >= kParallelThreshold ? exec_policy::parallel
                                            : exec_policy::serial;
}

matching_table matching_table::build(int n, int d, edge_mode mode) {
    if (n % 2 != 0) throw no_perfect_matching("odd vertex count has no perfect matching");
    matching_table t{slot_space(n, d, mode), n / 2, coloring_space_size(n, d), {}, {}};
    if (t.coloring_count > (1ULL << 24))
        throw error("coloring space too large to tabulate");

    const auto pairings = enumerate_pairings(n);
    t.m_begin.reserve(t.coloring_count + 1);
    t.m_begin.push_back(0);

    vertex_coloring c(n);
    for (uint64_t idx = 0; idx < t.coloring_count; ++idx) {
        // decode big-endian mixed radix in place
        uint64_t rest = idx;
        for (int k = n - 1; k >= 0; --k) {
            c[k] = static_cast<int>(rest % d);
            rest /= d;
        }
        for (const pairing& p : pairings) {
            if (mode == edge_mode::monochromatic) {
                bool same = true;
                for (auto [i, j] : p)
                    if (c[i] != c[j]) {
                        same = false;
                        break;
                    }
                if (!same) continue;
            }
            for (auto [i, j] : p)
                t.slot_ids.push_back(static_cast<uint32_t>(t.slots.slot({i, j, c[i], c[j]})));
        }
        t.m_begin.push_back(static_cast<uint32_t>(t.slot_ids.size() / t.half));
        if (t.slot_ids.size() > (1ULL << 28))
            throw error("matching table too large to tabulate");
    }
    return t;
}

k_program k_program::build(const ket& target, edge_mode mode) {
    k_program prog{matching_table::build(target.party_count(), target.local_dim(), mode), {}};
    prog.is_support.assign(prog.table.coloring_count, 0);
    for (const auto& basis : target.support())
        prog.is_support[coloring_index(basis, target.local_dim())] = 1;
    return prog;
}

namespace {

// True when coloring c keeps K happy under the given presence assignment.
inline bool coloring_ok(const k_program& prog, uint64_t c,
                        std::span<const uint8_t> presence) {
    const auto& t = prog.table;
    const uint32_t begin = t.m_begin[c];
    const uint32_t end = t.m_begin[c + 1];
    const int half = t.half;
    int present = 0;
    for (uint32_t m = begin; m < end; ++m) {
        const uint32_t* s = &t.slot_ids[static_cast<size_t>(m) * half];
        bool all = true;
        for (int k = 0; k < half; ++k)
            if (!presence[s[k]]) {
                all = false;
                break;
            }
        if (all && ++present >= 2) break; // two is already safe either way
    }
    if (prog.is_support[c]) return present >= 1;
    return present != 1;
}

} // namespace

bool k_program::evaluate(std::span<const uint8_t> presence, exec_policy policy) const {
    const int64_t count = static_cast<int64_t>(table.coloring_count);
    const bool par = policy == exec_policy::parallel;
    int violated = 0;
#pragma omp parallel for schedule(static) if (par)
    for (int64_t c = 0; c < count; ++c) {
        if (violated) continue;
        if (!coloring_ok(*this, static_cast<uint64_t>(c), presence)) {
#pragma omp atomic write
            violated = 1;
        }
    }
    return !violated;
}

bool evaluate_k_reference(const k_program& prog, std::span<const uint8_t> presence) {
    for (uint64_t c = 0; c < prog.table.coloring_count; ++c)
        if (!coloring_ok(prog, c, presence)) return false;
    return true;
}

loss_program loss_program::build(const matching_table& table, const ket& target,
                                 const std::vector<int>& active_slots, bool real_mode) {
    loss_program prog;
    prog.real_mode = real_mode;
    prog.half = table.half;
    prog.active_slot = active_slots;
    prog.active_edges = static_cast<int>(active_slots.size());
    prog.param_count = prog.active_edges * prog.params_per_edge();

    std::vector<int32_t> param_of(table.slots.slot_count(), -1);
    for (int k = 0; k < prog.active_edges; ++k) param_of[active_slots[k]] = k;

    std::vector<cplx> amp_by_coloring(table.coloring_count, cplx{0.0, 0.0});
    for (const auto& [basis, amp] : target.amplitudes())
        amp_by_coloring[coloring_index(basis, target.local_dim())] = amp;

    prog.m_begin.push_back(0);
    const int half = table.half;
    std::vector<uint32_t> scratch(half);
    for (uint64_t c = 0; c < table.coloring_count; ++c) {
        uint32_t kept = 0;
        for (uint32_t m = table.m_begin[c]; m < table.m_begin[c + 1]; ++m) {
            const uint32_t* s = &table.slot_ids[static_cast<size_t>(m) * half];
            bool inside = true;
            for (int k = 0; k < half; ++k) {
                int32_t p = param_of[s[k]];
                if (p < 0) {
                    inside = false;
                    break;
                }
                scratch[k] = static_cast<uint32_t>(p);
            }
            if (!inside) continue;
            prog.edge_params.insert(prog.edge_params.end(), scratch.begin(), scratch.end());
            ++kept;
        }
        if (kept == 0) continue; // W(c) identically zero on this topology
        prog.m_begin.push_back(static_cast<uint32_t>(prog.edge_params.size() / half));
        prog.target_amp.push_back(amp_by_coloring[c]);
        prog.max_matchings = std::max(prog.max_matchings, kept);
    }
    prog.coloring_count = prog.target_amp.size();
    return prog;
}

cplx loss_program::weight_of(std::span<const double> params, int edge) const {
    const int ppe = params_per_edge();
    return real_mode ? cplx{params[edge], 0.0}
                     : cplx{params[edge * ppe], params[edge * ppe + 1]};
}

namespace {

struct chunk_sums {
    cplx overlap{0.0, 0.0};
    double norm_sq = 0.0;
};

// W(c) plus per-edge cofactors for one coloring; cof has room for
// max_matchings * half entries.
inline cplx coloring_weight_and_cofactors(const loss_program& prog,
                                          std::span<const double> params,
                                          uint64_t c, cplx* cof) {
    const int half = prog.half;
    const uint32_t begin = prog.m_begin[c];
    const uint32_t end = prog.m_begin[c + 1];
    cplx w_sum{0.0, 0.0};
    cplx pre[8];
    for (uint32_t m = begin; m < end; ++m) {
        const uint32_t* e = &prog.edge_params[static_cast<size_t>(m) * half];
        cplx* mc = cof ? cof + static_cast<size_t>(m - begin) * half : nullptr;
        // prefix/suffix products give every leave-one-out cofactor
        pre[0] = cplx{1.0, 0.0};
        for (int k = 0; k < half; ++k) pre[k + 1] = pre[k] * prog.weight_of(params, e[k]);
        w_sum += pre[half];
        if (mc) {
            cplx suf{1.0, 0.0};
            for (int k = half - 1; k >= 0; --k) {
                mc[k] = pre[k] * suf;
                suf *= prog.weight_of(params, e[k]);
            }
        }
    }
    return w_sum;
}

} // namespace

void loss_program::coloring_weights(std::span<const double> params, std::vector<cplx>& w,
                                    double& norm_sq, exec_policy policy) const {
    w.assign(coloring_count, cplx{0.0, 0.0});
    const uint64_t chunk = chunk_for(coloring_count);
    const uint64_t nchunks = (coloring_count + chunk - 1) / chunk;
    std::vector<double> n_part(nchunks, 0.0);
    const bool par = policy == exec_policy::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int64_t ch = 0; ch < static_cast<int64_t>(nchunks); ++ch) {
        const uint64_t lo = static_cast<uint64_t>(ch) * chunk;
        const uint64_t hi = std::min(coloring_count, lo + chunk);
        double n_sum = 0.0;
        for (uint64_t c = lo; c < hi; ++c) {
            cplx wc = coloring_weight_and_cofactors(*this, params, c, nullptr);
            w[c] = wc;
            n_sum += std::norm(wc);
        }
        n_part[ch] = n_sum;
    }
    norm_sq = 0.0;
    for (double v : n_part) norm_sq += v;
}

double loss_program::loss(std::span<const double> params, exec_policy policy) const {
    const uint64_t chunk = chunk_for(coloring_count);
    const uint64_t nchunks = (coloring_count + chunk - 1) / chunk;
    if (coloring_count == 0) return 1.0;
    std::vector<chunk_sums> part(nchunks);
    const bool par = policy == exec_policy::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int64_t ch = 0; ch < static_cast<int64_t>(nchunks); ++ch) {
        const uint64_t lo = static_cast<uint64_t>(ch) * chunk;
        const uint64_t hi = std::min(coloring_count, lo + chunk);
        chunk_sums s;
        for (uint64_t c = lo; c < hi; ++c) {
            cplx wc = coloring_weight_and_cofactors(*this, params, c, nullptr);
            s.overlap += std::conj(target_amp[c]) * wc;
            s.norm_sq += std::norm(wc);
        }
        part[ch] = s;
    }
    cplx overlap{0.0, 0.0};
    double norm_sq = 0.0;
    for (const auto& s : part) {
        overlap += s.overlap;
        norm_sq += s.norm_sq;
    }
    if (norm_sq < kZeroNorm) return 1.0; // zero state: worst loss, not an error
    return 1.0 - std::norm(overlap) / norm_sq;
}

double loss_program::loss_grad(std::span<const double> params, std::span<double> grad,
                               exec_policy policy) const {
    const int edges = active_edges;
    std::fill(grad.begin(), grad.end(), 0.0);
    const uint64_t chunk = chunk_for(coloring_count);
    const uint64_t nchunks = (coloring_count + chunk - 1) / chunk;
    if (coloring_count == 0) return 1.0;

    std::vector<chunk_sums> part(nchunks);
    // per-chunk, per-edge sums: p = sum a_c * conj(cof), q = sum W(c) * conj(cof)
    std::vector<cplx> p_part(nchunks * edges, cplx{0.0, 0.0});
    std::vector<cplx> q_part(nchunks * edges, cplx{0.0, 0.0});
    const bool par = policy == exec_policy::parallel;

#pragma omp parallel for schedule(static) if (par)
    for (int64_t ch = 0; ch < static_cast<int64_t>(nchunks); ++ch) {
        const uint64_t lo = static_cast<uint64_t>(ch) * chunk;
        const uint64_t hi = std::min(coloring_count, lo + chunk);
        chunk_sums s;
        cplx* p = &p_part[static_cast<size_t>(ch) * edges];
        cplx* q = &q_part[static_cast<size_t>(ch) * edges];
        std::vector<cplx> cof(static_cast<size_t>(max_matchings) * half);
        for (uint64_t c = lo; c < hi; ++c) {
            cplx wc = coloring_weight_and_cofactors(*this, params, c, cof.data());
            s.overlap += std::conj(target_amp[c]) * wc;
            s.norm_sq += std::norm(wc);
            const uint32_t begin = m_begin[c];
            const uint32_t end = m_begin[c + 1];
            for (uint32_t m = begin; m < end; ++m) {
                const uint32_t* e = &edge_params[static_cast<size_t>(m) * half];
                const cplx* mc = &cof[static_cast<size_t>(m - begin) * half];
                for (int k = 0; k < half; ++k) {
                    cplx cbar = std::conj(mc[k]);
                    p[e[k]] += target_amp[c] * cbar;
                    q[e[k]] += wc * cbar;
                }
            }
        }
        part[ch] = s;
    }

    cplx overlap{0.0, 0.0};
    double norm_sq = 0.0;
    for (const auto& s : part) {
        overlap += s.overlap;
        norm_sq += s.norm_sq;
    }
    if (norm_sq < kZeroNorm) return 1.0;

    const double fid = std::norm(overlap) / norm_sq;
    const int ppe = params_per_edge();
    for (int e = 0; e < edges; ++e) {
        cplx p{0.0, 0.0}, q{0.0, 0.0};
        for (uint64_t ch = 0; ch < nchunks; ++ch) {
            p += p_part[static_cast<size_t>(ch) * edges + e];
            q += q_part[static_cast<size_t>(ch) * edges + e];
        }
        // Wirtinger derivative of the fidelity w.r.t. conj(w_e)
        cplx g = overlap * p / norm_sq - (std::norm(overlap) / (norm_sq * norm_sq)) * q;
        grad[e * ppe] = -2.0 * g.real();
        if (!real_mode) grad[e * ppe + 1] = -2.0 * g.imag();
    }
    return 1.0 - fid;
}

double loss_reference(const loss_program& prog, std::span<const double> params) {
    cplx overlap{0.0, 0.0};
    double norm_sq = 0.0;
    for (uint64_t c = 0; c < prog.coloring_count; ++c) {
        cplx wc{0.0, 0.0};
        for (uint32_t m = prog.m_begin[c]; m < prog.m_begin[c + 1]; ++m) {
            cplx prod{1.0, 0.0};
            for (int k = 0; k < prog.half; ++k)
                prod *= prog.weight_of(params, prog.edge_params[static_cast<size_t>(m) * prog.half + k]);
            wc += prod;
        }
        overlap += std::conj(prog.target_amp[c]) * wc;
        norm_sq += std::norm(wc);
    }
    if (norm_sq < kZeroNorm) return 1.0;
    return 1.0 - std::norm(overlap) / norm_sq;
}

} // namespace klauskit
