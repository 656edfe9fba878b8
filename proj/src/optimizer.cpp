#include "klauskit/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "klauskit/lbfgs.hpp"
#include "klauskit/rng.hpp"

namespace klauskit {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

loss_program compile(const std::vector<int>& topology, const ket& target, edge_mode mode,
                     bool real_weights) {
    auto table = matching_table::build(target.party_count(), target.local_dim(), mode);
    return loss_program::build(table, target, topology, real_weights);
}

} // namespace

std::vector<int> complete_topology(const slot_space& slots) {
    std::vector<int> v(slots.slot_count());
    for (int s = 0; s < slots.slot_count(); ++s) v[s] = s;
    return v;
}

double loss(std::span<const double> weights, const std::vector<int>& topology,
            const ket& target, edge_mode mode, bool real_weights) {
    if (topology.empty()) throw error("loss needs a nonempty topology");
    auto prog = compile(topology, target, mode, real_weights);
    return prog.loss(weights, auto_policy(prog.total_matchings()));
}

std::vector<double> gradient(std::span<const double> weights,
                             const std::vector<int>& topology, const ket& target,
                             edge_mode mode, bool real_weights) {
    if (topology.empty()) throw error("gradient needs a nonempty topology");
    auto prog = compile(topology, target, mode, real_weights);
    std::vector<double> grad(prog.param_count);
    prog.loss_grad(weights, grad, auto_policy(prog.total_matchings()));
    return grad;
}

minimize_result minimize_infidelity(const loss_program& prog, const optimizer_config& cfg,
                                    std::span<const double> warm_start) {
    minimize_result best;
    if (prog.param_count == 0) return best;

    const exec_policy policy =
        cfg.policy == exec_policy::parallel ? auto_policy(prog.total_matchings())
                                            : exec_policy::serial;
    lbfgs_config lcfg;
    lcfg.max_iterations = cfg.max_iterations;
    lcfg.f_epsilon = cfg.loss_tolerance;
    auto objective = [&](const std::vector<double>& x, std::vector<double>& g) {
        return prog.loss_grad(x, g, policy);
    };

    const bool have_warm = warm_start.size() == static_cast<size_t>(prog.param_count);
    const int attempts = cfg.restarts + (have_warm ? 1 : 0);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<double> x(prog.param_count);
        if (have_warm && attempt == 0) {
            std::copy(warm_start.begin(), warm_start.end(), x.begin());
        } else {
            rng r(split_seed(cfg.seed, 0x0137 + static_cast<uint64_t>(attempt)));
            for (double& v : x) v = r.next_double(-1, 1);
        }
        auto res = lbfgs_minimize(x, objective, lcfg);
        ++best.restarts_used;
        if (best.params.empty() || res.fx < best.loss) {
            best.loss = res.fx;
            best.params = std::move(x);
        }
        if (best.loss < cfg.loss_tolerance) break; // exact already
    }
    best.fidelity = 1.0 - best.loss;
    return best;
}

minimize_result minimize_infidelity(const std::vector<int>& topology, const ket& target,
                                    edge_mode mode, const optimizer_config& cfg) {
    if (topology.empty()) throw error("minimize_infidelity needs a nonempty topology");
    auto prog = compile(topology, target, mode, cfg.real_weights);
    return minimize_infidelity(prog, cfg);
}

design_solution make_solution(const std::vector<int>& topology,
                              std::span<const double> params, const ket& target,
                              edge_mode mode, bool real_weights, double threshold) {
    slot_space slots(target.party_count(), target.local_dim(), mode);
    const size_t ppe = real_weights ? 1 : 2;

    std::vector<cplx> weights(topology.size());
    for (size_t e = 0; e < topology.size(); ++e)
        weights[e] = real_weights ? cplx{params[e], 0.0}
                                  : cplx{params[e * ppe], params[e * ppe + 1]};

    auto build_graph = [&](const std::vector<cplx>& w) {
        colored_graph g(slots.n, slots.d, mode);
        for (size_t e = 0; e < topology.size(); ++e)
            g.set_edge(slots.key_of(topology[e]), w[e]);
        return g;
    };

    colored_graph g = build_graph(weights);
    double fid = 0.0;
    try {
        ket produced = graph_to_state(g);
        if (!real_weights) {
            // global-phase gauge: dominant support amplitude real positive
            cplx dominant{0.0, 0.0};
            for (const auto& basis : target.support()) {
                cplx amp = produced.amplitude(basis);
                if (std::abs(amp) > std::abs(dominant)) dominant = amp;
            }
            if (std::abs(dominant) > 0) {
                double phi = -std::arg(dominant) / (slots.n / 2);
                cplx rot{std::cos(phi), std::sin(phi)};
                for (auto& w : weights) w *= rot;
                g = build_graph(weights);
                produced = graph_to_state(g);
            }
        }
        fid = fidelity(target, produced); // independent recomputation
    } catch (const zero_state&) {
        fid = 0.0;
    }

    design_solution sol;
    sol.graph = std::move(g);
    sol.fidelity = fid;
    sol.edge_count = static_cast<int>(topology.size());
    sol.converged = fid >= threshold;
    return sol;
}

design_solution theseus(const ket& target, edge_mode mode, const optimizer_config& cfg) {
    const auto t0 = clock_type::now();
    slot_space slots(target.party_count(), target.local_dim(), mode);
    auto table = matching_table::build(slots.n, slots.d, slots.mode);
    const double encode_ms = ms_since(t0);

    const auto t_opt = clock_type::now();
    std::vector<int> topology = complete_topology(slots);
    const size_t ppe = cfg.real_weights ? 1 : 2;

    uint64_t stream = 0;
    auto minimize_on = [&](const std::vector<int>& topo, std::span<const double> warm) {
        auto prog = loss_program::build(table, target, topo, cfg.real_weights);
        optimizer_config local = cfg;
        local.seed = split_seed(cfg.seed, 0x7E5E05 + stream++);
        return minimize_infidelity(prog, local, warm);
    };

    minimize_result current = minimize_on(topology, {});
    double tau = cfg.tau;
    for (;;) {
        auto weight_at = [&](size_t e) {
            return cfg.real_weights
                       ? cplx{current.params[e], 0.0}
                       : cplx{current.params[2 * e], current.params[2 * e + 1]};
        };
        double max_w = 0.0;
        for (size_t e = 0; e < topology.size(); ++e)
            max_w = std::max(max_w, std::abs(weight_at(e)));

        std::vector<int> survivors;
        std::vector<double> warm;
        for (size_t e = 0; e < topology.size(); ++e) {
            if (std::abs(weight_at(e)) >= tau * max_w) {
                survivors.push_back(topology[e]);
                for (size_t k = 0; k < ppe; ++k) warm.push_back(current.params[e * ppe + k]);
            }
        }
        if (survivors.size() == topology.size()) break; // nothing under threshold
        if (survivors.empty()) {
            tau *= 0.5;
            if (tau < cfg.tau_floor) break;
            continue;
        }
        minimize_result trial = minimize_on(survivors, warm);
        if (trial.fidelity >= current.fidelity - cfg.compromise) {
            topology.swap(survivors);
            current = std::move(trial);
        } else {
            tau *= 0.5; // revert this batch, become more conservative
            if (tau < cfg.tau_floor) break;
        }
    }

    design_solution sol = make_solution(topology, current.params, target, mode,
                                        cfg.real_weights, cfg.fidelity_threshold);
    sol.algorithm = "theseus";
    sol.seed = cfg.seed;
    sol.phases.encode_ms = encode_ms;
    sol.phases.opt_ms = ms_since(t_opt);
    sol.phases.total_ms = ms_since(t0);
    return sol;
}

design_solution theseus_opt(const design_solution& start, const ket& target,
                            const optimizer_config& cfg) {
    const auto t0 = clock_type::now();
    const edge_mode mode = start.graph.mode();
    slot_space slots(target.party_count(), target.local_dim(), mode);
    auto table = matching_table::build(slots.n, slots.d, slots.mode);
    const size_t ppe = cfg.real_weights ? 1 : 2;

    std::vector<int> topology;
    std::vector<double> params;
    for (const auto& [key, w] : start.graph.edges()) {
        topology.push_back(slots.slot(key));
        params.push_back(w.real());
        if (ppe == 2) params.push_back(w.imag());
    }

    const double reference = start.fidelity;

    std::vector<int> order = topology; // stable slot ids, randomized visit order
    rng r(split_seed(cfg.seed, 0x0D37));
    r.shuffle(order);

    uint64_t stream = 0;
    for (int slot : order) {
        std::vector<int> trial_topology;
        std::vector<double> warm;
        for (size_t e = 0; e < topology.size(); ++e) {
            if (topology[e] == slot) continue;
            trial_topology.push_back(topology[e]);
            for (size_t k = 0; k < ppe; ++k) warm.push_back(params[e * ppe + k]);
        }
        if (trial_topology.empty()) continue; // keep the last edge
        auto prog = loss_program::build(table, target, trial_topology, cfg.real_weights);
        optimizer_config local = cfg;
        local.seed = split_seed(cfg.seed, 0xF1D0 + stream++);
        minimize_result trial = minimize_infidelity(prog, local, warm);
        if (trial.fidelity >= reference - cfg.compromise) {
            topology.swap(trial_topology); // deleted definitively
            params = std::move(trial.params);
        }
    }

    design_solution sol = make_solution(topology, params, target, mode, cfg.real_weights,
                                        cfg.fidelity_threshold);
    sol.algorithm = "theseusopt";
    sol.seed = cfg.seed;
    sol.mode = start.mode;
    sol.phases = start.phases;
    sol.finisher_ms = ms_since(t0);
    sol.phases.opt_ms += sol.finisher_ms;
    sol.phases.total_ms += sol.finisher_ms;
    return sol;
}

} // namespace klauskit
