#include "klauskit/klaus.hpp"

#include <algorithm>
#include <chrono>

#include <json.hpp>

#include "klauskit/encoding.hpp"
#include "klauskit/rng.hpp"

namespace klauskit {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

} // namespace

feasibility_checker::feasibility_checker(const ket& target, edge_mode mode,
                                         sat_mode smode, int64_t solver_conflicts,
                                         double solver_time_ms)
    : mode_(smode),
      program_(k_program::build(target, mode)),
      policy_(exec_policy::serial),
      solver_conflicts_(solver_conflicts),
      solver_time_ms_(solver_time_ms),
      target_(target) {
    const auto t0 = clock_type::now();
    policy_ = auto_policy(program_.table.total_matchings());
    if (mode_ == sat_mode::free_search) ensure_cnf();
    encode_ms_ = ms_since(t0);
}

void feasibility_checker::ensure_cnf() {
    if (cnf_ready_) return;
    const auto t0 = clock_type::now();
    cnf_ = tseitin(build_k(target_, program_.table.slots.mode));
    cnf_ready_ = true;
    encode_ms_ += ms_since(t0);
}

bool feasibility_checker::satisfied_by(const std::vector<uint8_t>& presence) const {
    return program_.evaluate(presence, policy_);
}

bool feasibility_checker::sat_check(const std::vector<edge_status>& status,
                                    int candidate_slot) {
    const int slot_count = program_.table.slots.slot_count();
    if (mode_ == sat_mode::fixed_true) {
        std::vector<uint8_t> presence(slot_count, 1);
        for (int s = 0; s < slot_count; ++s)
            if (status[s] == edge_status::disposable) presence[s] = 0;
        presence[candidate_slot] = 0;
        return program_.evaluate(presence, policy_);
    }
    ensure_cnf();
    std::vector<assumption> assumptions;
    for (int s = 0; s < slot_count; ++s) {
        if (s == candidate_slot)
            assumptions.push_back({s + 1, false});
        else if (status[s] == edge_status::disposable)
            assumptions.push_back({s + 1, false});
        else if (status[s] == edge_status::indispensable)
            assumptions.push_back({s + 1, true});
    }
    solver_config scfg;
    scfg.max_conflicts = solver_conflicts_;
    scfg.max_time_ms = solver_time_ms_;
    for (int s = 0; s < slot_count; ++s) scfg.decision_vars.push_back(s + 1);
    auto out = solve(cnf_, assumptions, scfg);
    if (out.status == sat_status::budget_exceeded)
        throw budget_exceeded("solver budget exhausted during classification");
    return out.status == sat_status::satisfiable;
}

bool feasibility_checker::feasible() {
    const int slot_count = program_.table.slots.slot_count();
    if (mode_ == sat_mode::fixed_true)
        return satisfied_by(std::vector<uint8_t>(slot_count, 1));
    ensure_cnf();
    solver_config scfg;
    scfg.max_conflicts = solver_conflicts_;
    scfg.max_time_ms = solver_time_ms_;
    for (int s = 0; s < slot_count; ++s) scfg.decision_vars.push_back(s + 1);
    auto out = solve(cnf_, {}, scfg);
    if (out.status == sat_status::budget_exceeded)
        throw budget_exceeded("solver budget exhausted on the initial check");
    return out.status == sat_status::satisfiable;
}

namespace {

struct classify_result {
    std::vector<edge_status> status;
    std::vector<trace_entry> trace;
    double sat_ms = 0.0;
};

// One edge leaves the pool per step; verdicts never change afterwards.
classify_result classify(feasibility_checker& chk, const std::vector<int>& pool,
                         std::vector<edge_status> status, uint64_t seed) {
    classify_result res;
    std::vector<int> order = pool;
    rng r(split_seed(seed, 0xC1A5));
    r.shuffle(order);

    const auto t0 = clock_type::now();
    for (int slot : order) {
        bool disposable = chk.sat_check(status, slot);
        status[slot] = disposable ? edge_status::disposable : edge_status::indispensable;
        res.trace.push_back({chk.slots().key_of(slot), disposable});
    }
    res.sat_ms = ms_since(t0);
    res.status = std::move(status);
    return res;
}

design_solution finish(feasibility_checker& chk, classify_result cls, const ket& target,
                       edge_mode mode, const klaus_config& cfg, const char* algorithm,
                       std::span<const double> warm, clock_type::time_point t0) {
    const int slot_count = chk.slots().slot_count();

    std::vector<uint8_t> presence(slot_count, 0);
    std::vector<int> survivors;
    for (int s = 0; s < slot_count; ++s)
        if (cls.status[s] == edge_status::indispensable) {
            presence[s] = 1;
            survivors.push_back(s);
        }
    if (!chk.satisfied_by(presence))
        throw error("internal: surviving edge set does not satisfy K");

    const auto t_opt = clock_type::now();
    std::vector<double> best_params;
    if (!survivors.empty()) {
        auto table = matching_table::build(target.party_count(), target.local_dim(), mode);
        auto prog = loss_program::build(table, target, survivors, cfg.opt.real_weights);
        optimizer_config ocfg = cfg.opt;
        ocfg.seed = split_seed(cfg.seed, 0x0F17);
        best_params = minimize_infidelity(prog, ocfg, warm).params;
    }
    design_solution sol = make_solution(survivors, best_params, target, mode,
                                        cfg.opt.real_weights, cfg.opt.fidelity_threshold);

    sol.algorithm = algorithm;
    sol.seed = cfg.seed;
    sol.mode = chk.mode();
    sol.trace = std::move(cls.trace);
    sol.phases.encode_ms = chk.encode_ms();
    sol.phases.sat_ms = cls.sat_ms;
    sol.finisher_ms = cls.sat_ms;
    sol.phases.opt_ms = ms_since(t_opt);
    sol.phases.total_ms = ms_since(t0);
    return sol;
}

} // namespace

design_solution klaus(const ket& target, edge_mode mode, const klaus_config& cfg) {
    const auto t0 = clock_type::now();
    feasibility_checker chk(target, mode, cfg.mode, cfg.solver_conflicts,
                            cfg.solver_time_ms);
    if (!chk.feasible())
        throw infeasible_target("K is unsatisfiable at the complete graph");

    std::vector<int> pool(chk.slots().slot_count());
    for (size_t s = 0; s < pool.size(); ++s) pool[s] = static_cast<int>(s);
    auto cls = classify(chk, pool,
                        std::vector<edge_status>(pool.size(), edge_status::unclassified),
                        cfg.seed);
    return finish(chk, std::move(cls), target, mode, cfg, "klaus", {}, t0);
}

design_solution klaus_opt(const design_solution& start, const ket& target,
                          const klaus_config& cfg) {
    const auto t0 = clock_type::now();
    const edge_mode mode = start.graph.mode();
    feasibility_checker chk(target, mode, cfg.mode, cfg.solver_conflicts,
                            cfg.solver_time_ms);

    const int slot_count = chk.slots().slot_count();
    std::vector<edge_status> status(slot_count, edge_status::disposable);
    std::vector<int> pool;
    std::vector<uint8_t> start_presence(slot_count, 0);
    for (const auto& [key, w] : start.graph.edges()) {
        int s = chk.slots().slot(key);
        status[s] = edge_status::unclassified;
        start_presence[s] = 1;
        pool.push_back(s);
    }
    if (!chk.satisfied_by(start_presence))
        throw infeasible_target("start graph does not satisfy K");

    auto cls = classify(chk, pool, std::move(status), cfg.seed);

    // warm-start the single final optimization with the surviving weights
    const size_t ppe = cfg.opt.real_weights ? 1 : 2;
    std::vector<double> warm;
    for (int s = 0; s < slot_count; ++s) {
        if (cls.status[s] != edge_status::indispensable) continue;
        cplx w = start.graph.weight(chk.slots().key_of(s));
        warm.push_back(w.real());
        if (ppe == 2) warm.push_back(w.imag());
    }

    design_solution sol =
        finish(chk, std::move(cls), target, mode, cfg, "klausopt", warm, t0);
    sol.phases.encode_ms += start.phases.encode_ms;
    sol.phases.opt_ms += start.phases.opt_ms;
    sol.phases.total_ms += start.phases.total_ms;
    return sol;
}

conjecture_result check_monochromatic_conjecture(int n, int d,
                                                 const solver_config& scfg) {
    if (n < 2 || n % 2 != 0) throw error("conjecture check needs even n >= 2");
    if (d < 2) throw error("conjecture check needs d >= 2");

    conjecture_result res;
    const auto t0 = clock_type::now();
    cnf_formula cnf;
    try {
        cnf = tseitin(build_k(ghz(n, d), edge_mode::monochromatic));
    } catch (const unsatisfiable_by_construction&) {
        res.status = sat_status::unsatisfiable;
        res.encode_ms = ms_since(t0);
        return res;
    }
    res.encode_ms = ms_since(t0);
    res.var_count = cnf.var_count;
    res.clause_count = cnf.clauses.size();

    solver_config cfg = scfg;
    slot_space edge_slots(n, d, edge_mode::monochromatic);
    for (int s = 0; s < edge_slots.slot_count(); ++s) cfg.decision_vars.push_back(s + 1);
    auto out = solve(cnf, {}, cfg);
    res.status = out.status;
    res.stats = out.stats;
    if (out.status != sat_status::satisfiable) return res;

    slot_space slots(n, d, edge_mode::monochromatic);
    colored_graph witness(n, d, edge_mode::monochromatic);
    std::vector<uint8_t> presence(slots.slot_count(), 0);
    for (int s = 0; s < slots.slot_count(); ++s)
        if (out.model[s + 1] == 1) {
            witness.set_edge(slots.key_of(s), 1.0);
            presence[s] = 1;
        }
    k_program prog = k_program::build(ghz(n, d), edge_mode::monochromatic);
    if (!prog.evaluate(presence, auto_policy(prog.table.total_matchings())))
        throw error("internal: decoded witness fails the K predicate");
    res.witness = std::move(witness);
    return res;
}

std::string trace_json(const design_solution& sol) {
    nlohmann::json j;
    auto& decisions = j["decisions"];
    decisions = nlohmann::json::array();
    for (const auto& t : sol.trace) {
        decisions.push_back({{"edge",
                              {{"i", t.edge.i},
                               {"j", t.edge.j},
                               {"a", t.edge.alpha},
                               {"b", t.edge.beta}}},
                             {"verdict", t.disposable ? "disposable" : "indispensable"}});
    }
    return j.dump(2) + "\n";
}

} // namespace klauskit
