#include <doctest.h>

#include <set>

#include "klauskit/dimacs.hpp"
#include "klauskit/encoding.hpp"
#include "klauskit/engine.hpp"
#include "klauskit/rng.hpp"
#include "klauskit/solver.hpp"

using namespace klauskit;

namespace {

// assignment vector indexed 1..V
std::vector<int8_t> assignment_of(const std::vector<uint8_t>& presence) {
    std::vector<int8_t> a(presence.size() + 1, -1);
    for (size_t s = 0; s < presence.size(); ++s) a[s + 1] = presence[s] ? 1 : 0;
    return a;
}

// The feasibility predicate straight from its definition, built on the
// graph-core routines: every support coloring keeps a matching, no forbidden
// coloring keeps exactly one.
bool direct_predicate(const ket& target, edge_mode mode,
                      const std::vector<uint8_t>& presence) {
    slot_space slots(target.party_count(), target.local_dim(), mode);
    colored_graph g(slots.n, slots.d, mode);
    for (int s = 0; s < slots.slot_count(); ++s)
        if (presence[s]) g.set_edge(slots.key_of(s), 1.0);

    std::set<vertex_coloring> support;
    for (const auto& basis : target.support()) support.insert(basis);

    for (uint64_t idx = 0; idx < coloring_space_size(slots.n, slots.d); ++idx) {
        vertex_coloring c = coloring_from_index(idx, slots.n, slots.d);
        size_t count = matchings_for_coloring(g, c).size();
        if (support.count(c)) {
            if (count == 0) return false;
        } else if (count == 1) {
            return false;
        }
    }
    return true;
}

bool brute_force_sat(const formula& f, const std::vector<int>& vars) {
    for (uint64_t bits = 0; bits < (1ULL << vars.size()); ++bits) {
        std::vector<int8_t> a(f.var_count() + 1, 0);
        for (size_t k = 0; k < vars.size(); ++k) a[vars[k]] = (bits >> k) & 1;
        if (evaluate(f, a)) return true;
    }
    return false;
}

std::vector<int> vars_of(const formula& f) {
    std::set<int> vs;
    for (const auto& n : f.nodes())
        if (n.kind == formula::op::variable) vs.insert(n.var);
    return {vs.begin(), vs.end()};
}

} // namespace

TEST_CASE("pm_conjunction is the conjunction of its edges") {
    slot_space slots(4, 2, edge_mode::bichromatic);
    perfect_matching p{{{0, 1, 0, 0}, {2, 3, 0, 0}}};
    formula f = pm_conjunction(p, slots);

    std::vector<uint8_t> presence(slots.slot_count(), 0);
    presence[slots.slot({0, 1, 0, 0})] = 1;
    presence[slots.slot({2, 3, 0, 0})] = 1;
    CHECK(evaluate(f, assignment_of(presence)));
    presence[slots.slot({2, 3, 0, 0})] = 0; // one member edge false
    CHECK_FALSE(evaluate(f, assignment_of(presence)));

    // two-vertex matchings collapse to a single variable
    slot_space tiny(2, 2, edge_mode::bichromatic);
    formula single = pm_conjunction({{{0, 1, 0, 0}}}, tiny);
    CHECK(single.at(single.root()).kind == formula::op::variable);
}

TEST_CASE("state clauses require one matching per support coloring") {
    formula s = build_state_clauses({{0, 0, 0, 0}}, 4, 2, edge_mode::bichromatic);
    // disjunction over the three pairings with color pair (0,0)
    const auto& root = s.at(s.root());
    CHECK(root.kind == formula::op::f_or);
    CHECK(root.kids.size() == 3);

    slot_space slots(4, 2, edge_mode::bichromatic);
    std::vector<uint8_t> presence(slots.slot_count(), 0);
    CHECK_FALSE(evaluate(s, assignment_of(presence)));
    presence[slots.slot({0, 2, 0, 0})] = 1;
    presence[slots.slot({1, 3, 0, 0})] = 1;
    CHECK(evaluate(s, assignment_of(presence)));
}

TEST_CASE("state clause for two vertices is one bare variable") {
    formula s = build_state_clauses({{0, 1}}, 2, 2, edge_mode::bichromatic);
    const auto& root = s.at(s.root());
    CHECK(root.kind == formula::op::variable);
    slot_space slots(2, 2, edge_mode::bichromatic);
    CHECK(root.var == slots.slot({0, 1, 0, 1}) + 1);
}

TEST_CASE("six-vertex support colorings fan out to 15 matchings") {
    formula s = build_state_clauses({{0, 0, 0, 0, 0, 0}}, 6, 2, edge_mode::bichromatic);
    CHECK(s.at(s.root()).kids.size() == 15);
}

TEST_CASE("state clauses signal support without structural matchings") {
    // monochromatic mode, a coloring with odd color multiplicities
    CHECK_THROWS_AS(build_state_clauses({{0, 0, 0, 1}}, 4, 2, edge_mode::monochromatic),
                    unsatisfiable_by_construction);
}

TEST_CASE("obstruction clauses") {
    SUBCASE("lone monochromatic matching is forced false") {
        formula c = build_obstruction_clauses({{0, 0, 1, 1}}, 4, 2, edge_mode::monochromatic);
        const auto& root = c.at(c.root());
        CHECK(root.kind == formula::op::f_not);
        slot_space slots(4, 2, edge_mode::monochromatic);
        std::vector<uint8_t> presence(slots.slot_count(), 0);
        presence[slots.slot({0, 1, 0, 0})] = 1;
        presence[slots.slot({2, 3, 1, 1})] = 1;
        CHECK_FALSE(evaluate(c, assignment_of(presence))); // that matching exists: violation
        presence[slots.slot({0, 1, 0, 0})] = 0;
        CHECK(evaluate(c, assignment_of(presence)));
    }
    SUBCASE("three matchings produce three not-exactly-one clauses") {
        formula c = build_obstruction_clauses({{0, 0, 1, 1}}, 4, 2, edge_mode::bichromatic);
        const auto& root = c.at(c.root());
        REQUIRE(root.kind == formula::op::f_and);
        CHECK(root.kids.size() == 3);
        for (int32_t kid : root.kids) {
            CHECK(c.at(kid).kind == formula::op::f_or);
            CHECK(c.at(kid).kids.size() == 3);
        }
    }
    SUBCASE("empty forbidden set is constant true") {
        formula c = build_obstruction_clauses({}, 4, 2, edge_mode::bichromatic);
        const auto& root = c.at(c.root());
        CHECK(root.kind == formula::op::constant);
        CHECK(root.var == 1);
    }
}

TEST_CASE("build_k variable counts") {
    formula k_bi = build_k(ghz(4, 2), edge_mode::bichromatic);
    CHECK(k_bi.var_count() == 24); // 6 pairs x 4 color pairs

    formula k_mono = build_k(ghz(6, 3), edge_mode::monochromatic);
    CHECK(k_mono.var_count() == 45); // 15 pairs x 3 colors
}

TEST_CASE("two-vertex target pins its only edge and forbids the rest") {
    ket t(2, 2);
    t.set_amplitude({0, 1}, 1.0);
    formula k = build_k(t, edge_mode::bichromatic);
    slot_space slots(2, 2, edge_mode::bichromatic);
    std::vector<uint8_t> presence(slots.slot_count(), 0);
    presence[slots.slot({0, 1, 0, 1})] = 1;
    CHECK(evaluate(k, assignment_of(presence)));
    presence[slots.slot({0, 1, 0, 0})] = 1; // a forbidden coloring appears alone
    CHECK_FALSE(evaluate(k, assignment_of(presence)));
    presence[slots.slot({0, 1, 0, 1})] = 0; // support lost
    CHECK_FALSE(evaluate(k, assignment_of(presence)));
}

TEST_CASE("K on the complete and empty graphs") {
    formula k = build_k(ghz(4, 2), edge_mode::bichromatic);
    std::vector<uint8_t> presence(24, 1);
    CHECK(evaluate(k, assignment_of(presence)));
    std::fill(presence.begin(), presence.end(), 0);
    CHECK_FALSE(evaluate(k, assignment_of(presence)));
}

TEST_CASE("missing assignment raises incomplete_assignment") {
    formula k = build_k(ghz(4, 2), edge_mode::bichromatic);
    std::vector<int8_t> partial(25, -1);
    CHECK_THROWS_AS(evaluate(k, partial), incomplete_assignment);
}

TEST_CASE("K agrees with the direct feasibility predicate on random assignments") {
    ket target = ghz(4, 2);
    for (auto mode : {edge_mode::bichromatic, edge_mode::monochromatic}) {
        formula k = build_k(target, mode);
        k_program prog = k_program::build(target, mode);
        slot_space slots(4, 2, mode);
        rng r(4242);
        std::vector<uint8_t> presence(slots.slot_count());
        for (int rep = 0; rep < 1000; ++rep) {
            for (auto& bit : presence) bit = r.next_below(2) ? 1 : 0;
            bool via_formula = evaluate(k, assignment_of(presence));
            bool via_oracle = direct_predicate(target, mode, presence);
            bool via_kernel = prog.evaluate(presence, exec_policy::serial);
            CHECK(via_formula == via_oracle);
            CHECK(via_kernel == via_oracle);
        }
    }
}

TEST_CASE("tseitin encodes the textbook and-gate") {
    formula f(3);
    auto av = f.add_var(1);
    auto bv = f.add_var(2);
    auto gate = f.add_and({av, bv});
    auto cv = f.add_var(3);
    f.set_root(f.add_or({gate, cv}));
    cnf_formula cnf = tseitin(f);
    CHECK(cnf.var_count == 4); // one auxiliary for the conjunction
    // expected: (-4 1)(-4 2)(-1 -2 4)(4 3)
    REQUIRE(cnf.clauses.size() == 4);
    CHECK(cnf.clauses[0] == std::vector<int>{-4, 1});
    CHECK(cnf.clauses[1] == std::vector<int>{-4, 2});
    CHECK(cnf.clauses[2] == std::vector<int>{-1, -2, 4});
    CHECK(cnf.clauses[3] == std::vector<int>{4, 3});
}

TEST_CASE("tseitin preserves satisfiability on random small formulas") {
    rng r(606);
    for (int rep = 0; rep < 200; ++rep) {
        // random formula over up to 4 variables
        formula f(4);
        std::vector<int32_t> pool;
        for (int v = 1; v <= 4; ++v) pool.push_back(f.add_var(v));
        for (int step = 0; step < 6; ++step) {
            uint64_t pick = r.next_below(3);
            if (pick == 0) {
                pool.push_back(f.add_not(pool[r.next_below(pool.size())]));
            } else {
                std::vector<int32_t> kids;
                int arity = 2 + static_cast<int>(r.next_below(2));
                for (int k = 0; k < arity; ++k) kids.push_back(pool[r.next_below(pool.size())]);
                pool.push_back(pick == 1 ? f.add_and(std::move(kids))
                                         : f.add_or(std::move(kids)));
            }
        }
        f.set_root(pool.back());

        bool expected = brute_force_sat(f, {1, 2, 3, 4});
        cnf_formula cnf = tseitin(f);
        auto outcome = solve(cnf);
        REQUIRE(outcome.status != sat_status::budget_exceeded);
        CHECK((outcome.status == sat_status::satisfiable) == expected);
        if (outcome.status == sat_status::satisfiable) {
            CHECK(verify_model(cnf, outcome.model));
            // the model projects onto a satisfying assignment of f
            std::vector<int8_t> proj(f.var_count() + 1, 0);
            for (int v = 1; v <= f.var_count(); ++v) proj[v] = outcome.model[v];
            CHECK(evaluate(f, proj));
        }
    }
}

TEST_CASE("every satisfying edge assignment extends into the CNF") {
    // exhaustive over the variables referenced by GHZ(4,2) subformulas
    formula s = build_state_clauses({{0, 0, 0, 0}}, 4, 2, edge_mode::bichromatic);
    formula c = build_obstruction_clauses({{0, 0, 1, 1}}, 4, 2, edge_mode::bichromatic);
    for (const formula* f : {&s, &c}) {
        cnf_formula cnf = tseitin(*f);
        auto vars = vars_of(*f);
        REQUIRE(vars.size() <= 16);
        for (uint64_t bits = 0; bits < (1ULL << vars.size()); ++bits) {
            std::vector<int8_t> a(f->var_count() + 1, 0);
            std::vector<assumption> fixed;
            for (size_t k = 0; k < vars.size(); ++k) {
                bool value = (bits >> k) & 1;
                a[vars[k]] = value;
                fixed.push_back({vars[k], value});
            }
            // unreferenced edge vars stay free; fix referenced ones only
            bool direct = evaluate(*f, a);
            auto outcome = solve(cnf, fixed);
            CHECK((outcome.status == sat_status::satisfiable) == direct);
        }
    }
}

TEST_CASE("aux variable accounting and encoding determinism") {
    ket target = ghz(4, 2);
    formula k = build_k(target, edge_mode::bichromatic);
    cnf_formula cnf = tseitin(k);
    // 16 colorings x 3 matchings share one auxiliary each
    CHECK(cnf.var_count == 24 + 48);

    formula k2 = build_k(target, edge_mode::bichromatic);
    cnf_formula cnf2 = tseitin(k2);
    CHECK(export_dimacs(cnf) == export_dimacs(cnf2));

    formula km = build_k(target, edge_mode::monochromatic);
    cnf_formula cnfm = tseitin(km);
    // support 0000/1111 have 3 matchings each, the six 2+2 colorings one each
    CHECK(cnfm.var_count == 12 + 12);
}
