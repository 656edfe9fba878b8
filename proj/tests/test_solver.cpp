#include <doctest.h>

#include "klauskit/dimacs.hpp"
#include "klauskit/encoding.hpp"
#include "klauskit/formula.hpp"
#include "klauskit/ket.hpp"
#include "klauskit/rng.hpp"
#include "klauskit/solver.hpp"

using namespace klauskit;

namespace {

// pigeons x holes, at-least-one-hole per pigeon plus at-most-one-pigeon
// per hole; unsatisfiable whenever pigeons > holes
cnf_formula pigeonhole(int pigeons, int holes) {
    cnf_formula cnf;
    auto var = [&](int p, int h) { return p * holes + h + 1; };
    cnf.var_count = pigeons * holes;
    for (int p = 0; p < pigeons; ++p) {
        std::vector<int> clause;
        for (int h = 0; h < holes; ++h) clause.push_back(var(p, h));
        cnf.clauses.push_back(clause);
    }
    for (int h = 0; h < holes; ++h)
        for (int p1 = 0; p1 < pigeons; ++p1)
            for (int p2 = p1 + 1; p2 < pigeons; ++p2)
                cnf.clauses.push_back({-var(p1, h), -var(p2, h)});
    return cnf;
}

bool truth_table_sat(const cnf_formula& cnf) {
    REQUIRE(cnf.var_count <= 20);
    for (uint64_t bits = 0; bits < (1ULL << cnf.var_count); ++bits) {
        bool all = true;
        for (const auto& clause : cnf.clauses) {
            bool sat = false;
            for (int lit : clause) {
                bool value = (bits >> (std::abs(lit) - 1)) & 1;
                if ((lit > 0) == value) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

cnf_formula random_3sat(int vars, int clauses, rng& r) {
    cnf_formula cnf;
    cnf.var_count = vars;
    for (int k = 0; k < clauses; ++k) {
        std::vector<int> clause;
        for (int l = 0; l < 3; ++l) {
            int v = 1 + static_cast<int>(r.next_below(vars));
            clause.push_back(r.next_below(2) ? v : -v);
        }
        cnf.clauses.push_back(clause);
    }
    return cnf;
}

} // namespace

TEST_CASE("direct contradiction is unsatisfiable") {
    cnf_formula cnf{1, {{1}, {-1}}};
    CHECK(solve(cnf).status == sat_status::unsatisfiable);
}

TEST_CASE("unit propagation finds the forced model") {
    cnf_formula cnf{2, {{1, 2}, {-1}}};
    auto out = solve(cnf);
    REQUIRE(out.status == sat_status::satisfiable);
    CHECK(out.model[1] == 0);
    CHECK(out.model[2] == 1);
    CHECK(verify_model(cnf, out.model));
}

TEST_CASE("pigeonhole principle instances") {
    auto php32 = pigeonhole(3, 2);
    CHECK_FALSE(truth_table_sat(php32)); // the exhaustive oracle agrees
    CHECK(solve(php32).status == sat_status::unsatisfiable);

    CHECK(solve(pigeonhole(5, 4)).status == sat_status::unsatisfiable);
    CHECK(solve(pigeonhole(4, 4)).status == sat_status::satisfiable);
}

TEST_CASE("agreement with the truth-table oracle on random instances") {
    rng r(271828);
    int sat_seen = 0, unsat_seen = 0;
    for (int rep = 0; rep < 120; ++rep) {
        int vars = 8 + static_cast<int>(r.next_below(9)); // 8..16
        int clauses = static_cast<int>(vars * 4.3);
        cnf_formula cnf = random_3sat(vars, clauses, r);
        bool expected = truth_table_sat(cnf);
        auto out = solve(cnf);
        REQUIRE(out.status != sat_status::budget_exceeded);
        CHECK((out.status == sat_status::satisfiable) == expected);
        if (expected) {
            ++sat_seen;
            CHECK(verify_model(cnf, out.model));
        } else {
            ++unsat_seen;
        }
    }
    // the mix must exercise both outcomes
    CHECK(sat_seen > 10);
    CHECK(unsat_seen > 10);
}

TEST_CASE("assumptions behave like appended unit clauses") {
    rng r(99991);
    for (int rep = 0; rep < 60; ++rep) {
        int vars = 6 + static_cast<int>(r.next_below(6));
        cnf_formula cnf = random_3sat(vars, vars * 4, r);
        std::vector<assumption> assumptions;
        cnf_formula with_units = cnf;
        for (int v = 1; v <= vars; ++v) {
            if (r.next_below(4) == 0) {
                bool value = r.next_below(2);
                assumptions.push_back({v, value});
                with_units.clauses.push_back({value ? v : -v});
            }
        }
        auto a = solve(cnf, assumptions);
        auto b = solve(with_units);
        CHECK(a.status == b.status);
        if (a.status == sat_status::satisfiable) {
            for (const auto& as : assumptions) CHECK(a.model[as.var] == (as.value ? 1 : 0));
            CHECK(verify_model(cnf, a.model));
        }
    }
}

TEST_CASE("contradictory duplicate assumptions are rejected") {
    cnf_formula cnf{2, {{1, 2}}};
    std::vector<assumption> bad{{1, true}, {1, false}};
    CHECK_THROWS_AS(solve(cnf, bad), invalid_assumptions);
    std::vector<assumption> dup{{1, true}, {1, true}};
    CHECK(solve(cnf, dup).status == sat_status::satisfiable);
    std::vector<assumption> oob{{3, true}};
    CHECK_THROWS_AS(solve(cnf, oob), invalid_assumptions);
}

TEST_CASE("conflict budget reports budget_exceeded, never unsat") {
    solver_config cfg;
    cfg.max_conflicts = 1;
    auto out = solve(pigeonhole(7, 6), {}, cfg);
    CHECK(out.status == sat_status::budget_exceeded);
}

TEST_CASE("identical inputs give identical runs") {
    rng r(13);
    cnf_formula cnf = random_3sat(14, 60, r);
    auto a = solve(cnf);
    auto b = solve(cnf);
    CHECK(a.status == b.status);
    CHECK(a.stats.decisions == b.stats.decisions);
    CHECK(a.stats.conflicts == b.stats.conflicts);
    if (a.status == sat_status::satisfiable) CHECK(a.model == b.model);
}

TEST_CASE("verify_model rejects broken models") {
    cnf_formula cnf{2, {{1}, {-2}}};
    auto out = solve(cnf);
    REQUIRE(out.status == sat_status::satisfiable);
    CHECK(verify_model(cnf, out.model));
    auto flipped = out.model;
    flipped[1] = 0;
    CHECK_FALSE(verify_model(cnf, flipped));

    cnf_formula empty;
    std::vector<int8_t> no_model(1, 0);
    CHECK(verify_model(empty, no_model)); // vacuous
}

TEST_CASE("solver handles the GHZ(4,2) encoding and the model projects onto K") {
    ket target = ghz(4, 2);
    formula k = build_k(target, edge_mode::bichromatic);
    cnf_formula cnf = tseitin(k);
    auto out = solve(cnf);
    REQUIRE(out.status == sat_status::satisfiable);
    CHECK(verify_model(cnf, out.model));
    std::vector<int8_t> proj(k.var_count() + 1, 0);
    for (int v = 1; v <= k.var_count(); ++v) proj[v] = out.model[v];
    CHECK(evaluate(k, proj));
}

TEST_CASE("empty CNF is satisfiable with a complete default model") {
    cnf_formula cnf{3, {}};
    auto out = solve(cnf);
    REQUIRE(out.status == sat_status::satisfiable);
    CHECK(out.model.size() == 4);
    // default polarity prefers false
    CHECK(out.model[1] == 0);
}
