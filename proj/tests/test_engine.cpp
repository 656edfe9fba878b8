#include <doctest.h>

#include <cmath>

#include "klauskit/engine.hpp"
#include "klauskit/ket.hpp"
#include "klauskit/rng.hpp"

using namespace klauskit;

namespace {

std::vector<int> all_slots(const slot_space& s) {
    std::vector<int> v(s.slot_count());
    for (int k = 0; k < s.slot_count(); ++k) v[k] = k;
    return v;
}

colored_graph graph_from_params(const loss_program& prog, const slot_space& slots,
                                std::span<const double> params) {
    colored_graph g(slots.n, slots.d, slots.mode);
    for (int e = 0; e < prog.active_edges; ++e) {
        cplx w = prog.weight_of(params, e);
        if (w != cplx{0.0, 0.0}) g.set_edge(slots.key_of(prog.active_slot[e]), w);
    }
    return g;
}

std::vector<double> random_params(int count, rng& r) {
    std::vector<double> p(count);
    for (double& x : p) x = r.next_double(-1, 1);
    return p;
}

} // namespace

TEST_CASE("matching table structure for small spaces") {
    auto bi = matching_table::build(4, 2, edge_mode::bichromatic);
    CHECK(bi.coloring_count == 16);
    for (uint64_t c = 0; c < 16; ++c) CHECK(bi.matching_count(c) == 3);
    CHECK(bi.total_matchings() == 48);

    auto mono = matching_table::build(4, 2, edge_mode::monochromatic);
    CHECK(mono.matching_count(coloring_index({0, 0, 0, 0}, 2)) == 3);
    CHECK(mono.matching_count(coloring_index({0, 0, 1, 1}, 2)) == 1);
    CHECK(mono.matching_count(coloring_index({0, 1, 1, 1}, 2)) == 0);

    auto six = matching_table::build(6, 2, edge_mode::bichromatic);
    for (uint64_t c = 0; c < six.coloring_count; ++c) CHECK(six.matching_count(c) == 15);
}

TEST_CASE("k_program accepts the complete graph and rejects the empty one") {
    k_program prog = k_program::build(ghz(4, 2), edge_mode::bichromatic);
    std::vector<uint8_t> all_on(prog.table.slots.slot_count(), 1);
    std::vector<uint8_t> all_off(prog.table.slots.slot_count(), 0);
    CHECK(prog.evaluate(all_on, exec_policy::serial));
    CHECK(prog.evaluate(all_on, exec_policy::parallel));
    CHECK_FALSE(prog.evaluate(all_off, exec_policy::serial));

    // the known four-edge solution satisfies K
    std::vector<uint8_t> four(prog.table.slots.slot_count(), 0);
    four[prog.table.slots.slot({0, 1, 0, 0})] = 1;
    four[prog.table.slots.slot({2, 3, 0, 0})] = 1;
    four[prog.table.slots.slot({0, 2, 1, 1})] = 1;
    four[prog.table.slots.slot({1, 3, 1, 1})] = 1;
    CHECK(prog.evaluate(four, exec_policy::serial));

    // dropping one edge of it leaves a support coloring matchless
    four[prog.table.slots.slot({0, 1, 0, 0})] = 0;
    CHECK_FALSE(prog.evaluate(four, exec_policy::serial));
}

TEST_CASE("k_program policies and reference agree on random assignments") {
    for (auto mode : {edge_mode::bichromatic, edge_mode::monochromatic}) {
        k_program prog = k_program::build(ghz(4, 2), mode);
        rng r(123);
        std::vector<uint8_t> presence(prog.table.slots.slot_count());
        for (int rep = 0; rep < 1000; ++rep) {
            for (auto& bit : presence) bit = r.next_below(2) ? 1 : 0;
            bool ref = evaluate_k_reference(prog, presence);
            CHECK(prog.evaluate(presence, exec_policy::serial) == ref);
            CHECK(prog.evaluate(presence, exec_policy::parallel) == ref);
        }
    }
}

TEST_CASE("loss matches the graph-core fidelity oracle") {
    rng r(2024);
    for (int rep = 0; rep < 20; ++rep) {
        ket target = (rep % 2) ? ghz(4, 2) : ghz(6, 2);
        slot_space slots(target.party_count(), target.local_dim(), edge_mode::bichromatic);
        auto table = matching_table::build(slots.n, slots.d, slots.mode);

        // random sub-topology
        std::vector<int> active;
        for (int s = 0; s < slots.slot_count(); ++s)
            if (r.next_double() < 0.6) active.push_back(s);
        if (active.empty()) continue;
        auto prog = loss_program::build(table, target, active, false);
        auto params = random_params(prog.param_count, r);

        double fast = prog.loss(params, exec_policy::parallel);
        double serial = prog.loss(params, exec_policy::serial);
        double reference = loss_reference(prog, params);
        CHECK(fast == serial); // chunked reduction is policy invariant, bit for bit
        CHECK(fast == doctest::Approx(reference).epsilon(1e-12));

        colored_graph g = graph_from_params(prog, slots, params);
        try {
            double oracle = 1.0 - fidelity(target, graph_to_state(g));
            CHECK(fast == doctest::Approx(oracle).epsilon(1e-10));
        } catch (const zero_state&) {
            CHECK(fast == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("loss gradient agrees with central finite differences") {
    rng r(77);
    ket target = ghz(4, 2);
    auto table = matching_table::build(4, 2, edge_mode::bichromatic);
    slot_space slots(4, 2, edge_mode::bichromatic);
    auto prog = loss_program::build(table, target, all_slots(slots), false);

    const double h = 1e-6;
    for (int rep = 0; rep < 10; ++rep) {
        auto params = random_params(prog.param_count, r);
        std::vector<double> grad(prog.param_count);
        double base = prog.loss_grad(params, grad, exec_policy::serial);
        CHECK(base == doctest::Approx(prog.loss(params, exec_policy::serial)));
        for (int k = 0; k < prog.param_count; k += 7) {
            auto plus = params, minus = params;
            plus[k] += h;
            minus[k] -= h;
            double fd = (prog.loss(plus, exec_policy::serial) -
                         prog.loss(minus, exec_policy::serial)) /
                        (2 * h);
            CHECK(grad[k] == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("gradient is zero for edges no matching passes through") {
    // a lone extra edge that cannot complete any matching inside the topology
    ket target = ghz(4, 2);
    auto table = matching_table::build(4, 2, edge_mode::bichromatic);
    slot_space slots(4, 2, edge_mode::bichromatic);
    std::vector<int> active = {
        slots.slot({0, 1, 0, 0}), slots.slot({2, 3, 0, 0}),
        slots.slot({0, 2, 1, 1}), slots.slot({1, 3, 1, 1}),
        slots.slot({0, 3, 0, 1}), // its partner pair (1,2) has no edge at all
    };
    auto prog = loss_program::build(table, target, active, false);
    std::vector<double> params(prog.param_count, 0.0);
    // exact solution on the first four edges
    for (int e = 0; e < 4; ++e) params[2 * e] = 1.0;
    params[8] = 0.37; // the dangling edge
    std::vector<double> grad(prog.param_count);
    double loss = prog.loss_grad(params, grad, exec_policy::serial);
    CHECK(loss == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(grad[8] == doctest::Approx(0.0));
    CHECK(grad[9] == doctest::Approx(0.0));
}

TEST_CASE("parallel and serial loss_grad agree bitwise") {
    rng r(31337);
    ket target = ghz(6, 2);
    auto table = matching_table::build(6, 2, edge_mode::bichromatic);
    slot_space slots(6, 2, edge_mode::bichromatic);
    auto prog = loss_program::build(table, target, all_slots(slots), false);
    for (int rep = 0; rep < 5; ++rep) {
        auto params = random_params(prog.param_count, r);
        std::vector<double> g1(prog.param_count), g2(prog.param_count);
        double l1 = prog.loss_grad(params, g1, exec_policy::serial);
        double l2 = prog.loss_grad(params, g2, exec_policy::parallel);
        CHECK(l1 == l2);
        CHECK(g1 == g2);
    }
}

TEST_CASE("real mode optimizes only the real parts") {
    ket target = ghz(4, 2);
    auto table = matching_table::build(4, 2, edge_mode::bichromatic);
    slot_space slots(4, 2, edge_mode::bichromatic);
    auto prog = loss_program::build(table, target, all_slots(slots), true);
    CHECK(prog.param_count == slots.slot_count());
    rng r(8);
    auto params = random_params(prog.param_count, r);
    std::vector<double> grad(prog.param_count);
    double l = prog.loss_grad(params, grad, exec_policy::serial);
    CHECK(l >= 0.0);
    CHECK(l <= 1.0);
}

TEST_CASE("zero weights give worst loss without error") {
    ket target = ghz(4, 2);
    auto table = matching_table::build(4, 2, edge_mode::bichromatic);
    slot_space slots(4, 2, edge_mode::bichromatic);
    auto prog = loss_program::build(table, target, all_slots(slots), false);
    std::vector<double> params(prog.param_count, 0.0);
    CHECK(prog.loss(params, exec_policy::serial) == doctest::Approx(1.0));
    std::vector<double> grad(prog.param_count);
    CHECK(prog.loss_grad(params, grad, exec_policy::serial) == doctest::Approx(1.0));
}
