#include <doctest.h>

#include <cmath>

#include "klauskit/ket.hpp"
#include "klauskit/rng.hpp"

using namespace klauskit;

namespace {

ket random_ket(int n, int d, int terms, rng& r) {
    ket k(n, d);
    for (int t = 0; t < terms; ++t) {
        vertex_coloring basis(n);
        for (int v = 0; v < n; ++v) basis[v] = static_cast<int>(r.next_below(d));
        k.set_amplitude(basis, {r.next_double(-1, 1), r.next_double(-1, 1)});
    }
    k.normalize();
    return k;
}

} // namespace

TEST_CASE("fidelity basics") {
    ket zeros(4, 2), ones(4, 2);
    zeros.set_amplitude({0, 0, 0, 0}, 1.0);
    ones.set_amplitude({1, 1, 1, 1}, 1.0);
    CHECK(fidelity(zeros, zeros) == doctest::Approx(1.0));
    CHECK(fidelity(zeros, ones) == doctest::Approx(0.0));

    ket bell = ghz(2, 2);
    ket base(2, 2);
    base.set_amplitude({0, 0}, 1.0);
    CHECK(fidelity(bell, base) == doctest::Approx(0.5));
}

TEST_CASE("fidelity rejects mismatched shapes") {
    CHECK_THROWS_AS(fidelity(ghz(4, 2), ghz(6, 2)), shape_error);
    CHECK_THROWS_AS(fidelity(ghz(4, 2), ghz(4, 3)), shape_error);
}

TEST_CASE("fidelity is symmetric, bounded, and phase blind") {
    rng r(41);
    for (int rep = 0; rep < 25; ++rep) {
        ket x = random_ket(4, 3, 5, r);
        ket y = random_ket(4, 3, 5, r);
        double fxy = fidelity(x, y);
        double fyx = fidelity(y, x);
        CHECK(fxy == doctest::Approx(fyx).epsilon(1e-12));
        CHECK(fxy >= 0.0);
        CHECK(fxy <= 1.0 + 1e-12);

        // global phase leaves fidelity at one
        double theta = r.next_double(0, 6.28318);
        cplx phase{std::cos(theta), std::sin(theta)};
        ket z(4, 3);
        for (const auto& [basis, amp] : x.amplitudes()) z.set_amplitude(basis, amp * phase);
        CHECK(fidelity(x, z) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ghz states") {
    ket g43 = ghz(4, 3);
    REQUIRE(g43.term_count() == 3);
    const double amp = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(g43.amplitude({0, 0, 0, 0}) - cplx{amp, 0}) < 1e-15);
    CHECK(std::abs(g43.amplitude({1, 1, 1, 1}) - cplx{amp, 0}) < 1e-15);
    CHECK(std::abs(g43.amplitude({2, 2, 2, 2}) - cplx{amp, 0}) < 1e-15);

    ket g62 = ghz(6, 2);
    REQUIRE(g62.term_count() == 2);
    CHECK(std::abs(g62.amplitude({0, 0, 0, 0, 0, 0}) - cplx{1 / std::sqrt(2.0), 0}) < 1e-15);

    CHECK(ghz(2, 2).term_count() == 2);
    CHECK(ghz(2, 2).norm() == doctest::Approx(1.0));
}

TEST_CASE("herald_ancilla extends labels by color zero") {
    ket base(3, 2);
    base.set_amplitude({0, 0, 0}, 1.0);
    ket h = herald_ancilla(base);
    CHECK(h.party_count() == 4);
    CHECK(std::abs(h.amplitude({0, 0, 0, 0}) - cplx{1.0, 0}) < 1e-15);
}

TEST_CASE("heralded SRV 544 matches its published terms") {
    const target_spec* t = find_target("SRV_544");
    REQUIRE(t != nullptr);
    const ket& k = t->state;
    CHECK(k.party_count() == 4);
    CHECK(k.local_dim() == 5);
    REQUIRE(k.term_count() == 5);
    const double amp = 1.0 / std::sqrt(5.0);
    for (vertex_coloring basis :
         {vertex_coloring{0, 0, 0, 0}, {1, 1, 1, 0}, {2, 2, 2, 0}, {3, 3, 0, 0}, {4, 1, 3, 0}})
        CHECK(std::abs(k.amplitude(basis) - cplx{amp, 0}) < 1e-15);
    CHECK(t->srv.has_value());
    CHECK(t->srv->a == 5);
}

TEST_CASE("herald preserves fidelity") {
    rng r(5150);
    for (int rep = 0; rep < 10; ++rep) {
        ket x = random_ket(3, 3, 4, r);
        ket y = random_ket(3, 3, 4, r);
        CHECK(fidelity(herald_ancilla(x), herald_ancilla(y)) ==
              doctest::Approx(fidelity(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("target library covers the full benchmark set") {
    const auto& lib = target_library();
    CHECK(lib.size() == 10);

    // names are unique
    for (size_t i = 0; i < lib.size(); ++i)
        for (size_t j = i + 1; j < lib.size(); ++j) CHECK(lib[i].name != lib[j].name);

    for (const auto& spec : lib) {
        CHECK(std::abs(spec.state.norm() - 1.0) < 1e-12);
        // every library state is a uniform superposition
        const double expect = 1.0 / std::sqrt(static_cast<double>(spec.state.term_count()));
        for (const auto& [basis, amp] : spec.state.amplitudes())
            CHECK(std::abs(amp - cplx{expect, 0.0}) < 1e-12);
        CHECK(spec.graph_representable.has_value());
    }
}

TEST_CASE("library lookups match the published definitions") {
    const target_spec* g63 = find_target("GHZ_6_3");
    REQUIRE(g63 != nullptr);
    CHECK(g63->state.term_count() == 3);
    CHECK(g63->graph_representable == false);

    const target_spec* s955 = find_target("SRV_955");
    REQUIRE(s955 != nullptr);
    CHECK(s955->state.term_count() == 9);
    CHECK(s955->state.local_dim() == 9);
    for (const auto& [basis, amp] : s955->state.amplitudes())
        CHECK(std::abs(amp - cplx{1.0 / 3.0, 0.0}) < 1e-15);

    const target_spec* star = find_target("SRV_544_star");
    REQUIRE(star != nullptr);
    CHECK(star->graph_representable == false);
    const double amp = 1.0 / std::sqrt(5.0);
    for (vertex_coloring basis :
         {vertex_coloring{0, 0, 0, 0}, {1, 1, 1, 0}, {2, 2, 2, 0}, {3, 3, 3, 0}, {4, 0, 1, 0}})
        CHECK(std::abs(star->state.amplitude(basis) - cplx{amp, 0}) < 1e-15);

    CHECK(find_target("GHZ_8_2") != nullptr);
    CHECK(find_target("GHZ_8_2")->graph_representable == true);
    CHECK(find_target("nope") == nullptr);
}

TEST_CASE("normalize prunes and rejects the zero ket") {
    ket k(2, 2);
    CHECK_THROWS_AS(k.normalize(), zero_state);
    k.set_amplitude({0, 0}, 1.0);
    k.set_amplitude({1, 1}, 1e-20);
    k.normalize();
    CHECK(k.term_count() == 1); // the negligible term is gone
}
