#include "klauskit/ket.hpp"

#include <cmath>

namespace klauskit {

namespace {

// 3-party state from basis digit triples, uniform amplitudes, heralded with
// a fourth party pinned to |0>.
ket heralded_srv(const std::vector<std::array<int, 3>>& terms, int d) {
    ket base(3, d);
    const cplx amp{1.0 / std::sqrt(static_cast<double>(terms.size())), 0.0};
    for (const auto& t : terms) base.set_amplitude({t[0], t[1], t[2]}, amp);
    return herald_ancilla(base);
}

std::vector<target_spec> build_library() {
    std::vector<target_spec> lib;

    lib.push_back({"GHZ_4_3", ghz(4, 3), std::nullopt, true});
    lib.push_back({"GHZ_6_2", ghz(6, 2), std::nullopt, true});
    lib.push_back({"GHZ_8_2", ghz(8, 2), std::nullopt, true});

    lib.push_back({"SRV_544",
                   heralded_srv({{{0, 0, 0}}, {{1, 1, 1}}, {{2, 2, 2}}, {{3, 3, 0}}, {{4, 1, 3}}}, 5),
                   srv_triple{5, 4, 4}, true});
    lib.push_back({"SRV_644",
                   heralded_srv({{{0, 0, 0}}, {{1, 1, 1}}, {{2, 2, 2}}, {{3, 3, 0}}, {{4, 1, 3}}, {{5, 1, 2}}}, 6),
                   srv_triple{6, 4, 4}, true});
    lib.push_back({"SRV_654",
                   heralded_srv({{{0, 0, 0}}, {{1, 1, 1}}, {{2, 2, 2}}, {{3, 3, 0}}, {{4, 4, 0}}, {{5, 1, 3}}}, 6),
                   srv_triple{6, 5, 4}, true});
    lib.push_back({"SRV_955",
                   heralded_srv({{{0, 0, 0}}, {{1, 1, 1}}, {{2, 2, 2}},
                                 {{3, 0, 3}}, {{4, 0, 4}}, {{5, 0, 5}},
                                 {{6, 3, 1}}, {{7, 4, 1}}, {{8, 4, 1}}}, 9),
                   srv_triple{9, 5, 5}, true});

    // no exact graph exists for these three
    lib.push_back({"GHZ_6_3", ghz(6, 3), std::nullopt, false});
    lib.push_back({"SRV_544_star",
                   heralded_srv({{{0, 0, 0}}, {{1, 1, 1}}, {{2, 2, 2}}, {{3, 3, 3}}, {{4, 0, 1}}}, 5),
                   srv_triple{5, 4, 4}, false});
    lib.push_back({"SRV_644_star",
                   heralded_srv({{{0, 0, 0}}, {{1, 1, 1}}, {{2, 2, 2}}, {{3, 1, 0}}, {{4, 2, 0}}, {{5, 3, 3}}}, 6),
                   srv_triple{6, 4, 4}, false});

    return lib;
}

} // namespace

const std::vector<target_spec>& target_library() {
    static const std::vector<target_spec> lib = build_library();
    return lib;
}

const target_spec* find_target(const std::string& name) {
    for (const auto& spec : target_library())
        if (spec.name == name) return &spec;
    return nullptr;
}

} // namespace klauskit
