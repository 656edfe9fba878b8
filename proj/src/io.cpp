#include "klauskit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace klauskit {

namespace {

using nlohmann::json;

// shortest round-trip decimal
std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json weight_pair(cplx w) { return json::array({w.real(), w.imag()}); }

cplx parse_weight(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw error("weight must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

std::string graph_json(const colored_graph& g) {
    json j;
    j["n"] = g.vertex_count();
    j["d"] = g.color_count();
    j["mode"] = g.mode() == edge_mode::bichromatic ? "bi" : "mono";
    auto& edges = j["edges"];
    edges = json::array();
    for (const auto& [e, w] : g.edges())
        edges.push_back({{"i", e.i}, {"j", e.j}, {"a", e.alpha}, {"b", e.beta},
                         {"w", weight_pair(w)}});
    return j.dump(2) + "\n";
}

colored_graph graph_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw error(std::string("graph JSON: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("d") || !j.contains("mode") || !j.contains("edges"))
        throw error("graph JSON: missing n/d/mode/edges");
    const std::string mode_str = j["mode"].get<std::string>();
    if (mode_str != "bi" && mode_str != "mono")
        throw error("graph JSON: mode must be 'bi' or 'mono'");
    colored_graph g(j["n"].get<int>(), j["d"].get<int>(),
                    mode_str == "bi" ? edge_mode::bichromatic : edge_mode::monochromatic);
    for (const auto& je : j["edges"]) {
        edge_key e{je.at("i").get<int>(), je.at("j").get<int>(), je.at("a").get<int>(),
                   je.at("b").get<int>()};
        if (g.has_edge(e)) throw error("graph JSON: duplicate edge key");
        g.set_edge(e, parse_weight(je.at("w"))); // range checks inside
    }
    return g;
}

std::string ket_json(const ket& k) {
    json j;
    j["n"] = k.party_count();
    j["d"] = k.local_dim();
    auto& terms = j["terms"];
    terms = json::array();
    for (const auto& [basis, amp] : k.amplitudes())
        terms.push_back({{"ket", basis}, {"amp", weight_pair(amp)}});
    return j.dump(2) + "\n";
}

ket ket_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw error(std::string("target JSON: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("d") || !j.contains("terms"))
        throw error("target JSON: missing n/d/terms");
    ket k(j["n"].get<int>(), j["d"].get<int>());
    for (const auto& jt : j["terms"]) {
        vertex_coloring basis = jt.at("ket").get<std::vector<int>>();
        if (k.amplitude(basis) != cplx{0.0, 0.0})
            throw error("target JSON: duplicate basis label");
        k.set_amplitude(basis, parse_weight(jt.at("amp")));
    }
    k.normalize();
    return k;
}

std::string graph_dot(const colored_graph& g) {
    double max_w = 0.0;
    for (const auto& [e, w] : g.edges()) max_w = std::max(max_w, std::abs(w));
    if (max_w == 0.0) max_w = 1.0;

    std::ostringstream out;
    out << "graph klauskit {\n  layout=circo;\n  node [shape=circle];\n";
    for (int v = 0; v < g.vertex_count(); ++v) out << "  v" << v << ";\n";
    for (const auto& [e, w] : g.edges()) {
        double pen = 0.5 + 3.0 * std::abs(w) / max_w;
        out << "  v" << e.i << " -- v" << e.j << " [label=\"" << e.alpha;
        if (g.mode() == edge_mode::bichromatic) out << "," << e.beta;
        out << "\" penwidth=" << fmt_double(pen) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string solution_json(const design_solution& sol) {
    json j = json::parse(graph_json(sol.graph));
    j["fidelity"] = sol.fidelity;
    j["edges_count"] = sol.edge_count;
    j["converged"] = sol.converged;
    j["algorithm"] = sol.algorithm;
    j["seed"] = sol.seed;
    j["sat_mode"] = to_string(sol.mode);
    j["phases"] = {{"encode_ms", sol.phases.encode_ms},
                   {"classification_ms", sol.phases.sat_ms},
                   {"optimization_ms", sol.phases.opt_ms},
                   {"total_ms", sol.phases.total_ms}};
    return j.dump(2) + "\n";
}

ket load_target(const std::string& name_or_path) {
    if (const target_spec* spec = find_target(name_or_path)) return spec->state;
    std::ifstream in(name_or_path);
    if (!in) throw error("unknown target name and no such file: " + name_or_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ket_from_json(ss.str());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    out << content;
}

} // namespace klauskit
