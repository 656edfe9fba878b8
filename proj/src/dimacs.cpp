#include "klauskit/dimacs.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace klauskit {

void export_dimacs(const cnf_formula& cnf, std::ostream& out) {
    out << "p cnf " << cnf.var_count << ' ' << cnf.clauses.size() << '\n';
    for (const auto& clause : cnf.clauses) {
        for (int lit : clause) out << lit << ' ';
        out << "0\n";
    }
}

std::string export_dimacs(const cnf_formula& cnf) {
    std::ostringstream ss;
    export_dimacs(cnf, ss);
    return ss.str();
}

cnf_formula import_dimacs(std::istream& in) {
    cnf_formula cnf;
    bool have_header = false;
    size_t declared_clauses = 0;
    std::vector<int> current;
    bool in_clause = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == 'c' || line[0] == '%') continue;
        if (line[0] == 'p') {
            if (have_header) throw parse_error("duplicate header", line_no);
            std::istringstream ss(line);
            std::string p, fmt;
            long long vars = -1, clauses = -1;
            ss >> p >> fmt >> vars >> clauses;
            if (ss.fail() || fmt != "cnf" || vars < 0 || clauses < 0)
                throw parse_error("malformed header, expected 'p cnf V C'", line_no);
            cnf.var_count = static_cast<int>(vars);
            declared_clauses = static_cast<size_t>(clauses);
            have_header = true;
            continue;
        }
        if (!have_header) throw parse_error("clause before header", line_no);
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) {
            int lit = 0;
            try {
                size_t pos = 0;
                lit = std::stoi(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw parse_error("bad literal '" + tok + "'", line_no);
            }
            if (lit == 0) {
                if (cnf.clauses.size() == declared_clauses)
                    throw parse_error("more clauses than declared", line_no);
                cnf.clauses.push_back(std::move(current));
                current.clear();
                in_clause = false;
            } else {
                if (lit > cnf.var_count || -lit > cnf.var_count)
                    throw parse_error("literal out of range: " + tok, line_no);
                current.push_back(lit);
                in_clause = true;
            }
        }
    }
    if (!have_header) throw parse_error("missing header", line_no);
    if (in_clause) throw parse_error("unterminated clause at end of input", line_no);
    if (cnf.clauses.size() != declared_clauses)
        throw parse_error("fewer clauses than declared", line_no);
    return cnf;
}

cnf_formula import_dimacs_string(const std::string& text) {
    std::istringstream ss(text);
    return import_dimacs(ss);
}

std::string varmap_json(const slot_space& slots) {
    nlohmann::json j;
    j["n"] = slots.n;
    j["d"] = slots.d;
    j["mode"] = slots.mode == edge_mode::bichromatic ? "bi" : "mono";
    auto& vars = j["edge_vars"];
    vars = nlohmann::json::array();
    for (int s = 0; s < slots.slot_count(); ++s) {
        edge_key e = slots.key_of(s);
        vars.push_back({{"id", s + 1}, {"i", e.i}, {"j", e.j}, {"a", e.alpha}, {"b", e.beta}});
    }
    return j.dump(2) + "\n";
}

} // namespace klauskit
