#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "klauskit/bench.hpp"
#include "klauskit/dimacs.hpp"
#include "klauskit/encoding.hpp"
#include "klauskit/io.hpp"
#include "klauskit/klaus.hpp"
#include "klauskit/optimizer.hpp"
#include "klauskit/solver.hpp"

namespace fs = std::filesystem;
using namespace klauskit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1; // infeasible target / UNSAT result
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

uint64_t env_seed_fallback() {
    if (const char* env = std::getenv("KLAUSKIT_SEED")) {
        char* end = nullptr;
        uint64_t v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
    }
    return 1;
}

edge_mode parse_mode(const std::string& s) {
    if (s == "bi") return edge_mode::bichromatic;
    if (s == "mono") return edge_mode::monochromatic;
    throw CLI::ValidationError("--mode must be 'mono' or 'bi'");
}

sat_mode parse_sat_mode(const std::string& s) {
    if (s == "fixed-true") return sat_mode::fixed_true;
    if (s == "free") return sat_mode::free_search;
    throw CLI::ValidationError("--sat-mode must be 'fixed-true' or 'free'");
}

std::string target_stem(const std::string& name_or_path) {
    if (find_target(name_or_path)) return name_or_path;
    return fs::path(name_or_path).stem().string();
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

// minisat-style output: SAT/UNSAT status plus a literal list, possibly in
// "v ..." lines
sat_outcome parse_external(const std::string& text, int var_count) {
    sat_outcome out;
    out.status = sat_status::budget_exceeded;
    std::istringstream ss(text);
    std::string line;
    std::vector<int8_t> model(var_count + 1, 0);
    bool have_status = false;
    while (std::getline(ss, line)) {
        if (line.rfind("c", 0) == 0) continue;
        std::string body = line;
        if (line.rfind("s ", 0) == 0 || line.rfind("v ", 0) == 0) body = line.substr(2);
        if (body.find("UNSAT") != std::string::npos) {
            out.status = sat_status::unsatisfiable;
            have_status = true;
            continue;
        }
        if (body.find("SAT") != std::string::npos) {
            out.status = sat_status::satisfiable;
            have_status = true;
            continue;
        }
        if (!have_status) continue;
        std::istringstream ls(body);
        long long lit;
        while (ls >> lit) {
            if (lit == 0 || std::llabs(lit) > var_count) continue;
            model[std::llabs(lit)] = lit > 0 ? 1 : 0;
        }
    }
    out.model = std::move(model);
    return out;
}

sat_outcome run_external_solver(const std::string& command, const cnf_formula& cnf) {
    const std::string cnf_path =
        (fs::temp_directory_path() / "klauskit_external.cnf").string();
    write_file(cnf_path, export_dimacs(cnf));
    std::string full = command + " " + cnf_path;
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw error("cannot run external solver: " + command);
    std::string text;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) text.append(buf, got);
    pclose(pipe);
    return parse_external(text, cnf.var_count);
}

void write_solution_files(const design_solution& sol, const std::string& out_dir,
                          const std::string& stem) {
    ensure_dir(out_dir);
    fs::path base = fs::path(out_dir.empty() ? "." : out_dir);
    std::string prefix = sol.algorithm + "_" + stem + "_" + std::to_string(sol.seed);
    write_file((base / (prefix + ".json")).string(), solution_json(sol));
    write_file((base / (prefix + ".dot")).string(), graph_dot(sol.graph));
    if (!sol.trace.empty())
        write_file((base / (prefix + ".trace.json")).string(), trace_json(sol));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"design of quantum-optics experiments as edge-colored graphs"};
    app.require_subcommand(1);

    std::string target_name, graph_path, mode_str = "bi", sat_mode_str, out_dir;
    std::string cnf_path, external_cmd;
    uint64_t seed = env_seed_fallback();
    int runs = 25, threads = 1, restarts = 5;
    double tau = 0.05, budget_ms = -1.0;
    bool real_weights = false;
    int conj_n = 0, conj_d = 0;
    std::vector<std::string> bench_targets, bench_algorithms;
    bool extended = false;

    auto add_common = [&](CLI::App* cmd, bool with_target = true) {
        if (with_target)
            cmd->add_option("--target", target_name, "library name or target JSON file")
                ->required();
        cmd->add_option("--mode", mode_str, "edge mode: mono|bi (default bi)");
        cmd->add_option("--seed", seed, "RNG seed (fallback: KLAUSKIT_SEED, then 1)");
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* cmd_state = app.add_subcommand("state", "compute the ket of a graph JSON file");
    cmd_state->add_option("--graph", graph_path, "graph JSON file")->required();
    cmd_state->add_option("--target", target_name, "optional target for a fidelity line");

    auto* cmd_encode = app.add_subcommand("encode", "write DIMACS CNF + variable map");
    add_common(cmd_encode);

    auto* cmd_solve = app.add_subcommand("solve", "decide a DIMACS file");
    cmd_solve->add_option("cnf", cnf_path, "DIMACS CNF file")->required();
    cmd_solve->add_option("--external-solver", external_cmd,
                          "shell out to an external DIMACS solver");
    cmd_solve->add_option("--budget-ms", budget_ms, "time budget");

    const char* algo_names[] = {"klaus", "theseus", "theseusopt", "klausopt"};
    const char* algo_help[] = {"logic-driven edge elimination",
                               "continuous optimization with thresholded deletion",
                               "theseus plus per-edge re-minimization",
                               "theseus plus logic-driven deletion"};
    CLI::App* algo_cmds[4];
    for (int k = 0; k < 4; ++k) {
        algo_cmds[k] = app.add_subcommand(algo_names[k], algo_help[k]);
        add_common(algo_cmds[k]);
        algo_cmds[k]->add_option("--tau", tau, "theseus deletion threshold");
        algo_cmds[k]->add_option("--restarts", restarts, "optimizer restarts");
        algo_cmds[k]->add_flag("--real-weights", real_weights, "optimize real weights only");
        algo_cmds[k]->add_option("--budget-ms", budget_ms, "solver time budget");
    }
    std::string klaus_sat_mode = "fixed-true", bench_sat_mode = "free";
    algo_cmds[0]->add_option("--sat-mode", klaus_sat_mode, "fixed-true|free");
    algo_cmds[3]->add_option("--sat-mode", klaus_sat_mode, "fixed-true|free");

    auto* cmd_conj = app.add_subcommand("conjecture",
                                        "monochromatic GHZ(n,d) feasibility check");
    cmd_conj->add_option("n", conj_n, "party count")->required();
    cmd_conj->add_option("d", conj_d, "color count")->required();
    cmd_conj->add_option("--budget-ms", budget_ms, "solver time budget");
    cmd_conj->add_option("--out", out_dir, "dump DIMACS + witness here");

    auto* cmd_bench = app.add_subcommand("bench", "seeded benchmark suite, CSV + summary");
    cmd_bench->add_option("--targets", bench_targets, "library names (default: paper suite)");
    cmd_bench->add_option("--algorithms", bench_algorithms, "subset of the four algorithms");
    cmd_bench->add_option("--runs", runs, "runs per cell (default 25)");
    cmd_bench->add_option("--seed", seed, "base seed; run i uses seed+i");
    cmd_bench->add_option("--sat-mode", bench_sat_mode, "fixed-true|free (default free)");
    cmd_bench->add_option("--tau", tau, "theseus deletion threshold");
    cmd_bench->add_option("--restarts", restarts, "optimizer restarts");
    cmd_bench->add_option("--threads", threads, "worker pool size");
    cmd_bench->add_option("--budget-ms", budget_ms, "per-solve time budget");
    cmd_bench->add_flag("--extended", extended, "include GHZ_8_2");
    cmd_bench->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (cmd_state->parsed()) {
            colored_graph g = graph_from_json(read_file(graph_path));
            ket state = graph_to_state(g);
            std::cout << ket_json(state);
            if (!target_name.empty()) {
                ket target = load_target(target_name);
                std::printf("fidelity %.12f\n", fidelity(target, state));
            }
            return kExitOk;
        }

        if (cmd_encode->parsed()) {
            ket target = load_target(target_name);
            edge_mode mode = parse_mode(mode_str);
            slot_space slots = edge_vars_of(target, mode);
            ensure_dir(out_dir);
            fs::path base(out_dir.empty() ? "." : out_dir);
            std::string stem = target_stem(target_name);
            cnf_formula cnf;
            try {
                cnf = tseitin(build_k(target, mode));
            } catch (const unsatisfiable_by_construction&) {
                // no structural matching for a support coloring: trivially
                // false CNF over the edge variables
                cnf.var_count = slots.slot_count();
                cnf.clauses.push_back({});
            }
            write_file((base / (stem + ".cnf")).string(), export_dimacs(cnf));
            write_file((base / (stem + ".varmap.json")).string(), varmap_json(slots));
            std::printf("wrote %s.cnf (%d vars, %zu clauses) and %s.varmap.json under %s\n",
                        stem.c_str(), cnf.var_count, cnf.clauses.size(), stem.c_str(),
                        base.string().c_str());
            return kExitOk;
        }

        if (cmd_solve->parsed()) {
            cnf_formula cnf = import_dimacs_string(read_file(cnf_path));
            sat_outcome out;
            if (!external_cmd.empty()) {
                out = run_external_solver(external_cmd, cnf);
                if (out.status == sat_status::satisfiable &&
                    !verify_model(cnf, out.model)) {
                    std::fprintf(stderr, "external model failed verification\n");
                    return kExitUsage;
                }
            } else {
                solver_config cfg;
                cfg.max_time_ms = budget_ms;
                out = solve(cnf, {}, cfg);
            }
            if (out.status == sat_status::budget_exceeded) {
                std::printf("BUDGET\n");
                return kExitBudget;
            }
            if (out.status == sat_status::unsatisfiable) {
                std::printf("UNSAT\n");
                return kExitInfeasible;
            }
            std::printf("SAT\n");
            for (int v = 1; v <= cnf.var_count; ++v)
                std::printf("%s%d", v == 1 ? "" : " ", out.model[v] ? v : -v);
            std::printf(" 0\n");
            return kExitOk;
        }

        if (cmd_conj->parsed()) {
            solver_config scfg;
            scfg.max_time_ms = budget_ms;
            conjecture_result res = check_monochromatic_conjecture(conj_n, conj_d, scfg);
            if (!out_dir.empty()) {
                ensure_dir(out_dir);
                fs::path base(out_dir);
                std::string stem =
                    "conjecture_" + std::to_string(conj_n) + "_" + std::to_string(conj_d);
                cnf_formula cnf = tseitin(build_k(ghz(conj_n, conj_d),
                                                  edge_mode::monochromatic));
                write_file((base / (stem + ".cnf")).string(), export_dimacs(cnf));
                write_file((base / (stem + ".varmap.json")).string(),
                           varmap_json(slot_space(conj_n, conj_d, edge_mode::monochromatic)));
                if (res.witness)
                    write_file((base / (stem + ".witness.json")).string(),
                               graph_json(*res.witness));
            }
            if (res.status == sat_status::budget_exceeded) {
                std::printf("BUDGET after %.0f ms\n", res.stats.elapsed_ms);
                return kExitBudget;
            }
            if (res.status == sat_status::unsatisfiable) {
                std::printf("UNSAT (no monochromatic graph generates GHZ(%d,%d)) "
                            "[%.0f ms, %llu conflicts]\n",
                            conj_n, conj_d, res.stats.elapsed_ms,
                            static_cast<unsigned long long>(res.stats.conflicts));
                return kExitInfeasible;
            }
            std::printf("SAT with a %zu-edge witness [%.0f ms, %llu conflicts]\n",
                        res.witness->edge_count(), res.stats.elapsed_ms,
                        static_cast<unsigned long long>(res.stats.conflicts));
            return kExitOk;
        }

        if (cmd_bench->parsed()) {
            bench_options opt;
            opt.targets = bench_targets.empty()
                              ? (extended ? extended_suite() : default_suite())
                              : bench_targets;
            opt.algorithms =
                bench_algorithms.empty() ? default_algorithms() : bench_algorithms;
            opt.runs = runs;
            opt.base_seed = seed;
            opt.mode = parse_sat_mode(bench_sat_mode);
            opt.opt.tau = tau;
            opt.opt.restarts = restarts;
            opt.threads = threads;
            opt.solver_time_ms = budget_ms;
            auto records = run_bench(opt);
            ensure_dir(out_dir);
            fs::path base(out_dir.empty() ? "." : out_dir);
            write_file((base / "bench.csv").string(), bench_csv(records));
            write_file((base / "summary.json").string(), bench_summary_json(records));
            std::printf("wrote %zu records to %s/bench.csv and summary.json\n",
                        records.size(), base.string().c_str());
            return kExitOk;
        }

        // one of the four design algorithms
        for (int k = 0; k < 4; ++k) {
            if (!algo_cmds[k]->parsed()) continue;
            ket target = load_target(target_name);
            edge_mode mode = parse_mode(mode_str);
            optimizer_config ocfg;
            ocfg.tau = tau;
            ocfg.restarts = restarts;
            ocfg.real_weights = real_weights;
            design_solution sol =
                run_algorithm(algo_names[k], target, mode, seed,
                              parse_sat_mode(klaus_sat_mode), ocfg, -1, budget_ms);
            write_solution_files(sol, out_dir, target_stem(target_name));
            std::printf("%s %s seed=%llu: edges=%d fidelity=%.9f converged=%s "
                        "(encode %.1f ms, sat %.1f ms, opt %.1f ms)\n",
                        sol.algorithm.c_str(), target_stem(target_name).c_str(),
                        static_cast<unsigned long long>(sol.seed), sol.edge_count,
                        sol.fidelity, sol.converged ? "yes" : "no",
                        sol.phases.encode_ms, sol.phases.sat_ms, sol.phases.opt_ms);
            return kExitOk;
        }
    } catch (const infeasible_target& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kExitInfeasible;
    } catch (const budget_exceeded& e) {
        std::fprintf(stderr, "budget exceeded: %s\n", e.what());
        return kExitBudget;
    } catch (const error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
