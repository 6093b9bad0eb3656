// mcsym: generate, detect, break, solve, bench.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcsym/bench.hpp"
#include "mcsym/detect.hpp"
#include "mcsym/error.hpp"
#include "mcsym/instance_file.hpp"
#include "mcsym/sbc.hpp"

using namespace mcsym;

namespace {

enum Exit { ok = 0, failure = 1, parse_error = 2, bound_exceeded = 3, invariant_failure = 4 };

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

int check_root(const MultiContextSystem& m, int root) {
    if (root < 1 || root > m.size()) throw std::out_of_range("no context " + std::to_string(root));
    return root;
}

std::string cycles_line(const Permutation& p) {
    auto s = emit_cycles(p, AtomStyle::automatic);
    return s.empty() ? "()" : s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetry detection and breaking for multi-context systems"};
    app.require_subcommand(1);

    TopologySpec spec;
    std::string topology = "diamond", out_path;
    auto* gen = app.add_subcommand("gen", "Generate a benchmark instance");
    gen->add_option("--topology", topology, "diamond, zigzag, house or ring")->required();
    gen->add_option("--n", spec.n, "Number of contexts")->required();
    gen->add_option("--seed", spec.seed, "RNG seed");
    gen->add_option("--atoms", spec.atoms_per_context, "Atoms per context");
    gen->add_option("--export", spec.max_exported, "Max exported atoms per context");
    gen->add_option("--brules", spec.max_bridge_rules, "Max bridge rules per context");
    gen->add_option("--bbody", spec.max_bridge_body, "Max bridge body literals");
    gen->add_option("--kbrules", spec.max_kb_rules, "Max kb rules per context");
    gen->add_option("-o,--output", out_path, "Output file (default stdout)");

    std::string file;
    int root = 1;
    bool local_only = false, oracle = false;
    auto* detect = app.add_subcommand("detect", "List partial symmetries w.r.t. the root's import closure");
    detect->add_option("file", file)->required();
    detect->add_option("--root", root);
    detect->add_flag("--local-only", local_only, "Local symmetries only");
    detect->add_flag("--oracle", oracle, "Brute-force enumeration instead of DSD");

    bool generators = false, full = false, emit_sbc_only = false;
    std::size_t budget = 10;
    auto* brk = app.add_subcommand("break", "Add symmetry-breaking constraints");
    brk->add_option("file", file)->required();
    brk->add_option("--root", root)->required();
    auto* gen_flag = brk->add_flag("--generators", generators, "Break an irredundant generating set (default)");
    brk->add_flag("--full", full, "Break every detected partial symmetry")->excludes(gen_flag);
    brk->add_option("--budget", budget, "Max generators broken");
    brk->add_flag("--emit-sbc", emit_sbc_only, "Print only the added kb/br sections");
    brk->add_option("-o,--output", out_path, "Output file (default stdout)");

    bool distributed = false, brute = false;
    bool has_root = false;
    auto* solve = app.add_subcommand("solve", "Print (partial) equilibria");
    solve->add_option("file", file)->required();
    auto* root_opt = solve->add_option("--root", root, "Partial equilibria w.r.t. this context");
    auto* dist_flag = solve->add_flag("--distributed", distributed, "Distributed evaluation (default)");
    solve->add_flag("--brute", brute, "Exhaustive oracle")->excludes(dist_flag);

    std::string mode = "generators", format = "text";
    int instances = 10;
    std::vector<int> sizes;
    std::vector<std::string> topologies;
    auto* bench = app.add_subcommand("bench", "Run the breaking pipeline on generated instances");
    bench->add_option("--topology", topologies, "One or more of D, Z, H, R (or full names)")->required()->delimiter(',');
    bench->add_option("--n", sizes, "Context counts (default: smallest valid)");
    bench->add_option("--instances", instances);
    bench->add_option("--mode", mode, "none, full or generators");
    bench->add_option("--format", format, "text, csv or json");
    bench->add_option("--seed", spec.seed, "First seed; instances use seed, seed+1, ...");
    bench->add_option("--atoms", spec.atoms_per_context);
    bench->add_option("--export", spec.max_exported);
    bench->add_option("--brules", spec.max_bridge_rules);
    bench->add_option("--bbody", spec.max_bridge_body);
    bench->add_option("--kbrules", spec.max_kb_rules);
    bench->add_option("--budget", budget);
    bench->add_option("-o,--output", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : parse_error;
    }
    has_root = root_opt->count() > 0;

    try {
        if (*gen) {
            spec.kind = parse_topology(topology);
            write_output(out_path, generate_file(spec));
        } else if (*detect) {
            auto m = load_mcs(file);
            check_root(m, root);
            PermSet perms;
            if (oracle) {
                perms = brute_force_partial_symmetries(m, import_closure(m, root));
                if (local_only) {
                    PermSet local;
                    for (const auto& p : perms)
                        if (is_local_symmetry(m, root, p) || p.is_identity()) local.insert(p);
                    perms = std::move(local);
                }
            } else {
                DetectionOptions opts;
                opts.mode = local_only ? GapMode::local_only : GapMode::shared;
                DetectionService service(m, opts);
                auto result = service.dsd(root);
                perms = std::move(result.perms);
                for (const auto& w : service.warnings()) std::cerr << "warning: " << w << "\n";
            }
            for (const auto& p : perms) std::cout << cycles_line(p) << "\n";
        } else if (*brk) {
            auto m = load_mcs(file);
            check_root(m, root);
            PipelineOptions opts;
            opts.budget = budget;
            auto plan = plan_breaking(m, root, full ? BreakMode::full : BreakMode::generators, opts);
            auto rewrite = encode_all(m, plan.breaking, default_order(m), {root});
            if (emit_sbc_only)
                write_output(out_path, emit_sbc(rewrite));
            else
                write_output(out_path, emit_mcs(apply_rewrite(m, rewrite)));
        } else if (*solve) {
            auto m = load_mcs(file);
            StateSet states;
            if (has_root) {
                check_root(m, root);
                states = brute ? enumerate_partial_equilibria(m, root) : evaluate_distributed(m, root);
            } else {
                states = brute ? enumerate_equilibria(m) : evaluate_equilibria(m);
            }
            for (const auto& s : states) std::cout << format_state(s) << "\n";
        } else if (*bench) {
            BreakMode bm = parse_break_mode(mode);
            ReportFormat rf = parse_report_format(format);
            PipelineOptions opts;
            opts.budget = budget;
            std::vector<RunReport> reports;
            const auto first_seed = spec.seed;
            for (const auto& t : topologies) {
                Topology kind = parse_topology(t);
                std::vector<int> ns = sizes;
                if (ns.empty()) ns.push_back(kind == Topology::house ? 5 : kind == Topology::ring ? 2 : 4);
                for (int n : ns)
                for (int i = 0; i < instances; ++i) {
                    TopologySpec s = spec;
                    s.kind = kind;
                    s.n = n;
                    s.seed = first_seed + static_cast<std::uint64_t>(i);
                    auto rep = run_pipeline(generate(s), 1, bm, opts);
                    rep.topology = topology_name(s.kind);
                    rep.seed = s.seed;
                    rep.instance = topology_name(s.kind) + "-" + std::to_string(n) + "-" + std::to_string(s.seed);
                    if (!rep.note.empty()) std::cerr << rep.instance << ": " << rep.note << "\n";
                    reports.push_back(std::move(rep));
                }
            }
            write_output(out_path, report_table(reports, rf));
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return parse_error;
    } catch (const BoundExceeded& e) {
        std::cerr << "bound exceeded: " << e.what() << "\n";
        return bound_exceeded;
    } catch (const InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return invariant_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
    return ok;
}
