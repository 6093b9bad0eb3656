// Acceptance checks, one line per criterion. Usage:
//   mcsym_acceptance [path/to/mcsym path/to/example1.mcs]
// Without arguments criterion 1 runs in-process only.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "mcsym/detect.hpp"
#include "mcsym/instance_file.hpp"
#include "oracles.hpp"

using namespace mcsym;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Time limits. Criteria 1 and 2 allow 1 s, criterion 3 five minutes.
constexpr double example_limit_s = 1.0;
constexpr double suite_limit_s = 300.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::set<std::string> render(const StateSet& s) {
    std::set<std::string> out;
    for (const auto& x : s) out.insert(format_state(x));
    return out;
}

std::set<std::string> text(const PermSet& s) {
    std::set<std::string> out;
    for (const auto& p : s) out.insert(emit_cycles(p, AtomStyle::bare));
    return out;
}

std::string run_command(const std::string& cmd, int& status) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    std::array<char, 512> buf{};
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) out += buf.data();
    status = pclose(pipe);
    return out;
}

std::set<std::string> lines(const std::string& s) {
    std::set<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.insert(line);
    return out;
}

const std::set<std::string> equilibria = {"({b},{d},{})", "({a},{e},{h})", "({},{d,e,f},{})", "({},{d,e,g},{})"};
const std::set<std::string> partial = {"({b},{d},eps)", "({a},{e},eps)", "({},{d,e,f},eps)", "({},{d,e,g},eps)"};

Outcome criterion1(const std::string& cli, const std::string& file) {
    Outcome o;
    auto t = Clock::now();
    auto m = oracle::example1();
    bool ok = render(evaluate_equilibria(m)) == equilibria && render(evaluate_distributed(m, 1)) == partial;
    if (!cli.empty()) {
        int st1 = 0, st2 = 0;
        auto all = lines(run_command("\"" + cli + "\" solve \"" + file + "\"", st1));
        auto root = lines(run_command("\"" + cli + "\" solve \"" + file + "\" --root 1", st2));
        ok = ok && st1 == 0 && st2 == 0 && all == equilibria && root == partial;
    }
    double s = seconds_since(t);
    o.pass = ok && s < example_limit_s;
    o.detail = (cli.empty() ? "in-process" : "cli+in-process") + std::string(", ") + std::to_string(s) + " s";
    return o;
}

Outcome criterion2() {
    Outcome o;
    auto t = Clock::now();
    auto m = oracle::example1();
    // The {C_2} set is closed under composition, so it also holds
    // (a b)(d e); the three listed elements must be present.
    const std::set<std::string> c1 = {"", "(a b) (d e)"};
    const std::set<std::string> c2 = {"", "(f g)", "(a b) (d e)", "(a b) (d e) (f g)"};
    const std::set<std::string> c3 = {""};
    const std::set<std::string> listed_c2 = {"", "(f g)", "(a b) (d e) (f g)"};
    bool ok = true;
    const std::array<std::set<std::string>, 3> expected{c1, c2, c3};
    for (int k = 1; k <= 3; ++k) {
        auto brute = text(brute_force_partial_symmetries(m, {k}));
        auto gap = text(lsd(m, k).perms);
        ok = ok && brute == expected[static_cast<std::size_t>(k - 1)] && gap == brute;
    }
    for (const auto& p : listed_c2) ok = ok && c2.count(p);
    DetectionService service(m);
    ok = ok && text(service.dsd(1).perms) == c2;
    ok = ok && text(service.dsd(3).perms) == std::set<std::string>{"", "(f g)"};
    double s = seconds_since(t);
    o.pass = ok && s < example_limit_s;
    o.detail = std::to_string(s) + " s";
    return o;
}

Outcome criterion3() {
    Outcome o;
    auto t = Clock::now();
    SplitMix64 rng(0xC3);
    std::size_t instances = 0, checks = 0, mismatches = 0;
    for (int i = 0; i < 240; ++i) {
        oracle::RandomMcs params;
        params.allow_cycles = i % 2 == 0;
        auto m = oracle::random_mcs(rng, params);
        ++instances;
        DetectionService service(m);
        for (int k = 1; k <= m.size(); ++k) {
            ++checks;
            if (service.dsd(k).perms != brute_force_partial_symmetries(m, import_closure(m, k))) ++mismatches;
        }
    }
    double s = seconds_since(t);
    o.pass = mismatches == 0 && instances >= 200 && s < suite_limit_s;
    o.detail = std::to_string(instances) + " instances, " + std::to_string(checks) + " roots, " +
               std::to_string(mismatches) + " mismatches, " + std::to_string(s) + " s";
    return o;
}

Outcome criterion4() {
    Outcome o;
    SplitMix64 rng(0xC4);
    std::size_t instances = 0, pairs = 0, mismatches = 0, nontrivial = 0;
    for (int i = 0; i < 220; ++i) {
        auto m = oracle::random_single_context(rng, 6);
        ++instances;
        auto brute = brute_force_partial_symmetries(m, {1});
        auto g = build_gap(m, 1);
        PermSet translated;
        for (const auto& v : automorphism_generators(g.graph)) translated.insert(graph_perm_to_partial_symmetry(g, v));
        auto closure = group_closure(translated, default_closure_cap, g.domain);
        if (closure != brute) ++mismatches;
        if (brute.size() > 1) ++nontrivial;
        auto autos = oracle::all_automorphisms(g.graph);
        for (int s = 0; s < 6 && !autos.empty(); ++s) {
            const auto& x = autos[rng.below(autos.size())];
            const auto& y = autos[rng.below(autos.size())];
            ++pairs;
            auto lhs = graph_perm_to_partial_symmetry(g, oracle::then(x, y));
            auto rhs = compose(graph_perm_to_partial_symmetry(g, x), graph_perm_to_partial_symmetry(g, y));
            if (lhs != rhs) ++mismatches;
        }
    }
    o.pass = mismatches == 0 && instances >= 200;
    o.detail = std::to_string(instances) + " contexts (" + std::to_string(nontrivial) + " symmetric), " +
               std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " mismatches";
    return o;
}

struct BreakingSuite {
    std::vector<std::pair<MultiContextSystem, int>> cases;
};

BreakingSuite breaking_suite() {
    BreakingSuite suite;
    SplitMix64 rng(0xC5);
    oracle::RandomMcs params;
    params.max_contexts = 3;
    params.max_kb_rules = 1;
    params.even_loop_percent = 100;
    for (int i = 0; i < 120; ++i) {
        auto m = oracle::random_mcs(rng, params);
        int k = rng.range(1, m.size());
        suite.cases.emplace_back(std::move(m), k);
    }
    return suite;
}

Outcome criterion5(const BreakingSuite& suite) {
    Outcome o;
    std::size_t perms = 0, mismatches = 0, reduced = 0;
    for (const auto& [m, k] : suite.cases) {
        auto order = default_order(m);
        auto detected = detect_partial_symmetries(m, k).perms;
        auto eq = enumerate_partial_equilibria(m, k);
        for (const auto& p : detected) {
            ++perms;
            StateSet expected;
            for (const auto& s : eq)
                if (oracle::lex_leq_direct(s, p, order)) expected.insert(s);
            auto got = project_original(enumerate_partial_equilibria(extend_mcs(m, {p}, order, {k}), k, 40), m);
            if (got != expected) ++mismatches;
        }
        auto all = project_original(enumerate_partial_equilibria(extend_mcs(m, detected, order, {k}), k, 60), m);
        for (const auto& s : eq) {
            std::size_t kept = 0;
            for (const auto& x : orbit_of_states(detected, s)) kept += all.count(x);
            if (kept != 1) ++mismatches;
        }
        if (all != lex_leader_filter(eq, detected, order)) ++mismatches;
        if (all.size() < eq.size()) ++reduced;
    }
    o.pass = mismatches == 0 && suite.cases.size() >= 100;
    o.detail = std::to_string(suite.cases.size()) + " instances, " + std::to_string(perms) + " permutations, " +
               std::to_string(reduced) + " reduced, " + std::to_string(mismatches) + " mismatches";
    return o;
}

Outcome criterion6(const BreakingSuite& suite) {
    Outcome o;
    std::size_t violations = 0, orbits = 0;
    for (const auto& [m, k] : suite.cases) {
        auto order = default_order(m);
        auto plan = plan_breaking(m, k, BreakMode::generators);
        auto group = detect_partial_symmetries(m, k).perms;
        auto eq = enumerate_partial_equilibria(m, k);
        auto survivors = project_original(evaluate_distributed(extend_mcs(m, plan.breaking, order, {k}), k), m);
        for (const auto& s : survivors)
            if (!eq.count(s)) ++violations;
        auto leaders = lex_leader_filter(eq, group, order);
        for (const auto& s : leaders)
            if (!survivors.count(s)) ++violations;
        StateSet seen;
        for (const auto& s : eq) {
            if (seen.count(s)) continue;
            auto orbit = orbit_of_states(group, s);
            seen.insert(orbit.begin(), orbit.end());
            ++orbits;
            bool any = false;
            for (const auto& x : orbit) any = any || survivors.count(x);
            if (!any) ++violations;
        }
    }
    o.pass = violations == 0;
    o.detail = std::to_string(suite.cases.size()) + " instances, " + std::to_string(orbits) + " orbits, " +
               std::to_string(violations) + " violations";
    return o;
}

Outcome criterion7(const BreakingSuite& suite) {
    Outcome o;
    std::size_t sets = 0, violations = 0;
    auto check = [&](const PermSet& gens) {
        if (gens.empty()) return;
        ++sets;
        auto group = group_closure(gens);
        if (!oracle::within_log_bound(gens.size(), group.size())) ++violations;
    };
    for (const auto& [m, k] : suite.cases) {
        auto detected = detect_partial_symmetries(m, k).perms;
        check(reduce_irredundant(detected));
        check(select_breaking_set(detected, 1000));
        auto plan = plan_breaking(m, k, BreakMode::generators);
        check(plan.breaking);
    }
    SplitMix64 rng(0xC7);
    for (int t = 0; t < 60; ++t) {
        auto m = oracle::random_single_context(rng, 6);
        auto res = lsd(m, 1);
        check(reduce_irredundant(res.perms));
    }
    o.pass = violations == 0 && sets > 0;
    o.detail = std::to_string(sets) + " generating sets, " + std::to_string(violations) + " violations";
    return o;
}

TopologySpec spec_for(Topology kind, int n, std::uint64_t seed) {
    TopologySpec s;
    s.kind = kind;
    s.n = n;
    s.seed = seed;
    s.atoms_per_context = 4;
    s.max_exported = 2;
    s.max_bridge_rules = 3;
    s.max_kb_rules = 3;
    return s;
}

Outcome criterion8() {
    Outcome o;
    std::size_t problems = 0, checked = 0;
    auto imports = [](const MultiContextSystem& m, int a, int b) { return m.context(a).imports().count(b) != 0; };
    for (int n : {5, 9, 13}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto m = generate(spec_for(Topology::house, n, seed));
            ++checked;
            // Every house: ridge r, middles m1 m2, basement b1 b2.
            std::vector<int> ridges{1};
            std::size_t head = 0;
            std::size_t edges = 0;
            for (int k = 1; k <= m.size(); ++k) edges += m.context(k).imports().size();
            for (int next = 2; next + 3 <= n; next += 4) {
                int r = ridges[head++];
                int m1 = next, m2 = next + 1, b1 = next + 2, b2 = next + 3;
                std::set<int> nodes{r, m1, m2, b1, b2};
                std::size_t inner = 0;
                for (int a : nodes)
                    for (int b : nodes) inner += imports(m, a, b);
                bool shape = imports(m, r, m1) && imports(m, r, m2) && imports(m, m1, b1) && imports(m, b1, b2) &&
                             imports(m, b2, m2) && imports(m, m2, m1);
                if (!shape || inner != 6 || nodes.size() != 5) ++problems;
                ridges.push_back(b1);
                ridges.push_back(b2);
            }
            if (edges != static_cast<std::size_t>(6 * (n - 1) / 4)) ++problems;
        }
    }
    for (auto kind : {Topology::diamond, Topology::zigzag}) {
        for (int n : {4, 7, 10}) {
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                auto m = generate(spec_for(kind, n, seed));
                ++checked;
                for (int top = 1; top + 3 <= n; top += 3) {
                    bool linked = imports(m, top + 1, top + 2) || imports(m, top + 2, top + 1);
                    if (linked != (kind == Topology::zigzag)) ++problems;
                }
            }
        }
    }
    for (auto kind : {Topology::diamond, Topology::zigzag, Topology::house, Topology::ring}) {
        int n = kind == Topology::house ? 9 : 7;
        auto spec = spec_for(kind, n, 42);
        spec.atoms_per_context = 10;
        spec.max_exported = 5;
        spec.max_bridge_rules = 5;
        spec.max_kb_rules = 5;
        ++checked;
        if (generate_file(spec) != generate_file(spec)) ++problems;
        spec.seed = 43;
        if (generate_file(spec) == generate_file(spec_for(kind, n, 42))) ++problems;
    }
    o.pass = problems == 0;
    o.detail = std::to_string(checked) + " instances, " + std::to_string(problems) + " problems";
    return o;
}

Outcome criterion9() {
    Outcome o;
    std::ostringstream detail;
    bool ok = true;
    for (auto kind : {Topology::diamond, Topology::zigzag, Topology::house, Topology::ring}) {
        int n = kind == Topology::house ? 5 : 4;
        std::size_t runs = 0, symmetric = 0, reduced = 0, bad = 0;
        for (std::uint64_t seed = 1; seed <= 60; ++seed) {
            auto spec = spec_for(kind, n, seed);
            auto m = generate(spec);
            for (auto mode : {BreakMode::full, BreakMode::generators}) {
                auto r = run_pipeline(m, 1, mode);
                if (!r.solutions_before || !r.solutions_after) continue;
                ++runs;
                if (r.compression < 0.0 || r.compression > 1.0 || *r.solutions_after > *r.solutions_before) ++bad;
                if (r.group_size > 1) ++symmetric;
                if (*r.solutions_after < *r.solutions_before) ++reduced;
            }
        }
        ok = ok && bad == 0 && reduced >= 1;
        detail << topology_name(kind) << ": " << reduced << "/" << symmetric << " reduced";
        if (bad) detail << ", " << bad << " out of bounds";
        detail << "; ";
    }
    o.pass = ok;
    o.detail = detail.str();
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 2 ? argv[1] : "";
    std::string file = argc > 2 ? argv[2] : "";
    auto suite = breaking_suite();
    std::vector<std::function<Outcome()>> criteria = {
        [&] { return criterion1(cli, file); },
        criterion2,
        criterion3,
        criterion4,
        [&] { return criterion5(suite); },
        [&] { return criterion6(suite); },
        [&] { return criterion7(suite); },
        criterion8,
        criterion9,
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
