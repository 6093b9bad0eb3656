#include <doctest.h>

#include <algorithm>
#include <json.hpp>

#include "mcsym/bench.hpp"
#include "mcsym/instance_file.hpp"
#include "mcsym/sbc.hpp"
#include "oracles.hpp"

using namespace mcsym;

namespace {

using Edges = std::vector<std::pair<int, int>>;

std::set<std::pair<int, int>> observed_edges(const MultiContextSystem& m) {
    std::set<std::pair<int, int>> out;
    for (int k = 1; k <= m.size(); ++k)
        for (int j : m.context(k).imports()) out.insert({k, j});
    return out;
}

TopologySpec small(Topology kind, int n, std::uint64_t seed) {
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

}  // namespace

TEST_CASE("splitmix64 reference values") {
    // First outputs for seed 0 from the reference implementation.
    SplitMix64 r(0);
    CHECK(r.next() == 0xe220a8397b1dcdafULL);
    CHECK(r.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(r.next() == 0x06c45d188009454fULL);
    SplitMix64 a(9), b(9);
    for (int i = 0; i < 100; ++i) CHECK(a.below(7) == b.below(7));
    SplitMix64 c(3);
    for (int i = 0; i < 1000; ++i) {
        int v = c.range(-2, 2);
        CHECK(v >= -2);
        CHECK(v <= 2);
    }
    CHECK_THROWS_AS(c.below(0), std::invalid_argument);
}

TEST_CASE("topology names") {
    CHECK(parse_topology("D") == Topology::diamond);
    CHECK(parse_topology("zigzag") == Topology::zigzag);
    CHECK(parse_topology("H") == Topology::house);
    CHECK(parse_topology("ring") == Topology::ring);
    CHECK(topology_name(Topology::house) == "house");
    CHECK_THROWS_AS(parse_topology("X"), std::invalid_argument);
}

TEST_CASE("topology edges") {
    CHECK(topology_edges(Topology::diamond, 4) == Edges{{1, 2}, {1, 3}, {2, 4}, {3, 4}});
    CHECK(topology_edges(Topology::zigzag, 4) == Edges{{1, 2}, {1, 3}, {2, 4}, {3, 4}, {2, 3}});
    CHECK(topology_edges(Topology::diamond, 7).size() == 8);
    CHECK(topology_edges(Topology::house, 5) == Edges{{1, 2}, {1, 3}, {2, 4}, {4, 5}, {5, 3}, {3, 2}});
    auto h9 = topology_edges(Topology::house, 9);
    CHECK(h9.size() == 12);
    CHECK(std::count(h9.begin(), h9.end(), std::make_pair(4, 6)) == 1);
    CHECK(topology_edges(Topology::ring, 3) == Edges{{1, 2}, {2, 3}, {3, 1}});
}

TEST_CASE("topology validation") {
    CHECK_THROWS_AS(validate(small(Topology::diamond, 5, 1)), std::invalid_argument);
    CHECK_THROWS_AS(validate(small(Topology::house, 4, 1)), std::invalid_argument);
    CHECK_THROWS_AS(validate(small(Topology::ring, 1, 1)), std::invalid_argument);
    auto bad = small(Topology::ring, 3, 1);
    bad.atoms_per_context = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    CHECK_NOTHROW(validate(small(Topology::zigzag, 10, 1)));
    CHECK_NOTHROW(validate(small(Topology::house, 13, 1)));
}

TEST_CASE("property: generated instances follow their topology") {
    for (auto kind : {Topology::diamond, Topology::zigzag, Topology::house, Topology::ring}) {
        for (int n : {4, 5, 7, 9, 10, 13}) {
            auto spec = small(kind, n, 17);
            try {
                validate(spec);
            } catch (const std::invalid_argument&) {
                continue;
            }
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                spec.seed = seed;
                auto m = generate(spec);
                CHECK(m.size() == n);
                auto expected = topology_edges(kind, n);
                CHECK(observed_edges(m) == std::set<std::pair<int, int>>(expected.begin(), expected.end()));
                for (const auto& c : m.contexts()) {
                    CHECK(c.atoms.size() == 4);
                    for (const auto& r : c.br) CHECK(r.body_atoms().size() <= 2);
                }
                CHECK(generate_file(spec) == generate_file(spec));
                CHECK(emit_mcs(parse_mcs(generate_file(spec))) == emit_mcs(m));
            }
        }
    }
}

TEST_CASE("different seeds give different instances") {
    auto a = generate_file(small(Topology::ring, 5, 1));
    auto b = generate_file(small(Topology::ring, 5, 2));
    CHECK(a != b);
    CHECK(a.find(" seed=1 ") != std::string::npos);
}

TEST_CASE("pipeline on the running example") {
    auto m = oracle::example1();
    auto none = run_pipeline(m, 1, BreakMode::none);
    CHECK(*none.solutions_before == 4);
    CHECK(*none.solutions_after == 4);
    CHECK(none.compression == 0.0);
    auto full = run_pipeline(m, 1, BreakMode::full);
    CHECK(full.group_size == 4);
    CHECK(full.breaking_set_size == 3);
    CHECK(full.generator_count == 2);
    CHECK(*full.solutions_after == 2);
    CHECK(full.compression == doctest::Approx(0.5));
    auto gens = run_pipeline(m, 1, BreakMode::generators);
    CHECK(gens.breaking_set_size == 1);
    CHECK(*gens.solutions_after == 3);
    CHECK(gens.compression == doctest::Approx(0.25));
    PipelineOptions zero;
    zero.budget = 0;
    CHECK(*run_pipeline(m, 1, BreakMode::generators, zero).solutions_after == 4);
    CHECK(parse_break_mode("generators") == BreakMode::generators);
    CHECK_THROWS_AS(parse_break_mode("some"), std::invalid_argument);
}

TEST_CASE("property: compression stays within bounds") {
    for (auto kind : {Topology::diamond, Topology::zigzag, Topology::house, Topology::ring}) {
        int n = kind == Topology::house ? 5 : 4;
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            auto m = generate(small(kind, n, seed));
            for (auto mode : {BreakMode::full, BreakMode::generators}) {
                auto r = run_pipeline(m, 1, mode);
                if (!r.solutions_before) continue;
                CHECK(r.compression >= 0.0);
                CHECK(r.compression <= 1.0);
                CHECK(*r.solutions_after <= *r.solutions_before);
                CHECK((*r.solutions_after > 0) == (*r.solutions_before > 0));
            }
        }
    }
}

TEST_CASE("report tables") {
    CHECK(report_table({}, ReportFormat::csv) ==
          "topology,n,mode,instances,measured,solutions_before,solutions_after,compression,group_size,generators,seconds\n");
    CHECK(nlohmann::json::parse(report_table({}, ReportFormat::json))["rows"].empty());

    RunReport a;
    a.topology = "ring";
    a.n = 3;
    a.mode = BreakMode::full;
    a.solutions_before = 4;
    a.solutions_after = 2;
    a.compression = 0.5;
    a.group_size = 2;
    RunReport b = a;
    b.solutions_after = 4;
    b.compression = 0.0;
    RunReport c = a;
    c.solutions_before.reset();
    c.solutions_after.reset();
    RunReport d = a;
    d.topology = "house";
    auto csv = report_table({a, b, c, d}, ReportFormat::csv);
    CHECK(csv.find("ring,3,full,3,2,4.0000,3.0000,0.2500,2.0000,0.0000,0.0000\n") != std::string::npos);
    CHECK(csv.find("house,3,full,1,1,4.0000,2.0000,0.5000") != std::string::npos);
    auto js = nlohmann::json::parse(report_table({a, b, c, d}, ReportFormat::json));
    REQUIRE(js["rows"].size() == 2);
    for (const auto& row : js["rows"])
        if (row["topology"] == "ring") {
            CHECK(row["compression"].get<double>() == doctest::Approx(0.25));
            CHECK(row["instances"].get<int>() == 3);
        }
    CHECK(report_table({a}, ReportFormat::text).find("ring") != std::string::npos);
    CHECK(parse_report_format("json") == ReportFormat::json);
    CHECK_THROWS_AS(parse_report_format("xml"), std::invalid_argument);
}

TEST_CASE("property: pipeline counts match the lex-leader oracle") {
    for (auto kind : {Topology::diamond, Topology::zigzag, Topology::house, Topology::ring}) {
        int n = kind == Topology::house ? 5 : 4;
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            auto m = generate(small(kind, n, seed));
            auto group = detect_partial_symmetries(m, 1).perms;
            std::size_t leaders = lex_leader_filter(evaluate_distributed(m, 1), group, default_order(m)).size();
            auto full = run_pipeline(m, 1, BreakMode::full);
            auto gens = run_pipeline(m, 1, BreakMode::generators);
            REQUIRE(full.solutions_after);
            CHECK(*full.solutions_after == leaders);
            CHECK(*gens.solutions_after >= leaders);
        }
    }
}
