#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcsym/detect.hpp"
#include "mcsym/mcs.hpp"

namespace mcsym {

/// SplitMix64 (Steele, Lea, Flood). Pinned: seeds must reproduce files.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform in [0, bound); bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform in [lo, hi].
    int range(int lo, int hi);
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
    /// Independent stream derived from this one and a label.
    SplitMix64 split(std::uint64_t label);

private:
    std::uint64_t state_;
};

enum class Topology { diamond, zigzag, house, ring };

std::string topology_name(Topology t);
/// Accepts full names and the letters D/Z/H/R. Throws std::invalid_argument.
Topology parse_topology(const std::string& s);

struct TopologySpec {
    Topology kind = Topology::diamond;
    int n = 4;
    std::uint64_t seed = 1;
    int atoms_per_context = 10;
    int max_exported = 5;
    int max_bridge_rules = 5;
    int max_bridge_body = 2;
    int max_kb_rules = 5;
};

/// Throws std::invalid_argument when n does not fit the topology.
void validate(const TopologySpec& spec);

/// Import edges (from, to): `from` has bridge rules reading `to`.
std::vector<std::pair<int, int>> topology_edges(Topology kind, int n);

MultiContextSystem generate(const TopologySpec& spec);
/// Instance file text, with the generation parameters in the header.
std::string generate_file(const TopologySpec& spec);

enum class BreakMode { none, full, generators };
std::string break_mode_name(BreakMode m);
BreakMode parse_break_mode(const std::string& s);

struct PipelineOptions {
    std::size_t budget = 10;
    EvaluationOptions evaluation;
    DetectionOptions detection;
};

struct RunReport {
    std::string instance;
    std::string topology;
    int n = 0;
    std::uint64_t seed = 0;
    int root = 1;
    BreakMode mode = BreakMode::none;
    /// nullopt when evaluation exceeded its bounds.
    std::optional<std::size_t> solutions_before;
    std::optional<std::size_t> solutions_after;
    double compression = 0.0;
    std::size_t group_size = 0;
    bool group_complete = true;
    std::size_t generator_count = 0;
    std::size_t breaking_set_size = 0;
    double detect_ms = 0, break_ms = 0, solve_before_ms = 0, solve_after_ms = 0;
    std::string note;
};

/// Breaking set per mode: full takes every detected partial symmetry of
/// the root's import closure, generators takes an irredundant generating
/// set of the local symmetries (local-only colouring), truncated to budget.
struct BreakingPlan {
    SymmetrySet detected;
    PermSet breaking;
    std::size_t generator_count = 0;
};
BreakingPlan plan_breaking(const MultiContextSystem& m, int root, BreakMode mode, const PipelineOptions& opts = {});

RunReport run_pipeline(const MultiContextSystem& m, int root, BreakMode mode, const PipelineOptions& opts = {});

enum class ReportFormat { text, csv, json };
ReportFormat parse_report_format(const std::string& s);

/// One row per (topology, n, mode) cell with means over its instances.
std::string report_table(const std::vector<RunReport>& reports, ReportFormat format);

}  // namespace mcsym
