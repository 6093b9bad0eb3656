#include <chrono>
#include <limits>
#include <stdexcept>

#include "mcsym/bench.hpp"
#include "mcsym/error.hpp"
#include "mcsym/sbc.hpp"

namespace mcsym {

std::string break_mode_name(BreakMode m) {
    switch (m) {
    case BreakMode::none: return "none";
    case BreakMode::full: return "full";
    case BreakMode::generators: return "generators";
    }
    return "?";
}

BreakMode parse_break_mode(const std::string& s) {
    if (s == "none") return BreakMode::none;
    if (s == "full") return BreakMode::full;
    if (s == "generators") return BreakMode::generators;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

}  // namespace

BreakingPlan plan_breaking(const MultiContextSystem& m, int root, BreakMode mode, const PipelineOptions& opts) {
    BreakingPlan plan;
    if (mode == BreakMode::none) return plan;
    DetectionOptions dopts = opts.detection;
    dopts.mode = mode == BreakMode::generators ? GapMode::local_only : GapMode::shared;
    DetectionService service(m, dopts);
    plan.detected = service.dsd(root);

    if (mode == BreakMode::full) {
        for (const auto& p : plan.detected.perms)
            if (!p.is_identity()) plan.breaking.insert(p);
        try {
            plan.generator_count = reduce_irredundant(plan.breaking).size();
        } catch (const BoundExceeded&) {
            plan.generator_count = 0;
        }
        return plan;
    }

    // Local symmetries of each node, lifted to the common domain.
    AtomSet domain;
    if (!plan.detected.perms.empty()) domain = plan.detected.perms.begin()->domain();
    PermSet gens;
    for (int k : import_closure(m, root))
        for (const auto& g : service.local(k).generators) gens.insert(g.extended(domain));
    PermSet reduced;
    try {
        reduced = reduce_irredundant(gens);
    } catch (const BoundExceeded&) {
        reduced = gens;
    }
    plan.generator_count = reduced.size();
    plan.breaking = select_breaking_set(reduced, opts.budget);
    return plan;
}

RunReport run_pipeline(const MultiContextSystem& m, int root, BreakMode mode, const PipelineOptions& opts) {
    RunReport rep;
    rep.root = root;
    rep.mode = mode;
    rep.n = m.size();

    auto t = Clock::now();
    BreakingPlan plan = plan_breaking(m, root, mode, opts);
    rep.detect_ms = ms_since(t);
    rep.group_size = plan.detected.perms.size();
    rep.group_complete = plan.detected.complete;
    rep.generator_count = plan.generator_count;
    rep.breaking_set_size = plan.breaking.size();

    t = Clock::now();
    MultiContextSystem broken = extend_mcs(m, plan.breaking, default_order(m), {root});
    rep.break_ms = ms_since(t);

    try {
        t = Clock::now();
        rep.solutions_before = evaluate_distributed(m, root, opts.evaluation).size();
        rep.solve_before_ms = ms_since(t);
        t = Clock::now();
        rep.solutions_after = project_original(evaluate_distributed(broken, root, opts.evaluation), m).size();
        rep.solve_after_ms = ms_since(t);
    } catch (const BoundExceeded& e) {
        rep.solutions_before.reset();
        rep.solutions_after.reset();
        rep.note = e.what();
    }
    if (rep.solutions_before && rep.solutions_after && *rep.solutions_before > 0)
        rep.compression = 1.0 - static_cast<double>(*rep.solutions_after) / static_cast<double>(*rep.solutions_before);
    return rep;
}

}  // namespace mcsym
