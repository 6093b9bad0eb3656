// Distributed evaluation over the condensation of the import graph.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <mutex>

#include "mcsym/error.hpp"
#include "mcsym/mcs.hpp"

namespace mcsym {

namespace {

struct Condensation {
    std::vector<std::vector<int>> components;  // context ids per component
    std::map<int, int> component_of;
    std::vector<std::set<int>> children;       // component ids imported from
};

Condensation condense(const MultiContextSystem& m, const std::set<int>& nodes) {
    // Tarjan's algorithm, recursive; import graphs are small.
    Condensation out;
    std::map<int, int> index, low;
    std::vector<int> stack;
    std::set<int> on_stack;
    int counter = 0;
    std::function<void(int)> visit = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        for (int w : m.context(v).imports()) {
            if (!nodes.count(w)) continue;
            if (!index.count(w)) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack.count(w)) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> comp;
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            int id = static_cast<int>(out.components.size());
            for (int c : comp) out.component_of[c] = id;
            out.components.push_back(std::move(comp));
        }
    };
    for (int v : nodes)
        if (!index.count(v)) visit(v);
    out.children.resize(out.components.size());
    for (std::size_t c = 0; c < out.components.size(); ++c)
        for (int v : out.components[c])
            for (int w : m.context(v).imports())
                if (nodes.count(w) && out.component_of[w] != static_cast<int>(c))
                    out.children[c].insert(out.component_of[w]);
    return out;
}

std::optional<PartialBeliefState> merge(const PartialBeliefState& a, const PartialBeliefState& b) {
    PartialBeliefState out = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!b[i]) continue;
        if (out[i] && *out[i] != *b[i]) return std::nullopt;
        out[i] = b[i];
    }
    return out;
}

StateSet combine(const StateSet& left, const StateSet& right) {
    StateSet out;
    for (const auto& a : left)
        for (const auto& b : right)
            if (auto s = merge(a, b)) out.insert(std::move(*s));
    return out;
}

class ComponentSolver {
public:
    ComponentSolver(const MultiContextSystem& m, std::vector<int> members, const EvaluationOptions& opts)
        : m_(m), members_(std::move(members)), opts_(opts) {
        std::set<int> inside(members_.begin(), members_.end());
        for (int i : members_)
            for (const auto& r : m_.context(i).br)
                for (const auto& a : r.body_atoms())
                    if (inside.count(a.context)) interface_.insert(a);
        if (interface_.size() > opts_.interface_bound || interface_.size() > 62)
            throw BoundExceeded("import cycle interface of " + std::to_string(interface_.size()) +
                                " atoms exceeds bound " + std::to_string(opts_.interface_bound));
    }

    StateSet solve(const PartialBeliefState& below) {
        StateSet out;
        std::vector<Atom> iface(interface_.begin(), interface_.end());
        const std::uint64_t count = std::uint64_t{1} << iface.size();
        for (std::uint64_t mask = 0; mask < count; ++mask) {
            AtomSet guess;
            for (std::size_t b = 0; b < iface.size(); ++b)
                if (mask >> b & 1) guess.insert(iface[b]);
            auto truth = [&](const Atom& a) {
                if (interface_.count(a)) return guess.count(a) != 0;
                const auto& comp = below[static_cast<std::size_t>(a.context - 1)];
                if (!comp) throw InvariantError("evaluation reached an unsolved context");
                return comp->count(a) != 0;
            };
            std::vector<std::vector<AtomSet>> local;
            bool dead = false;
            for (int i : members_) {
                AtomSet heads;
                for (const auto& r : m_.context(i).br) {
                    bool fires = std::all_of(r.pos.begin(), r.pos.end(), truth) &&
                                 std::none_of(r.neg.begin(), r.neg.end(), truth);
                    if (fires) heads.insert(r.head);
                }
                std::vector<AtomSet> agreeing;
                for (const auto& x : local_answer_sets(i, heads)) {
                    bool ok = true;
                    for (const auto& a : interface_)
                        if (a.context == i && (x.count(a) != 0) != (guess.count(a) != 0)) ok = false;
                    if (ok) agreeing.push_back(x);
                }
                if (agreeing.empty()) {
                    dead = true;
                    break;
                }
                local.push_back(std::move(agreeing));
            }
            if (dead) continue;
            // Cartesian product of the local answer sets.
            std::vector<std::size_t> pick(local.size(), 0);
            while (true) {
                PartialBeliefState s = below;
                for (std::size_t j = 0; j < members_.size(); ++j)
                    s[static_cast<std::size_t>(members_[j] - 1)] = local[j][pick[j]];
                out.insert(std::move(s));
                std::size_t j = 0;
                while (j < pick.size() && ++pick[j] == local[j].size()) pick[j++] = 0;
                if (j == pick.size()) break;
            }
        }
        return out;
    }

private:
    const std::set<AtomSet>& local_answer_sets(int i, const AtomSet& heads) {
        auto key = std::make_pair(i, heads);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const Context& c = m_.context(i);
        auto sets = answer_sets_split(local_program(c, heads), c.aux, opts_.local_bound);
        return cache_.emplace(std::move(key), std::move(sets)).first->second;
    }

    const MultiContextSystem& m_;
    std::vector<int> members_;
    const EvaluationOptions& opts_;
    AtomSet interface_;
    std::map<std::pair<int, AtomSet>, std::set<AtomSet>> cache_;
};

}  // namespace

StateSet evaluate_distributed(const MultiContextSystem& m, const std::set<int>& roots, const EvaluationOptions& opts) {
    auto nodes = import_closure(m, roots);
    Condensation cond = condense(m, nodes);
    const auto policy = opts.parallel ? std::launch::async : std::launch::deferred;

    // Tarjan emits components in reverse topological order, so children
    // always precede their parents.
    std::vector<std::shared_future<StateSet>> results(cond.components.size());
    for (std::size_t c = 0; c < cond.components.size(); ++c) {
        std::vector<std::shared_future<StateSet>> inbox;
        for (int child : cond.children[c]) inbox.push_back(results[static_cast<std::size_t>(child)]);
        results[c] = std::async(policy, [&m, &opts, members = cond.components[c], inbox = std::move(inbox)] {
                         StateSet below{PartialBeliefState(static_cast<std::size_t>(m.size()))};
                         for (const auto& msg : inbox) below = combine(below, msg.get());
                         ComponentSolver solver(m, members, opts);
                         StateSet out;
                         for (const auto& s : below) {
                             auto part = solver.solve(s);
                             out.insert(part.begin(), part.end());
                         }
                         return out;
                     }).share();
    }

    StateSet total{PartialBeliefState(static_cast<std::size_t>(m.size()))};
    std::set<int> root_components;
    for (int r : roots) root_components.insert(cond.component_of.at(r));
    for (int rc : root_components) total = combine(total, results[static_cast<std::size_t>(rc)].get());
    // Drain every task so no future outlives the references it captured.
    for (auto& f : results) f.wait();
    return total;
}

StateSet evaluate_distributed(const MultiContextSystem& m, int k, const EvaluationOptions& opts) {
    return evaluate_distributed(m, std::set<int>{k}, opts);
}

StateSet evaluate_equilibria(const MultiContextSystem& m, const EvaluationOptions& opts) {
    std::set<int> all;
    for (int i = 1; i <= m.size(); ++i) all.insert(i);
    return evaluate_distributed(m, all, opts);
}

}  // namespace mcsym
