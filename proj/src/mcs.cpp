#include "mcsym/mcs.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>

#include "mcsym/error.hpp"

namespace mcsym {

AtomSet BridgeRule::body_atoms() const {
    AtomSet out = pos;
    out.insert(neg.begin(), neg.end());
    return out;
}

AtomSet BridgeRule::atoms() const {
    AtomSet out = body_atoms();
    out.insert(head);
    return out;
}

BridgeRule apply(const Permutation& p, const BridgeRule& r) {
    return BridgeRule{p.image(r.head), mcsym::apply(p, r.pos), mcsym::apply(p, r.neg)};
}

std::set<BridgeRule> apply(const Permutation& p, const std::set<BridgeRule>& rules) {
    std::set<BridgeRule> out;
    for (const auto& r : rules) out.insert(mcsym::apply(p, r));
    return out;
}

AtomSet Context::all_atoms() const {
    AtomSet out(atoms.begin(), atoms.end());
    out.insert(aux.begin(), aux.end());
    return out;
}

AtomSet Context::bridge_atoms() const {
    AtomSet out;
    for (const auto& r : br) {
        auto a = r.atoms();
        out.insert(a.begin(), a.end());
    }
    return out;
}

AtomSet Context::occurring() const {
    AtomSet out;
    for (const auto& a : kb.occurring_atoms())
        if (a.context == id) out.insert(a);
    for (const auto& a : bridge_atoms())
        if (a.context == id) out.insert(a);
    return out;
}

AtomSet Context::derivable() const {
    AtomSet out = kb.occurring_atoms();
    for (const auto& r : br) out.insert(r.head);
    return out;
}

std::set<int> Context::imports() const {
    std::set<int> out;
    for (const auto& r : br)
        for (const auto& a : r.body_atoms()) out.insert(a.context);
    return out;
}

MultiContextSystem::MultiContextSystem(std::vector<Context> contexts) : contexts_(std::move(contexts)) {
    const int n = size();
    for (int k = 1; k <= n; ++k) {
        const Context& c = contexts_[static_cast<std::size_t>(k - 1)];
        if (c.id != k) throw std::invalid_argument("context ids must be 1..n in order");
        AtomSet own = c.all_atoms();
        if (own.size() != c.atoms.size() + c.aux.size())
            throw std::invalid_argument("context " + std::to_string(k) + ": auxiliary atom duplicates an alphabet atom");
        for (const auto& a : own)
            if (a.context != k) throw std::invalid_argument("atom " + qualified(a) + " declared in context " + std::to_string(k));
        for (const auto& a : c.kb.occurring_atoms())
            if (!own.count(a)) throw std::invalid_argument("kb atom " + qualified(a) + " not in alphabet of context " + std::to_string(k));
        for (const auto& r : c.br) {
            if (!own.count(r.head)) throw std::invalid_argument("bridge head " + qualified(r.head) + " not in alphabet of context " + std::to_string(k));
            for (const auto& b : r.body_atoms()) {
                if (b.context < 1 || b.context > n)
                    throw std::invalid_argument("bridge literal references unknown context " + std::to_string(b.context));
                if (!contexts_[static_cast<std::size_t>(b.context - 1)].all_atoms().count(b))
                    throw std::invalid_argument("bridge literal atom " + qualified(b) + " not in its context's alphabet");
            }
        }
    }
}

AtomSet MultiContextSystem::alphabet() const {
    AtomSet out;
    for (const auto& c : contexts_) out.insert(c.atoms.begin(), c.atoms.end());
    return out;
}

AtomSet MultiContextSystem::all_atoms() const {
    AtomSet out;
    for (const auto& c : contexts_) {
        auto a = c.all_atoms();
        out.insert(a.begin(), a.end());
    }
    return out;
}

PartialBeliefState apply(const Permutation& p, const PartialBeliefState& s) {
    PartialBeliefState out;
    out.reserve(s.size());
    for (const auto& c : s) out.push_back(c ? std::optional<AtomSet>(mcsym::apply(p, *c)) : std::nullopt);
    return out;
}

std::string format_state(const PartialBeliefState& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        if (!s[i]) {
            out += "eps";
            continue;
        }
        out += '{';
        bool first = true;
        for (const auto& a : *s[i]) {
            if (!first) out += ',';
            out += a.name;
            first = false;
        }
        out += '}';
    }
    return out + ")";
}

std::set<int> import_neighbourhood(const MultiContextSystem& m, int k) { return m.context(k).imports(); }

std::set<int> import_closure(const MultiContextSystem& m, const std::set<int>& roots) {
    std::set<int> seen;
    std::deque<int> work(roots.begin(), roots.end());
    while (!work.empty()) {
        int k = work.front();
        work.pop_front();
        if (!seen.insert(k).second) continue;
        for (int j : import_neighbourhood(m, k))
            if (!seen.count(j)) work.push_back(j);
    }
    return seen;
}

std::set<int> import_closure(const MultiContextSystem& m, int k) { return import_closure(m, std::set<int>{k}); }

bool applicable(const BridgeRule& r, const PartialBeliefState& s) {
    auto component = [&](const Atom& a) -> const AtomSet& {
        auto idx = static_cast<std::size_t>(a.context - 1);
        if (idx >= s.size() || !s[idx])
            throw InsufficientBeliefState("insufficient belief state: context " + std::to_string(a.context) + " is unknown");
        return *s[idx];
    };
    bool ok = true;
    for (const auto& a : r.pos) ok = component(a).count(a) && ok;
    for (const auto& a : r.neg) ok = !component(a).count(a) && ok;
    return ok;
}

AtomSet applicable_heads(const MultiContextSystem& m, int k, const PartialBeliefState& s) {
    AtomSet out;
    for (const auto& r : m.context(k).br)
        if (applicable(r, s)) out.insert(r.head);
    return out;
}

Program local_program(const Context& c, const AtomSet& heads) {
    Program p = c.kb;
    for (const auto& a : c.all_atoms()) p.declare(a);
    for (const auto& h : heads) p.add(Rule{{h}, {}, {}});
    return p;
}

namespace {

bool component_accepted(const MultiContextSystem& m, int i, const PartialBeliefState& s) {
    const auto& si = s[static_cast<std::size_t>(i - 1)];
    if (!si) return false;
    const Context& c = m.context(i);
    auto own = c.all_atoms();
    if (!std::includes(own.begin(), own.end(), si->begin(), si->end())) return false;
    return is_answer_set(local_program(c, applicable_heads(m, i, s)), *si);
}

}  // namespace

bool is_equilibrium(const MultiContextSystem& m, const PartialBeliefState& s) {
    if (static_cast<int>(s.size()) != m.size()) return false;
    for (int i = 1; i <= m.size(); ++i)
        if (!component_accepted(m, i, s)) return false;
    return true;
}

bool is_partial_equilibrium(const MultiContextSystem& m, int k, const PartialBeliefState& s) {
    if (static_cast<int>(s.size()) != m.size()) return false;
    auto ic = import_closure(m, k);
    for (int i = 1; i <= m.size(); ++i) {
        if (ic.count(i)) {
            if (!component_accepted(m, i, s)) return false;
        } else if (s[static_cast<std::size_t>(i - 1)]) {
            return false;
        }
    }
    return true;
}

namespace {

// Auxiliary part of a context: rules mentioning auxiliary atoms.
Program aux_rules(const Context& c, const AtomSet& heads) {
    Program top;
    const Program local = local_program(c, heads);
    for (const auto& r : local.rules()) {
        auto atoms = r.atoms();
        if (std::any_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return c.aux.count(a) != 0; })) top.add(r);
    }
    return top;
}

StateSet enumerate_over(const MultiContextSystem& m, const std::set<int>& ic,
                        const std::function<bool(const PartialBeliefState&)>& accept, std::size_t bound) {
    std::vector<Atom> guess;
    for (int i : ic)
        for (const auto& a : m.context(i).derivable())
            if (!m.context(i).aux.count(a)) guess.push_back(a);
    if (guess.size() > bound || guess.size() > 62)
        throw BoundExceeded("oracle would guess " + std::to_string(guess.size()) + " atoms, bound is " +
                            std::to_string(bound));

    bool has_aux = std::any_of(ic.begin(), ic.end(), [&](int i) { return !m.context(i).aux.empty(); });
    std::size_t aux_total = 0;
    for (int i : ic) aux_total += m.context(i).aux.size();

    StateSet out;
    const std::uint64_t count = std::uint64_t{1} << guess.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        PartialBeliefState s(static_cast<std::size_t>(m.size()));
        for (int i : ic) s[static_cast<std::size_t>(i - 1)] = AtomSet{};
        for (std::size_t b = 0; b < guess.size(); ++b)
            if (mask >> b & 1) s[static_cast<std::size_t>(guess[b].context - 1)]->insert(guess[b]);

        if (has_aux) {
            // Auxiliary atoms are functionally determined by the original
            // ones; iterate the per-context stratified extension to a fixpoint.
            bool stable = false;
            for (std::size_t round = 0; round <= aux_total + 1 && !stable; ++round) {
                PartialBeliefState next = s;
                for (int i : ic) {
                    const Context& c = m.context(i);
                    if (c.aux.empty()) continue;
                    auto heads = applicable_heads(m, i, s);
                    AtomSet orig;
                    for (const auto& a : *s[static_cast<std::size_t>(i - 1)])
                        if (!c.aux.count(a)) orig.insert(a);
                    try {
                        next[static_cast<std::size_t>(i - 1)] = extend_stratified(orig, aux_rules(c, heads), c.aux).atoms;
                    } catch (const InvariantError&) {
                        next[static_cast<std::size_t>(i - 1)] = orig;
                    }
                }
                stable = next == s;
                s = std::move(next);
            }
            if (!stable) continue;
        }
        if (accept(s)) out.insert(std::move(s));
    }
    return out;
}

}  // namespace

StateSet enumerate_partial_equilibria(const MultiContextSystem& m, int k, std::size_t bound) {
    auto ic = import_closure(m, k);
    return enumerate_over(m, ic, [&](const PartialBeliefState& s) { return is_partial_equilibrium(m, k, s); }, bound);
}

StateSet enumerate_equilibria(const MultiContextSystem& m, std::size_t bound) {
    std::set<int> all;
    for (int i = 1; i <= m.size(); ++i) all.insert(i);
    return enumerate_over(m, all, [&](const PartialBeliefState& s) { return is_equilibrium(m, s); }, bound);
}

namespace {

bool context_invariant(const Context& c, const Permutation& p) {
    auto own = c.all_atoms();
    if (mcsym::apply(p, own) != own) return false;
    auto kb = c.kb.rule_set();
    if (mcsym::apply(p, kb) != kb) return false;
    auto br = c.br_set();
    return mcsym::apply(p, br) == br;
}

}  // namespace

bool is_symmetry(const MultiContextSystem& m, const Permutation& p) {
    auto all = m.all_atoms();
    for (const auto& kv : p.mapping())
        if (!all.count(kv.first)) return false;
    return std::all_of(m.contexts().begin(), m.contexts().end(), [&](const Context& c) { return context_invariant(c, p); });
}

bool is_local_symmetry(const MultiContextSystem& m, int k, const Permutation& p) {
    if (!is_symmetry(m, p)) return false;
    auto support = p.support();
    return std::all_of(support.begin(), support.end(), [&](const Atom& a) { return a.context == k; });
}

AtomSet partial_symmetry_domain(const MultiContextSystem& m, const std::set<int>& contexts) {
    AtomSet out;
    for (int i : contexts) {
        const Context& c = m.context(i);
        auto own = c.all_atoms();
        auto br = c.bridge_atoms();
        out.insert(own.begin(), own.end());
        out.insert(br.begin(), br.end());
    }
    return out;
}

bool is_partial_symmetry(const MultiContextSystem& m, const std::set<int>& contexts, const Permutation& p) {
    auto all = m.all_atoms();
    for (const auto& kv : p.mapping())
        if (!all.count(kv.first)) return false;
    for (int i : contexts) {
        const Context& c = m.context(i);
        for (const auto& a : c.all_atoms())
            if (!p.in_domain(a)) return false;
        for (const auto& a : c.bridge_atoms())
            if (!p.in_domain(a)) return false;
        if (!context_invariant(c, p)) return false;
    }
    return true;
}

PermSet brute_force_partial_symmetries(const MultiContextSystem& m, const std::set<int>& contexts,
                                       std::size_t class_bound) {
    AtomSet domain = partial_symmetry_domain(m, contexts);
    std::map<int, AtomSet> occurring;
    for (int i : contexts) occurring[i] = m.context(i).occurring();

    std::map<int, std::vector<Atom>> classes;
    for (const auto& a : domain) {
        bool movable = contexts.count(a.context) ? occurring[a.context].count(a) != 0 : true;
        if (movable) classes[a.context].push_back(a);
    }
    std::vector<std::pair<int, std::vector<Atom>>> order(classes.begin(), classes.end());
    for (const auto& [ctx, atoms] : order)
        if (atoms.size() > class_bound)
            throw BoundExceeded("context " + std::to_string(ctx) + " has " + std::to_string(atoms.size()) +
                                " movable atoms, bound is " + std::to_string(class_bound));

    // A context can be checked once every class its atoms touch is assigned.
    std::map<int, std::size_t> class_pos;
    for (std::size_t t = 0; t < order.size(); ++t) class_pos[order[t].first] = t;
    std::vector<std::vector<int>> ready_after(order.size() + 1);
    for (int i : contexts) {
        std::size_t last = 0;
        bool any = false;
        AtomSet touched = m.context(i).all_atoms();
        auto br = m.context(i).bridge_atoms();
        touched.insert(br.begin(), br.end());
        for (const auto& a : touched) {
            auto it = class_pos.find(a.context);
            if (it == class_pos.end()) continue;
            last = std::max(last, it->second + 1);
            any = true;
        }
        ready_after[any ? last : 0].push_back(i);
    }

    std::map<Atom, Atom> assignment;
    for (const auto& a : domain) assignment.emplace(a, a);

    auto check_ready = [&](std::size_t level) {
        if (ready_after[level].empty()) return true;
        Permutation partial = Permutation::from_map(assignment);
        return std::all_of(ready_after[level].begin(), ready_after[level].end(),
                           [&](int i) { return context_invariant(m.context(i), partial); });
    };

    PermSet out;
    if (!check_ready(0)) return out;
    std::function<void(std::size_t)> recurse = [&](std::size_t t) {
        if (t == order.size()) {
            Permutation p = Permutation::from_map(assignment);
            if (!is_partial_symmetry(m, contexts, p)) throw InvariantError("brute force produced a non-symmetry");
            out.insert(std::move(p));
            return;
        }
        const auto& atoms = order[t].second;
        std::vector<std::size_t> images(atoms.size());
        for (std::size_t i = 0; i < images.size(); ++i) images[i] = i;
        do {
            for (std::size_t i = 0; i < atoms.size(); ++i) assignment[atoms[i]] = atoms[images[i]];
            if (check_ready(t + 1)) recurse(t + 1);
        } while (std::next_permutation(images.begin(), images.end()));
        for (const auto& a : atoms) assignment[a] = a;
    };
    recurse(0);
    return out;
}

StateSet orbit_of_states(const PermSet& perms, const PartialBeliefState& s) {
    StateSet seen{s};
    std::deque<PartialBeliefState> work{s};
    while (!work.empty()) {
        auto cur = std::move(work.front());
        work.pop_front();
        for (const auto& p : perms) {
            auto img = mcsym::apply(p, cur);
            if (seen.insert(img).second) work.push_back(std::move(img));
        }
    }
    return seen;
}

}  // namespace mcsym
