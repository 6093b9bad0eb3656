#include "mcsym/sbc.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mcsym/error.hpp"
#include "mcsym/instance_file.hpp"

namespace mcsym {

AtomOrder::AtomOrder(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (!index_.emplace(atoms_[i], i).second) throw std::invalid_argument("atom order repeats " + qualified(atoms_[i]));
}

AtomOrder default_order(const MultiContextSystem& m) {
    std::vector<Atom> atoms;
    for (const auto& c : m.contexts()) atoms.insert(atoms.end(), c.atoms.begin(), c.atoms.end());
    return AtomOrder(std::move(atoms));
}

bool PermutationConstraint::satisfied_by(const std::function<bool(const Atom&)>& truth) const {
    if (chain.empty()) return true;
    auto leq = [&](const Atom& a) { return !truth(a) || truth(perm.image(a)); };
    auto geq = [&](const Atom& a) { return truth(a) || !truth(perm.image(a)); };
    // not_c holds ¬c_{i+1} while walking i = m .. 2.
    bool not_c = true;
    for (std::size_t i = chain.size(); i-- > 1;) not_c = !geq(chain[i - 1]) || (leq(chain[i]) && not_c);
    return leq(chain[0]) && not_c;
}

PermutationConstraint build_pc(const Permutation& p, const AtomOrder& order) {
    PermutationConstraint pc{p, {}};
    std::vector<Atom> support;
    for (const auto& a : p.support()) {
        if (!order.contains(a)) throw std::invalid_argument("support atom " + qualified(a) + " is not ordered");
        support.push_back(a);
    }
    std::sort(support.begin(), support.end(),
              [&](const Atom& x, const Atom& y) { return order.index(x) < order.index(y); });

    // Union-find over the atoms equated by the positions kept so far.
    std::map<Atom, Atom> parent;
    std::function<Atom(const Atom&)> find = [&](const Atom& a) -> Atom {
        auto it = parent.find(a);
        if (it == parent.end() || it->second == a) return a;
        Atom root = find(it->second);
        parent[a] = root;
        return root;
    };
    for (const auto& a : support) {
        Atom x = find(a), y = find(p.image(a));
        if (x == y) continue;
        pc.chain.push_back(a);
        parent[x] = y;
    }
    return pc;
}

std::size_t DistributedPc::seams() const {
    return static_cast<std::size_t>(std::count_if(links.begin(), links.end(), [](const ChainLink& l) { return l.crosses(); }));
}

DistributedPc distribute_pc(const Permutation& p, const AtomOrder& order, const MultiContextSystem& m,
                            const std::set<int>& targets) {
    std::set<int> allowed;
    if (targets.empty())
        for (int i = 1; i <= m.size(); ++i) allowed.insert(i);
    else
        allowed = import_closure(m, targets);
    for (const auto& a : p.support()) {
        if (!allowed.count(a.context))
            throw std::invalid_argument("support atom " + qualified(a) + " lies outside the target import closure");
        if (p.image(a).context != a.context)
            throw std::invalid_argument("permutation moves " + qualified(a) + " into another context");
        if (p.image(a).context < 1 || p.image(a).context > m.size() || !m.context(a.context).alphabet().count(a))
            throw std::invalid_argument("support atom " + qualified(a) + " is not in an original alphabet");
    }
    DistributedPc d;
    d.pc = build_pc(p, order);
    if (d.pc.trivial()) return d;
    const auto& chain = d.pc.chain;
    d.root = chain.front().context;
    d.terminal = chain.back().context;
    for (std::size_t i = 2; i <= chain.size(); ++i)
        d.links.push_back(ChainLink{i, chain[i - 2], chain[i - 1], chain[i - 2].context, chain[i - 1].context});
    return d;
}

bool SbcRewrite::empty() const {
    return std::all_of(contexts.begin(), contexts.end(), [](const auto& kv) { return kv.second.empty(); });
}

std::string chain_atom_name(const std::string& id, std::size_t position) {
    return "sbc_" + id + "_c" + std::to_string(position);
}

std::string import_atom_name(const std::string& id, int source, const std::string& name) {
    return "sbc_" + id + "_p" + std::to_string(source) + "_" + name;
}

SbcRewrite encode_asp(const Permutation& p, const AtomOrder& order, const MultiContextSystem& m,
                      const std::string& id, const std::set<int>& targets) {
    DistributedPc d = distribute_pc(p, order, m, targets);
    SbcRewrite out;
    if (d.pc.trivial()) return out;
    const auto& chain = d.pc.chain;
    const std::size_t len = chain.size();
    // c_i lives with a_{i-1}; c_{len+1} has no rule.
    auto c = [&](std::size_t i) { return Atom{chain[i - 2].context, chain_atom_name(id, i)}; };
    auto pi = [&](const Atom& a) { return p.image(a); };
    auto rule = [](AtomSet head, AtomSet pos, AtomSet neg) { return Rule{std::move(head), std::move(pos), std::move(neg)}; };

    auto& root = out.contexts[d.root];
    root.aux.insert(c(2));
    root.kb.push_back(rule({}, {chain[0]}, {pi(chain[0])}));
    root.kb.push_back(rule({}, {c(2)}, {}));
    out.contexts[d.terminal].aux.insert(c(len + 1));

    for (const auto& link : d.links) {
        const std::size_t i = link.position;
        auto& home = out.contexts[link.home];
        Atom ci = c(i), next = c(i + 1), cur = link.current, cur_pi = pi(link.current);
        home.aux.insert(ci);
        if (link.crosses()) {
            Atom cur_p{link.home, import_atom_name(id, link.source, cur.name)};
            Atom cur_pi_p{link.home, import_atom_name(id, link.source, cur_pi.name)};
            Atom next_p{link.home, import_atom_name(id, link.source, next.name)};
            home.aux.insert({cur_p, cur_pi_p, next_p});
            home.br.push_back(BridgeRule{cur_p, {cur}, {}});
            home.br.push_back(BridgeRule{cur_pi_p, {cur_pi}, {}});
            home.br.push_back(BridgeRule{next_p, {next}, {}});
            cur = cur_p;
            cur_pi = cur_pi_p;
            next = next_p;
        }
        home.kb.push_back(rule({ci}, {link.previous, cur}, {cur_pi}));
        home.kb.push_back(rule({ci}, {cur}, {pi(link.previous), cur_pi}));
        home.kb.push_back(rule({ci}, {link.previous, next}, {}));
        home.kb.push_back(rule({ci}, {next}, {pi(link.previous)}));
    }
    return out;
}

namespace {

void merge_into(SbcRewrite& into, const SbcRewrite& from) {
    for (const auto& [k, r] : from.contexts) {
        auto& dst = into.contexts[k];
        for (const auto& a : r.aux)
            if (!dst.aux.insert(a).second) throw InvariantError("auxiliary atom " + qualified(a) + " defined twice");
        dst.kb.insert(dst.kb.end(), r.kb.begin(), r.kb.end());
        dst.br.insert(dst.br.end(), r.br.begin(), r.br.end());
    }
}

}  // namespace

MultiContextSystem apply_rewrite(const MultiContextSystem& m, const SbcRewrite& rewrite) {
    std::vector<Context> contexts = m.contexts();
    for (const auto& [k, r] : rewrite.contexts) {
        Context& c = contexts.at(static_cast<std::size_t>(k - 1));
        auto existing = c.all_atoms();
        for (const auto& a : r.aux) {
            if (existing.count(a)) throw InvariantError("auxiliary atom " + qualified(a) + " collides in context " + std::to_string(k));
            c.aux.insert(a);
            c.kb.declare(a);
        }
        for (const auto& rule : r.kb) c.kb.add(rule);
        for (const auto& b : r.br)
            if (std::find(c.br.begin(), c.br.end(), b) == c.br.end()) c.br.push_back(b);
    }
    try {
        return MultiContextSystem(std::move(contexts));
    } catch (const std::invalid_argument& e) {
        throw InvariantError(std::string("rewrite produced an invalid system: ") + e.what());
    }
}

SbcRewrite encode_all(const MultiContextSystem& m, const PermSet& perms, const AtomOrder& order,
                      const std::set<int>& targets) {
    SbcRewrite all;
    std::size_t id = 0;
    for (const auto& p : perms) {
        if (p.is_identity()) continue;
        merge_into(all, encode_asp(p, order, m, std::to_string(id++), targets));
    }
    return all;
}

MultiContextSystem extend_mcs(const MultiContextSystem& m, const PermSet& perms, const AtomOrder& order,
                              const std::set<int>& targets) {
    return apply_rewrite(m, encode_all(m, perms, order, targets));
}

PartialBeliefState project_original(const PartialBeliefState& s, const MultiContextSystem& original) {
    PartialBeliefState out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i]) continue;
        AtomSet kept;
        const auto alphabet = original.context(static_cast<int>(i) + 1).alphabet();
        for (const auto& a : *s[i])
            if (alphabet.count(a)) kept.insert(a);
        out[i] = std::move(kept);
    }
    return out;
}

StateSet project_original(const StateSet& states, const MultiContextSystem& original) {
    StateSet out;
    for (const auto& s : states) out.insert(project_original(s, original));
    return out;
}

namespace {

bool holds(const PartialBeliefState& s, const Atom& a) {
    std::size_t i = static_cast<std::size_t>(a.context - 1);
    return i < s.size() && s[i] && s[i]->count(a);
}

}  // namespace

std::vector<bool> characteristic_vector(const PartialBeliefState& s, const AtomOrder& order) {
    std::vector<bool> v;
    v.reserve(order.size());
    for (const auto& a : order.atoms()) v.push_back(holds(s, a));
    return v;
}

bool lex_leq_image(const PartialBeliefState& s, const Permutation& p, const AtomOrder& order) {
    std::vector<bool> image;
    image.reserve(order.size());
    for (const auto& a : order.atoms()) image.push_back(holds(s, p.image(a)));
    return characteristic_vector(s, order) <= image;
}

StateSet lex_leader_filter(const StateSet& states, const PermSet& perms, const AtomOrder& order, std::size_t cap) {
    PermSet group = group_closure(perms, cap);
    StateSet out;
    for (const auto& s : states) {
        auto vec = characteristic_vector(s, order);
        bool leader = std::all_of(group.begin(), group.end(), [&](const Permutation& g) {
            return vec <= characteristic_vector(mcsym::apply(g, s), order);
        });
        if (leader) out.insert(s);
    }
    return out;
}

PermSet select_breaking_set(const PermSet& gens, std::size_t budget, std::size_t cap) {
    PermSet nontrivial;
    for (const auto& g : gens)
        if (!g.is_identity()) nontrivial.insert(g);
    PermSet reduced;
    try {
        reduced = reduce_irredundant(nontrivial, cap);
    } catch (const BoundExceeded&) {
        reduced = nontrivial;
    }
    std::vector<Permutation> ordered(reduced.begin(), reduced.end());
    std::sort(ordered.begin(), ordered.end(), smaller_support);
    if (ordered.size() > budget) ordered.resize(budget);
    return {ordered.begin(), ordered.end()};
}

std::string emit_sbc(const SbcRewrite& rewrite) {
    std::ostringstream out;
    for (const auto& [k, r] : rewrite.contexts) {
        if (r.empty()) continue;
        out << "context " << k << "\n";
        if (!r.aux.empty()) {
            out << "  aux";
            for (const auto& a : r.aux) out << ' ' << a.name;
            out << "\n";
        }
        out << "  kb\n";
        for (const auto& rule : r.kb) out << "    " << emit_rule(rule) << "\n";
        out << "  br\n";
        for (const auto& b : r.br) out << "    " << emit_bridge_rule(b) << "\n";
    }
    return out.str();
}

}  // namespace mcsym
