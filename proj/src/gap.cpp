#include <map>

#include "mcsym/detect.hpp"
#include "mcsym/error.hpp"

namespace mcsym {

GapGraph build_gap(const MultiContextSystem& m, int k, GapMode mode) {
    const Context& c = m.context(k);
    const int n = m.size();
    GapGraph g;
    g.context = k;
    g.domain = partial_symmetry_domain(m, {k});

    AtomSet exported;
    if (mode == GapMode::local_only)
        for (const auto& other : m.contexts()) {
            if (other.id == k) continue;
            for (const auto& r : other.br)
                for (const auto& a : r.body_atoms())
                    if (a.context == k) exported.insert(a);
        }

    AtomSet atoms = c.occurring();
    for (const auto& a : c.bridge_atoms()) atoms.insert(a);

    int fresh = n + 4;
    for (const auto& a : atoms) {
        int colour = a.context;
        if (mode == GapMode::local_only && (a.context != k || exported.count(a))) colour = fresh++;
        int pos = g.graph.add_vertex(colour);
        g.atom_of_vertex.push_back(GapVertex{a, true});
        int neg = g.graph.add_vertex(n + 1);
        g.atom_of_vertex.push_back(GapVertex{a, false});
        g.graph.add_edge(pos, neg);
        g.positive[a] = pos;
        g.negative[a] = neg;
    }

    auto body = [&](int colour, const AtomSet& pos, const AtomSet& neg, const AtomSet& heads) {
        int b = g.graph.add_vertex(colour);
        g.atom_of_vertex.emplace_back();
        for (const auto& a : pos) g.graph.add_edge(g.positive.at(a), b);
        for (const auto& a : neg) g.graph.add_edge(g.negative.at(a), b);
        for (const auto& a : heads) g.graph.add_edge(b, g.positive.at(a));
    };
    for (const auto& r : c.kb.rules()) body(n + 2, r.pos, r.neg, r.head);
    for (const auto& r : c.br) body(n + 3, r.pos, r.neg, AtomSet{r.head});
    return g;
}

Permutation graph_perm_to_partial_symmetry(const GapGraph& g, const VertexPermutation& p) {
    if (!is_automorphism(g.graph, p)) throw InvariantError("vertex permutation is not an automorphism");
    std::map<Atom, Atom> mapping;
    for (const auto& a : g.domain) mapping[a] = a;
    for (const auto& [a, v] : g.positive) {
        const auto& target = g.atom_of_vertex[static_cast<std::size_t>(p[static_cast<std::size_t>(v)])];
        if (!target || !target->positive) throw InvariantError("positive literal vertex of " + qualified(a) + " leaves its class");
        if (p[static_cast<std::size_t>(g.negative.at(a))] != g.negative.at(target->atom))
            throw InvariantError("literal vertices of " + qualified(a) + " are mated inconsistently");
        mapping[a] = target->atom;
    }
    return Permutation::from_map(std::move(mapping));
}

SymmetrySet lsd(const MultiContextSystem& m, int k, GapMode mode, std::size_t cap) {
    GapGraph g = build_gap(m, k, mode);
    SymmetrySet out;
    for (const auto& p : automorphism_generators(g.graph)) {
        auto pi = graph_perm_to_partial_symmetry(g, p);
        if (!pi.is_identity()) out.generators.insert(std::move(pi));
    }
    try {
        out.perms = group_closure(out.generators, cap, g.domain);
    } catch (const BoundExceeded&) {
        out.perms = out.generators;
        out.perms.insert(Permutation::identity(g.domain));
        out.complete = false;
    }
    return out;
}

}  // namespace mcsym
