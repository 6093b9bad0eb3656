#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>

#include "mcsym/instance_file.hpp"

namespace oracle {

const char* const example1_text = R"(mcs 3
context 1
  atoms a b c
  kb
    c :- a, b, not c.
  br
    a :- not (2:d).
    b :- not (2:e).
context 2
  atoms d e f g
  kb
    f :- d, e, not g.
    g :- d, e, not f.
  br
    d :- not (1:a).
    e :- not (1:b).
context 3
  atoms h
  kb
  br
    h :- (1:a).
)";

MultiContextSystem example1() { return parse_mcs(example1_text); }

Permutation cycles(const MultiContextSystem& m, const std::set<int>& contexts, const std::string& text) {
    auto domain = partial_symmetry_domain(m, contexts);
    return parse_cycles(text, domain).extended(domain);
}

std::vector<VertexPermutation> all_automorphisms(const ColouredDigraph& g) {
    const int n = g.vertex_count();
    std::vector<VertexPermutation> out;
    VertexPermutation p(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::function<void(int)> go = [&](int v) {
        if (v == n) {
            out.push_back(p);
            return;
        }
        for (int w = 0; w < n; ++w) {
            if (used[static_cast<std::size_t>(w)] || g.colour(w) != g.colour(v)) continue;
            if (g.out(v).size() != g.out(w).size() || g.in(v).size() != g.in(w).size()) continue;
            // Edges among assigned vertices must be preserved both ways.
            bool ok = g.has_edge(v, v) == g.has_edge(w, w);
            for (int u = 0; ok && u < v; ++u) {
                int x = p[static_cast<std::size_t>(u)];
                ok = g.has_edge(u, v) == g.has_edge(x, w) && g.has_edge(v, u) == g.has_edge(w, x);
            }
            if (!ok) continue;
            p[static_cast<std::size_t>(v)] = w;
            used[static_cast<std::size_t>(w)] = true;
            go(v + 1);
            used[static_cast<std::size_t>(w)] = false;
        }
        p[static_cast<std::size_t>(v)] = -1;
    };
    go(0);
    return out;
}

VertexPermutation then(const VertexPermutation& p, const VertexPermutation& q) {
    VertexPermutation r(p.size());
    for (std::size_t v = 0; v < p.size(); ++v) r[v] = q[static_cast<std::size_t>(p[v])];
    return r;
}

std::set<VertexPermutation> vertex_closure(const std::vector<VertexPermutation>& gens, int n) {
    VertexPermutation id(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) id[static_cast<std::size_t>(v)] = v;
    std::set<VertexPermutation> seen{id};
    std::deque<VertexPermutation> work{id};
    while (!work.empty()) {
        auto cur = work.front();
        work.pop_front();
        for (const auto& g : gens) {
            auto next = then(cur, g);
            if (seen.insert(next).second) work.push_back(next);
        }
    }
    return seen;
}

namespace {

bool subset(const AtomSet& a, const AtomSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

bool disjoint(const AtomSet& a, const AtomSet& b) {
    for (const auto& x : a)
        if (b.count(x)) return false;
    return true;
}

// Y satisfies the reduct of P w.r.t. X.
bool models_reduct(const Program& p, const AtomSet& x, const AtomSet& y) {
    for (const auto& r : p.rules()) {
        if (!disjoint(r.neg, x)) continue;  // removed by the reduct
        if (subset(r.pos, y) && disjoint(r.head, y)) return false;
    }
    return true;
}

std::vector<AtomSet> subsets(const std::vector<Atom>& atoms) {
    std::vector<AtomSet> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
        AtomSet s;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (mask >> i & 1) s.insert(atoms[i]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

std::set<AtomSet> answer_sets(const Program& p) {
    AtomSet occ;
    for (const auto& r : p.rules()) {
        occ.insert(r.head.begin(), r.head.end());
        occ.insert(r.pos.begin(), r.pos.end());
        occ.insert(r.neg.begin(), r.neg.end());
    }
    std::vector<Atom> atoms(occ.begin(), occ.end());
    auto all = subsets(atoms);
    std::set<AtomSet> out;
    for (const auto& x : all) {
        if (!models_reduct(p, x, x)) continue;
        bool minimal = true;
        for (const auto& y : all)
            if (y.size() < x.size() && subset(y, x) && models_reduct(p, x, y)) {
                minimal = false;
                break;
            }
        if (minimal) out.insert(x);
    }
    return out;
}

bool lex_leq_direct(const PartialBeliefState& s, const Permutation& p, const AtomOrder& order) {
    auto truth = [&](const Atom& a) {
        const auto& c = s[static_cast<std::size_t>(a.context - 1)];
        return c && c->count(a) > 0;
    };
    for (const auto& a : order.atoms()) {
        bool x = truth(a), y = truth(p.image(a));
        if (x != y) return !x;
    }
    return true;
}

bool within_log_bound(std::size_t generators, std::size_t group_size) {
    return static_cast<double>(generators) <= std::log2(static_cast<double>(group_size)) + 1e-9;
}

namespace {

const char* const names[] = {"a", "b", "c", "d", "e", "f", "g", "h"};

AtomSet pick(SplitMix64& rng, const std::vector<Atom>& from, int count) {
    AtomSet out;
    for (int i = 0; i < count && !from.empty(); ++i) out.insert(from[rng.below(from.size())]);
    return out;
}

Rule random_rule(SplitMix64& rng, const std::vector<Atom>& own) {
    Rule r;
    int heads = rng.chance(1, 8) ? 0 : rng.chance(1, 6) ? 2 : 1;
    r.head = pick(rng, own, heads);
    int body = rng.range(0, 2);
    for (const auto& a : pick(rng, own, body)) {
        if (rng.chance(1, 2) && !r.head.count(a)) r.pos.insert(a);
        else r.neg.insert(a);
    }
    if (r.head.empty() && r.pos.empty() && r.neg.empty()) r.neg.insert(own.front());
    return r;
}

}  // namespace

MultiContextSystem random_mcs(SplitMix64& rng, const RandomMcs& params) {
    const int n = rng.range(1, params.max_contexts);
    std::vector<Context> cs(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        auto& c = cs[static_cast<std::size_t>(k - 1)];
        c.id = k;
        int atoms = rng.range(1, params.max_atoms);
        for (int j = 0; j < atoms; ++j) c.atoms.push_back(Atom{k, names[j]});
    }
    for (int k = 1; k <= n; ++k) {
        auto& c = cs[static_cast<std::size_t>(k - 1)];
        c.kb = Program(c.alphabet());
        int rules = rng.range(0, params.max_kb_rules);
        for (int r = 0; r < rules; ++r) c.kb.add(random_rule(rng, c.atoms));
        if (c.atoms.size() >= 2 && rng.below(100) < static_cast<std::uint64_t>(params.even_loop_percent)) {
            std::size_t i = rng.below(c.atoms.size()), j = rng.below(c.atoms.size() - 1);
            if (j >= i) ++j;
            c.kb.add(Rule{{c.atoms[i]}, {}, {c.atoms[j]}});
            c.kb.add(Rule{{c.atoms[j]}, {}, {c.atoms[i]}});
        }
        std::vector<int> nb;
        for (int j = 1; j <= n; ++j)
            if (j != k && (params.allow_cycles || j > k) && rng.chance(1, 2)) nb.push_back(j);
        if (nb.empty()) continue;
        int count = std::max<int>(static_cast<int>(nb.size()), rng.range(1, params.max_bridge_rules));
        for (int r = 0; r < count; ++r) {
            BridgeRule b;
            b.head = c.atoms[rng.below(c.atoms.size())];
            int j = nb[static_cast<std::size_t>(r) % nb.size()];
            int lits = rng.range(1, 2);
            for (int l = 0; l < lits; ++l) {
                int src = l == 0 ? j : nb[rng.below(nb.size())];
                const auto& from = cs[static_cast<std::size_t>(src - 1)].atoms;
                Atom a = from[rng.below(from.size())];
                if (b.pos.count(a) || b.neg.count(a)) continue;
                (rng.chance(1, 2) ? b.pos : b.neg).insert(a);
            }
            if (std::find(c.br.begin(), c.br.end(), b) == c.br.end()) c.br.push_back(b);
        }
    }
    if (params.symmetric_bias && rng.chance(2, 3)) {
        std::map<Atom, Atom> sigma;
        for (const auto& c : cs) {
            for (const auto& a : c.atoms) sigma[a] = a;
            if (c.atoms.size() >= 2 && rng.chance(2, 3)) {
                std::size_t i = rng.below(c.atoms.size()), j = rng.below(c.atoms.size() - 1);
                if (j >= i) ++j;
                sigma[c.atoms[i]] = c.atoms[j];
                sigma[c.atoms[j]] = c.atoms[i];
            }
        }
        auto s = Permutation::from_map(sigma);
        for (auto& c : cs) {
            auto rules = c.kb.rules();
            for (const auto& r : rules) c.kb.add(mcsym::apply(s, r));
            auto br = c.br;
            for (const auto& r : br) {
                auto img = mcsym::apply(s, r);
                if (std::find(c.br.begin(), c.br.end(), img) == c.br.end()) c.br.push_back(img);
            }
        }
    }
    return MultiContextSystem(std::move(cs));
}

MultiContextSystem random_single_context(SplitMix64& rng, int max_atoms) {
    bool with_bridge = rng.chance(1, 2);
    std::vector<Context> cs(with_bridge ? 2 : 1);
    cs[0].id = 1;
    int atoms = rng.range(1, max_atoms);
    for (int j = 0; j < atoms; ++j) cs[0].atoms.push_back(Atom{1, names[j]});
    if (with_bridge) {
        cs[1].id = 2;
        int other = rng.range(1, 3);
        for (int j = 0; j < other; ++j) cs[1].atoms.push_back(Atom{2, names[j + 4]});
        cs[1].kb = Program(cs[1].alphabet());
    }
    auto& c = cs[0];
    c.kb = Program(c.alphabet());
    int rules = rng.range(0, 5);
    for (int r = 0; r < rules; ++r) c.kb.add(random_rule(rng, c.atoms));
    if (with_bridge) {
        int count = rng.range(1, 3);
        for (int r = 0; r < count; ++r) {
            BridgeRule b;
            b.head = c.atoms[rng.below(c.atoms.size())];
            int lits = rng.range(1, 2);
            for (int l = 0; l < lits; ++l) {
                Atom a = cs[1].atoms[rng.below(cs[1].atoms.size())];
                if (rng.chance(1, 4)) a = c.atoms[rng.below(c.atoms.size())];  // own-context literal
                if (b.pos.count(a) || b.neg.count(a)) continue;
                (rng.chance(1, 2) ? b.pos : b.neg).insert(a);
            }
            if (std::find(c.br.begin(), c.br.end(), b) == c.br.end()) c.br.push_back(b);
        }
    }
    if (rng.chance(1, 2) && c.atoms.size() >= 2) {
        // Mirror under a transposition to make symmetric contexts common.
        std::map<Atom, Atom> sigma;
        for (const auto& ctx : cs)
            for (const auto& a : ctx.atoms) sigma[a] = a;
        sigma[c.atoms[0]] = c.atoms[1];
        sigma[c.atoms[1]] = c.atoms[0];
        auto s = Permutation::from_map(sigma);
        auto rules_copy = c.kb.rules();
        for (const auto& r : rules_copy) c.kb.add(mcsym::apply(s, r));
        auto br = c.br;
        for (const auto& r : br) {
            auto img = mcsym::apply(s, r);
            if (std::find(c.br.begin(), c.br.end(), img) == c.br.end()) c.br.push_back(img);
        }
    }
    return MultiContextSystem(std::move(cs));
}

ColouredDigraph random_digraph(SplitMix64& rng, int vertices, int colours, int edge_percent) {
    ColouredDigraph g;
    for (int v = 0; v < vertices; ++v) g.add_vertex(rng.range(1, colours));
    for (int u = 0; u < vertices; ++u)
        for (int v = 0; v < vertices; ++v)
            if (u != v && rng.chance(static_cast<std::uint64_t>(edge_percent), 100)) g.add_edge(u, v);
    return g;
}

}  // namespace oracle
