// Random benchmark instances over fixed import topologies.

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mcsym/bench.hpp"
#include "mcsym/instance_file.hpp"

namespace mcsym {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("empty range");
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    while (true) {
        std::uint64_t x = next();
        if (x >= limit) return x % bound;
    }
}

int SplitMix64::range(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("empty range");
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

SplitMix64 SplitMix64::split(std::uint64_t label) {
    return SplitMix64(next() ^ (label * 0xd1b54a32d192ed03ULL));
}

std::string topology_name(Topology t) {
    switch (t) {
    case Topology::diamond: return "diamond";
    case Topology::zigzag: return "zigzag";
    case Topology::house: return "house";
    case Topology::ring: return "ring";
    }
    return "?";
}

Topology parse_topology(const std::string& s) {
    if (s == "diamond" || s == "D") return Topology::diamond;
    if (s == "zigzag" || s == "Z") return Topology::zigzag;
    if (s == "house" || s == "H") return Topology::house;
    if (s == "ring" || s == "R") return Topology::ring;
    throw std::invalid_argument("unknown topology '" + s + "'");
}

void validate(const TopologySpec& spec) {
    const int n = spec.n;
    switch (spec.kind) {
    case Topology::diamond:
    case Topology::zigzag:
        if (n < 4 || n % 3 != 1) throw std::invalid_argument("diamond stacks need n = 3k+1 >= 4, got " + std::to_string(n));
        break;
    case Topology::house:
        if (n < 5 || n % 4 != 1) throw std::invalid_argument("house stacks need n = 4k+1 >= 5, got " + std::to_string(n));
        break;
    case Topology::ring:
        if (n < 2) throw std::invalid_argument("rings need n >= 2, got " + std::to_string(n));
        break;
    }
    if (spec.atoms_per_context < 1) throw std::invalid_argument("need at least one atom per context");
    if (spec.max_exported < 1) throw std::invalid_argument("need at least one exported atom");
    if (spec.max_bridge_body < 1 || spec.max_bridge_rules < 1 || spec.max_kb_rules < 0)
        throw std::invalid_argument("bad rule parameters");
}

std::vector<std::pair<int, int>> topology_edges(Topology kind, int n) {
    std::vector<std::pair<int, int>> e;
    switch (kind) {
    case Topology::diamond:
    case Topology::zigzag:
        // Diamond t: top 3t+1, middles 3t+2 and 3t+3, bottom 3t+4; the
        // bottom is the next diamond's top.
        for (int top = 1; top + 3 <= n; top += 3) {
            int m1 = top + 1, m2 = top + 2, bottom = top + 3;
            e.insert(e.end(), {{top, m1}, {top, m2}, {m1, bottom}, {m2, bottom}});
            if (kind == Topology::zigzag) e.push_back({m1, m2});
        }
        break;
    case Topology::house: {
        // Ridge imports both middles; middles and basement form a cycle.
        // Further houses hang below basement nodes, oldest first.
        std::deque<int> ridges{1};
        int next = 2;
        while (next + 3 <= n) {
            int r = ridges.front();
            ridges.pop_front();
            int m1 = next, m2 = next + 1, b1 = next + 2, b2 = next + 3;
            next += 4;
            e.insert(e.end(), {{r, m1}, {r, m2}, {m1, b1}, {b1, b2}, {b2, m2}, {m2, m1}});
            ridges.push_back(b1);
            ridges.push_back(b2);
        }
        break;
    }
    case Topology::ring:
        for (int i = 1; i <= n; ++i) e.push_back({i, i % n + 1});
        break;
    }
    return e;
}

namespace {

std::vector<Atom> sample(SplitMix64& rng, const std::vector<Atom>& from, std::size_t count) {
    std::vector<Atom> pool = from;
    std::vector<Atom> out;
    while (out.size() < count && !pool.empty()) {
        std::size_t i = rng.below(pool.size());
        out.push_back(pool[i]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return out;
}

}  // namespace

MultiContextSystem generate(const TopologySpec& spec) {
    validate(spec);
    SplitMix64 root(spec.seed);
    const int n = spec.n;
    std::map<int, std::set<int>> imports;
    for (auto [from, to] : topology_edges(spec.kind, n)) imports[from].insert(to);

    std::vector<Context> contexts(static_cast<std::size_t>(n));
    std::vector<std::vector<Atom>> exports(static_cast<std::size_t>(n));
    std::vector<SplitMix64> streams;
    for (int k = 1; k <= n; ++k) streams.push_back(root.split(static_cast<std::uint64_t>(k)));

    for (int k = 1; k <= n; ++k) {
        auto& c = contexts[static_cast<std::size_t>(k - 1)];
        auto& rng = streams[static_cast<std::size_t>(k - 1)];
        c.id = k;
        for (int j = 0; j < spec.atoms_per_context; ++j) c.atoms.push_back(Atom{k, "a" + std::to_string(j)});
        int e = rng.range(1, std::min(spec.max_exported, spec.atoms_per_context));
        exports[static_cast<std::size_t>(k - 1)] = sample(rng, c.atoms, static_cast<std::size_t>(e));
        std::sort(exports[static_cast<std::size_t>(k - 1)].begin(), exports[static_cast<std::size_t>(k - 1)].end());
    }

    for (int k = 1; k <= n; ++k) {
        auto& c = contexts[static_cast<std::size_t>(k - 1)];
        auto& rng = streams[static_cast<std::size_t>(k - 1)];
        const auto& own = c.atoms;

        c.kb = Program(c.alphabet());
        int kb_rules = rng.range(0, spec.max_kb_rules);
        for (int r = 0; r < kb_rules; ++r) {
            AtomSet head;
            int heads = rng.chance(1, 4) ? 2 : 1;
            for (const auto& a : sample(rng, own, static_cast<std::size_t>(heads))) head.insert(a);
            Rule rule{head, {}, {}};
            int body = rng.range(0, 2);
            for (int b = 0; b < body; ++b) {
                const Atom& a = own[rng.below(own.size())];
                if (rng.chance(1, 2)) {
                    if (!head.count(a) && !rule.neg.count(a)) rule.pos.insert(a);
                } else if (!rule.pos.count(a)) {
                    rule.neg.insert(a);
                }
            }
            c.kb.add(rule);
        }

        const auto& nb = imports[k];
        if (nb.empty()) continue;
        std::vector<Atom> pool;
        for (int j : nb) pool.insert(pool.end(), exports[static_cast<std::size_t>(j - 1)].begin(),
                                     exports[static_cast<std::size_t>(j - 1)].end());
        int count = std::max(static_cast<int>(nb.size()), rng.range(1, spec.max_bridge_rules));
        std::vector<int> must(nb.begin(), nb.end());
        for (int r = 0; r < count; ++r) {
            BridgeRule br;
            br.head = own[rng.below(own.size())];
            int body = rng.range(1, spec.max_bridge_body);
            std::vector<Atom> lits;
            if (r < static_cast<int>(must.size())) {
                // Realize edge k -> must[r].
                const auto& ex = exports[static_cast<std::size_t>(must[static_cast<std::size_t>(r)] - 1)];
                lits.push_back(ex[rng.below(ex.size())]);
            }
            while (static_cast<int>(lits.size()) < body) lits.push_back(pool[rng.below(pool.size())]);
            for (const auto& a : lits) {
                if (br.pos.count(a) || br.neg.count(a)) continue;
                (rng.chance(1, 2) ? br.pos : br.neg).insert(a);
            }
            if (std::find(c.br.begin(), c.br.end(), br) == c.br.end()) c.br.push_back(std::move(br));
        }
    }
    return MultiContextSystem(std::move(contexts));
}

std::string generate_file(const TopologySpec& spec) {
    auto m = generate(spec);
    std::ostringstream h;
    h << "generated topology=" << topology_name(spec.kind) << " n=" << spec.n << " seed=" << spec.seed
      << " atoms=" << spec.atoms_per_context << " export=" << spec.max_exported << " brules=" << spec.max_bridge_rules
      << " bbody=" << spec.max_bridge_body << " kbrules=" << spec.max_kb_rules << " rng=splitmix64\n"
      << "kb rules: 0.." << spec.max_kb_rules << " per context, 1-2 head atoms (2 with p=1/4), 0-2 body literals";
    return emit_mcs(m, h.str());
}

}  // namespace mcsym
