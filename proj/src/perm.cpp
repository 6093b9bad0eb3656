#include "mcsym/perm.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <stdexcept>

#include "mcsym/error.hpp"

namespace mcsym {

Permutation Permutation::identity(const AtomSet& domain) {
    std::map<Atom, Atom> m;
    for (const auto& a : domain) m.emplace_hint(m.end(), a, a);
    return Permutation(std::move(m));
}

Permutation Permutation::from_map(std::map<Atom, Atom> mapping) {
    AtomSet images;
    for (const auto& [from, to] : mapping) {
        if (mapping.count(to) == 0)
            throw std::invalid_argument("permutation image " + qualified(to) + " outside domain");
        if (!images.insert(to).second)
            throw std::invalid_argument("permutation is not injective at " + qualified(to));
    }
    return Permutation(std::move(mapping));
}

AtomSet Permutation::domain() const {
    AtomSet d;
    for (const auto& kv : map_) d.emplace_hint(d.end(), kv.first);
    return d;
}

const Atom& Permutation::image(const Atom& a) const {
    auto it = map_.find(a);
    return it == map_.end() ? a : it->second;
}

AtomSet Permutation::support() const {
    AtomSet s;
    for (const auto& [from, to] : map_)
        if (from != to) s.emplace_hint(s.end(), from);
    return s;
}

bool Permutation::is_identity() const {
    return std::all_of(map_.begin(), map_.end(), [](const auto& kv) { return kv.first == kv.second; });
}

Permutation Permutation::inverse() const {
    std::map<Atom, Atom> inv;
    for (const auto& [from, to] : map_) inv.emplace(to, from);
    return Permutation(std::move(inv));
}

Permutation Permutation::extended(const AtomSet& extra) const {
    auto m = map_;
    for (const auto& a : extra) m.emplace(a, a);
    return Permutation(std::move(m));
}

Permutation Permutation::restricted(const AtomSet& sub) const {
    std::map<Atom, Atom> m;
    for (const auto& a : sub) {
        const Atom& b = image(a);
        if (sub.count(b) == 0)
            throw std::invalid_argument("restriction domain not invariant at " + qualified(a));
        m.emplace(a, b);
    }
    return Permutation(std::move(m));
}

AtomSet apply(const Permutation& p, const AtomSet& atoms) {
    AtomSet out;
    for (const auto& a : atoms) out.insert(p.image(a));
    return out;
}

Permutation compose(const Permutation& p, const Permutation& s) {
    std::map<Atom, Atom> m;
    for (const auto& kv : p.mapping()) m.emplace(kv.first, s.image(kv.second));
    for (const auto& kv : s.mapping())
        if (!p.in_domain(kv.first)) m.emplace(kv.first, kv.second);
    return Permutation::from_map(std::move(m));
}

CycleForm to_cycles(const Permutation& p) {
    CycleForm form;
    AtomSet seen;
    // std::map iteration is ascending, so each cycle starts at its least atom
    // and cycles come out sorted by that atom.
    for (const auto& [start, first_image] : p.mapping()) {
        if (seen.count(start)) continue;
        if (start == first_image) {
            form.fixed.insert(start);
            seen.insert(start);
            continue;
        }
        std::vector<Atom> cycle;
        Atom cur = start;
        do {
            cycle.push_back(cur);
            seen.insert(cur);
            cur = p.image(cur);
        } while (cur != start);
        form.cycles.push_back(std::move(cycle));
    }
    return form;
}

Permutation from_cycles(const CycleForm& form) {
    std::map<Atom, Atom> m;
    for (const auto& a : form.fixed) m.emplace(a, a);
    for (const auto& cycle : form.cycles) {
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            if (!m.emplace(cycle[i], cycle[(i + 1) % cycle.size()]).second)
                throw std::invalid_argument("cycles are not disjoint at " + qualified(cycle[i]));
        }
    }
    return Permutation::from_map(std::move(m));
}

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

Atom resolve_atom(const std::string& token, const AtomSet& domain, int column) {
    auto dot = token.find('.');
    if (dot != std::string::npos) {
        Atom a;
        try {
            a.context = std::stoi(token.substr(0, dot));
        } catch (const std::exception&) {
            throw ParseError("bad qualified atom '" + token + "'", 1, column);
        }
        a.name = token.substr(dot + 1);
        if (domain.count(a) == 0) throw ParseError("unknown atom '" + token + "'", 1, column);
        return a;
    }
    const Atom* found = nullptr;
    for (const auto& a : domain) {
        if (a.name != token) continue;
        if (found) throw ParseError("ambiguous atom '" + token + "'", 1, column);
        found = &a;
    }
    if (!found) throw ParseError("unknown atom '" + token + "'", 1, column);
    return *found;
}

}  // namespace

Permutation parse_cycles(std::string_view text, const AtomSet& domain) {
    CycleForm form;
    AtomSet used;
    std::size_t i = 0;
    auto column = [&] { return static_cast<int>(i) + 1; };
    while (true) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) break;
        if (text[i] != '(') throw ParseError("expected '('", 1, column());
        ++i;
        std::vector<Atom> cycle;
        while (true) {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            if (i == text.size()) throw ParseError("unterminated cycle", 1, column());
            if (text[i] == ')') {
                ++i;
                break;
            }
            int col = column();
            std::size_t start = i;
            while (i < text.size() && ident_char(text[i])) ++i;
            if (start == i) throw ParseError(std::string("unexpected character '") + text[i] + "'", 1, col);
            Atom a = resolve_atom(std::string(text.substr(start, i - start)), domain, col);
            if (!used.insert(a).second) throw ParseError("repeated atom '" + qualified(a) + "'", 1, col);
            cycle.push_back(std::move(a));
        }
        if (cycle.size() >= 2) form.cycles.push_back(std::move(cycle));
    }
    for (const auto& a : domain)
        if (used.count(a) == 0) form.fixed.insert(a);
    for (const auto& c : form.cycles)
        if (c.size() < 2) form.fixed.insert(c.front());
    return from_cycles(form);
}

std::string emit_cycles(const Permutation& p, AtomStyle style) {
    bool bare = style == AtomStyle::bare;
    if (style == AtomStyle::automatic) {
        const auto& m = p.mapping();
        bare = m.empty() || m.begin()->first.context == m.rbegin()->first.context;
    }
    std::string out;
    for (const auto& cycle : to_cycles(p).cycles) {
        if (!out.empty()) out += ' ';
        out += '(';
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            if (i) out += ' ';
            out += bare ? cycle[i].name : qualified(cycle[i]);
        }
        out += ')';
    }
    return out;
}

AtomSet orbit(const Permutation& p, const Atom& a) {
    if (!p.in_domain(a)) throw std::invalid_argument("atom " + qualified(a) + " outside permutation domain");
    AtomSet o;
    Atom cur = a;
    do {
        o.insert(cur);
        cur = p.image(cur);
    } while (cur != a);
    return o;
}

std::vector<AtomSet> orbits(const Permutation& p) {
    std::vector<AtomSet> out;
    AtomSet seen;
    for (const auto& kv : p.mapping()) {
        if (seen.count(kv.first)) continue;
        auto o = orbit(p, kv.first);
        seen.insert(o.begin(), o.end());
        out.push_back(std::move(o));
    }
    return out;
}

std::optional<Permutation> join(const Permutation& p, const Permutation& s) {
    auto m = p.mapping();
    for (const auto& [from, to] : s.mapping()) {
        auto [it, inserted] = m.emplace(from, to);
        if (!inserted && it->second != to) return std::nullopt;
    }
    // Agreement on the overlap plus bijectivity of both operands makes the
    // union a bijection.
    return Permutation::from_map(std::move(m));
}

PermSet join_sets(const PermSet& left, const PermSet& right) {
    PermSet out;
    for (const auto& p : left)
        for (const auto& s : right)
            if (auto j = join(p, s)) out.insert(std::move(*j));
    return out;
}

PermSet group_closure(const PermSet& gens, std::size_t cap, const AtomSet& base_domain) {
    AtomSet domain = base_domain;
    for (const auto& g : gens) {
        auto d = g.domain();
        domain.insert(d.begin(), d.end());
    }
    std::vector<Permutation> ext;
    for (const auto& g : gens) ext.push_back(g.extended(domain));

    PermSet group{Permutation::identity(domain)};
    std::deque<Permutation> frontier{*group.begin()};
    while (!frontier.empty()) {
        Permutation e = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : ext) {
            Permutation prod = compose(e, g);
            if (group.insert(prod).second) {
                if (group.size() > cap)
                    throw BoundExceeded("group closure exceeds cap of " + std::to_string(cap) + " elements");
                frontier.push_back(std::move(prod));
            }
        }
    }
    return group;
}

bool smaller_support(const Permutation& a, const Permutation& b) {
    auto sa = a.support().size(), sb = b.support().size();
    if (sa != sb) return sa < sb;
    return a < b;
}

PermSet reduce_irredundant(const PermSet& gens, std::size_t cap) {
    AtomSet domain;
    for (const auto& g : gens) {
        auto d = g.domain();
        domain.insert(d.begin(), d.end());
    }
    std::vector<Permutation> order;
    for (const auto& g : gens)
        if (!g.is_identity()) order.push_back(g);
    std::sort(order.begin(), order.end(), smaller_support);

    auto closure_of = [&](const std::vector<Permutation>& set) {
        return group_closure(PermSet(set.begin(), set.end()), cap, domain);
    };

    std::vector<Permutation> kept;
    PermSet group = closure_of(kept);
    for (const auto& g : order) {
        if (group.count(g.extended(domain))) continue;
        kept.push_back(g);
        group = closure_of(kept);
    }

    // Drop generators that became redundant through later additions.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = kept.size(); i-- > 0;) {
            std::vector<Permutation> others = kept;
            others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
            if (closure_of(others).count(kept[i].extended(domain))) {
                kept = std::move(others);
                changed = true;
                break;
            }
        }
    }
    return PermSet(kept.begin(), kept.end());
}

}  // namespace mcsym
