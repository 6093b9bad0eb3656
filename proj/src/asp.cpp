#include "mcsym/asp.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>

#include "lexer.hpp"
#include "mcsym/error.hpp"

namespace mcsym {

using detail::Lexer;
using detail::Tok;

AtomSet Rule::atoms() const {
    AtomSet all = head;
    all.insert(pos.begin(), pos.end());
    all.insert(neg.begin(), neg.end());
    return all;
}

bool Program::add(Rule r) {
    if (std::find(rules_.begin(), rules_.end(), r) != rules_.end()) return false;
    auto atoms = r.atoms();
    alphabet_.insert(atoms.begin(), atoms.end());
    rules_.push_back(std::move(r));
    return true;
}

AtomSet Program::occurring_atoms() const {
    AtomSet out;
    for (const auto& r : rules_) {
        auto a = r.atoms();
        out.insert(a.begin(), a.end());
    }
    return out;
}

Rule apply(const Permutation& p, const Rule& r) {
    return Rule{mcsym::apply(p, r.head), mcsym::apply(p, r.pos), mcsym::apply(p, r.neg)};
}

std::set<Rule> apply(const Permutation& p, const std::set<Rule>& rules) {
    std::set<Rule> out;
    for (const auto& r : rules) out.insert(mcsym::apply(p, r));
    return out;
}

namespace {

Atom lookup(const std::string& name, const AtomSet& alphabet, const Lexer& lex, int column) {
    const Atom* found = nullptr;
    for (const auto& a : alphabet) {
        if (a.name != name) continue;
        if (found) throw ParseError("ambiguous atom '" + name + "'", lex.line(), column);
        found = &a;
    }
    if (!found) throw ParseError("undeclared atom '" + name + "'", lex.line(), column);
    return *found;
}

}  // namespace

Rule parse_rule(std::string_view line, const AtomSet& alphabet, int line_no) {
    Lexer lex(line, line_no);
    Rule r;
    auto atom = [&] {
        auto t = lex.expect(Tok::ident, "atom");
        return lookup(t.text, alphabet, lex, t.column);
    };
    if (lex.peek().kind != Tok::if_) {
        r.head.insert(atom());
        while (lex.peek().kind == Tok::semicolon) {
            lex.next();
            r.head.insert(atom());
        }
    }
    if (lex.peek().kind == Tok::if_) {
        lex.next();
        do {
            if (lex.peek().kind == Tok::ident && lex.peek().text == "not") {
                lex.next();
                r.neg.insert(atom());
            } else {
                r.pos.insert(atom());
            }
            if (lex.peek().kind != Tok::comma) break;
            lex.next();
        } while (true);
    }
    lex.expect(Tok::period, "'.'");
    if (lex.peek().kind != Tok::end) lex.fail("expected end of rule");
    return r;
}

Program parse_program(std::string_view text, const AtomSet& alphabet) {
    Program p(alphabet);
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        Lexer probe(line, line_no);
        if (probe.peek().kind == Tok::end) continue;
        p.add(parse_rule(line, alphabet, line_no));
    }
    return p;
}

std::string emit_rule(const Rule& r) {
    std::string out;
    bool first = true;
    for (const auto& h : r.head) {
        if (!first) out += " ; ";
        out += h.name;
        first = false;
    }
    if (!r.pos.empty() || !r.neg.empty() || r.head.empty()) {
        out += r.head.empty() ? ":- " : " :- ";
        first = true;
        for (const auto& b : r.pos) {
            if (!first) out += ", ";
            out += b.name;
            first = false;
        }
        for (const auto& b : r.neg) {
            if (!first) out += ", ";
            out += "not " + b.name;
            first = false;
        }
    }
    out += '.';
    return out;
}

std::string emit_program(const Program& p) {
    std::string out;
    for (const auto& r : p.rules()) out += emit_rule(r) + "\n";
    return out;
}

Program reduct(const Program& p, const AtomSet& x) {
    Program out(p.alphabet());
    for (const auto& r : p.rules()) {
        bool blocked = std::any_of(r.neg.begin(), r.neg.end(), [&](const Atom& a) { return x.count(a) != 0; });
        if (blocked) continue;
        out.add(Rule{r.head, r.pos, {}});
    }
    return out;
}

namespace {

bool subset_of(const AtomSet& a, const AtomSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const AtomSet& a, const AtomSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else return true;
    }
    return false;
}

bool satisfies(const Rule& r, const AtomSet& x) {
    if (!subset_of(r.pos, x) || intersects(r.neg, x)) return true;
    return intersects(r.head, x);
}

}  // namespace

bool is_model(const Program& p, const AtomSet& x) {
    return std::all_of(p.rules().begin(), p.rules().end(), [&](const Rule& r) { return satisfies(r, x); });
}

bool is_answer_set(const Program& p, const AtomSet& x) {
    Program red = reduct(p, x);
    if (!is_model(red, x)) return false;
    bool normal = std::all_of(red.rules().begin(), red.rules().end(), [](const Rule& r) { return r.head.size() <= 1; });
    if (normal) {
        // The least model of the definite part is contained in every model.
        AtomSet least;
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& r : red.rules())
                if (!r.head.empty() && subset_of(r.pos, least) && !subset_of(r.head, least)) {
                    least.insert(*r.head.begin());
                    changed = true;
                }
        }
        return least == x;
    }
    std::vector<Atom> members(x.begin(), x.end());
    if (members.size() > 30) throw BoundExceeded("minimality check over more than 30 atoms");
    const std::uint64_t full = (std::uint64_t{1} << members.size()) - 1;
    for (std::uint64_t mask = 0; mask < full; ++mask) {
        AtomSet y;
        for (std::size_t i = 0; i < members.size(); ++i)
            if (mask >> i & 1) y.insert(members[i]);
        if (is_model(red, y)) return false;
    }
    return true;
}

namespace {

struct MaskRule {
    std::uint64_t head = 0, pos = 0, neg = 0;
};

}  // namespace

std::set<AtomSet> answer_sets(const Program& p, std::size_t bound) {
    AtomSet occ = p.occurring_atoms();
    if (occ.size() > bound || occ.size() > 62)
        throw BoundExceeded("program has " + std::to_string(occ.size()) + " occurring atoms, bound is " +
                            std::to_string(bound));
    std::vector<Atom> atoms(occ.begin(), occ.end());
    std::map<Atom, int> index;
    for (std::size_t i = 0; i < atoms.size(); ++i) index[atoms[i]] = static_cast<int>(i);
    auto mask_of = [&](const AtomSet& s) {
        std::uint64_t m = 0;
        for (const auto& a : s) m |= std::uint64_t{1} << index.at(a);
        return m;
    };
    std::vector<MaskRule> rules;
    bool disjunctive = false;
    for (const auto& r : p.rules()) {
        rules.push_back({mask_of(r.head), mask_of(r.pos), mask_of(r.neg)});
        disjunctive = disjunctive || r.head.size() > 1;
    }

    auto model_of_reduct = [&](std::uint64_t y, std::uint64_t x) {
        for (const auto& r : rules) {
            if (r.neg & x) continue;
            if ((r.pos & y) == r.pos && !(r.head & y)) return false;
        }
        return true;
    };

    std::set<AtomSet> out;
    const std::uint64_t count = std::uint64_t{1} << atoms.size();
    for (std::uint64_t x = 0; x < count; ++x) {
        if (!model_of_reduct(x, x)) continue;
        bool minimal = true;
        if (!disjunctive) {
            std::uint64_t least = 0;
            for (bool changed = true; changed;) {
                changed = false;
                for (const auto& r : rules) {
                    if ((r.neg & x) || !r.head || (r.pos & least) != r.pos || (r.head & least)) continue;
                    least |= r.head;
                    changed = true;
                }
            }
            minimal = least == x;
        } else {
            // Proper submasks of x, early exit on the first smaller model.
            if (x != 0) {
                for (std::uint64_t y = (x - 1) & x;; y = (y - 1) & x) {
                    if (model_of_reduct(y, x)) {
                        minimal = false;
                        break;
                    }
                    if (y == 0) break;
                }
            }
        }
        if (!minimal) continue;
        AtomSet as;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (x >> i & 1) as.insert(atoms[i]);
        out.insert(std::move(as));
    }
    return out;
}

StratifiedExtension extend_stratified(const AtomSet& x, const Program& aux, const AtomSet& aux_atoms) {
    std::map<Atom, std::vector<std::size_t>> defining;
    std::map<Atom, AtomSet> deps;
    for (std::size_t i = 0; i < aux.rules().size(); ++i) {
        const Rule& r = aux.rules()[i];
        if (r.head.empty()) continue;
        if (r.head.size() > 1 || !aux_atoms.count(*r.head.begin()))
            throw InvariantError("auxiliary rule with non-auxiliary or disjunctive head: " + emit_rule(r));
        const Atom& h = *r.head.begin();
        defining[h].push_back(i);
        for (const auto* body : {&r.pos, &r.neg})
            for (const auto& b : *body)
                if (aux_atoms.count(b)) deps[h].insert(b);
    }

    // Depth-first topological order over auxiliary atoms.
    std::vector<Atom> order;
    std::map<Atom, int> state;  // 1 = on stack, 2 = done
    std::vector<std::pair<Atom, bool>> stack;
    for (const auto& a : aux_atoms) {
        if (state[a] == 2) continue;
        stack.push_back({a, false});
        while (!stack.empty()) {
            auto [cur, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                state[cur] = 2;
                order.push_back(cur);
                continue;
            }
            if (state[cur] == 2) continue;
            if (state[cur] == 1) throw InvariantError("cyclic auxiliary dependency at " + qualified(cur));
            state[cur] = 1;
            stack.push_back({cur, true});
            for (const auto& d : deps[cur]) {
                if (state[d] == 1) throw InvariantError("cyclic auxiliary dependency at " + qualified(d));
                if (state[d] == 0) stack.push_back({d, false});
            }
        }
    }

    StratifiedExtension ext;
    for (const auto& a : x)
        if (!aux_atoms.count(a)) ext.atoms.insert(a);
    for (const auto& a : order) {
        for (auto i : defining[a]) {
            const Rule& r = aux.rules()[i];
            if (subset_of(r.pos, ext.atoms) && !intersects(r.neg, ext.atoms)) {
                ext.atoms.insert(a);
                break;
            }
        }
    }
    for (std::size_t i = 0; i < aux.rules().size(); ++i) {
        const Rule& r = aux.rules()[i];
        if (r.head.empty() && subset_of(r.pos, ext.atoms) && !intersects(r.neg, ext.atoms)) ext.violated.push_back(i);
    }
    return ext;
}

std::set<AtomSet> answer_sets_split(const Program& p, const AtomSet& aux_atoms, std::size_t bound) {
    if (aux_atoms.empty()) return answer_sets(p, bound);
    Program base, top;
    for (const auto& r : p.rules()) {
        if (intersects(r.atoms(), aux_atoms)) {
            if (r.head.size() > 1 || (r.head.size() == 1 && !aux_atoms.count(*r.head.begin())))
                return answer_sets(p, bound);
            top.add(r);
        } else {
            base.add(r);
        }
    }
    std::set<AtomSet> out;
    for (const auto& x : answer_sets(base, bound)) {
        StratifiedExtension ext;
        try {
            ext = extend_stratified(x, top, aux_atoms);
        } catch (const InvariantError&) {
            return answer_sets(p, bound);
        }
        if (ext.consistent()) out.insert(std::move(ext.atoms));
    }
    return out;
}

}  // namespace mcsym
