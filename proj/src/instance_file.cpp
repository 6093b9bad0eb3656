#include "mcsym/instance_file.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "lexer.hpp"
#include "mcsym/error.hpp"

namespace mcsym {

using detail::Lexer;
using detail::Tok;

namespace {

struct PendingLine {
    std::string text;
    int line_no;
};

struct PendingContext {
    int id = 0;
    int line_no = 0;
    std::vector<Atom> atoms;
    AtomSet aux;
    std::vector<PendingLine> kb;
    std::vector<PendingLine> br;
};

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::string strip_comment(const std::string& line) {
    auto pct = line.find('%');
    return pct == std::string::npos ? line : line.substr(0, pct);
}

bool valid_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    for (const char* kw : {"not", "mcs", "context", "atoms", "aux", "kb", "br"})
        if (s == kw) return false;
    return true;
}

Atom own_atom(const std::string& name, const AtomSet& own, const Lexer& lex, int column) {
    for (const auto& a : own)
        if (a.name == name) return a;
    throw ParseError("undeclared atom '" + name + "'", lex.line(), column);
}

BridgeRule parse_bridge(const PendingLine& l, const AtomSet& own, const std::vector<AtomSet>& alphabets) {
    Lexer lex(l.text, l.line_no);
    BridgeRule r;
    auto head = lex.expect(Tok::ident, "bridge rule head");
    r.head = own_atom(head.text, own, lex, head.column);
    if (lex.peek().kind == Tok::if_) {
        lex.next();
        do {
            bool negated = false;
            if (lex.peek().kind == Tok::ident && lex.peek().text == "not") {
                lex.next();
                negated = true;
            }
            lex.expect(Tok::lparen, "'('");
            auto ctx_tok = lex.expect(Tok::number, "context index");
            int ctx = std::stoi(ctx_tok.text);
            if (ctx < 1 || ctx > static_cast<int>(alphabets.size()))
                throw ParseError("unknown context " + ctx_tok.text, l.line_no, ctx_tok.column);
            lex.expect(Tok::colon, "':'");
            auto name = lex.expect(Tok::ident, "atom");
            Atom a{ctx, name.text};
            if (!alphabets[static_cast<std::size_t>(ctx - 1)].count(a))
                throw ParseError("atom '" + name.text + "' not in context " + ctx_tok.text, l.line_no, name.column);
            lex.expect(Tok::rparen, "')'");
            (negated ? r.neg : r.pos).insert(a);
            if (lex.peek().kind != Tok::comma) break;
            lex.next();
        } while (true);
    }
    lex.expect(Tok::period, "'.'");
    if (lex.peek().kind != Tok::end) lex.fail("expected end of bridge rule");
    return r;
}

}  // namespace

MultiContextSystem parse_mcs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    int declared = -1;
    std::vector<PendingContext> pending;
    enum class Section { none, kb, br } section = Section::none;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip_comment(raw);
        auto w = words(line);
        if (w.empty()) continue;
        const std::string& key = w[0];
        if (key == "mcs") {
            if (declared >= 0 || w.size() != 2) throw ParseError("malformed 'mcs' header", line_no, 1);
            try {
                declared = std::stoi(w[1]);
            } catch (const std::exception&) {
                throw ParseError("malformed context count", line_no, 1);
            }
            continue;
        }
        if (declared < 0) throw ParseError("expected 'mcs <n>' header", line_no, 1);
        if (key == "context") {
            int id = w.size() == 2 ? std::atoi(w[1].c_str()) : 0;
            if (id != static_cast<int>(pending.size()) + 1)
                throw ParseError("expected 'context " + std::to_string(pending.size() + 1) + "'", line_no, 1);
            pending.push_back(PendingContext{id, line_no, {}, {}, {}, {}});
            section = Section::none;
            continue;
        }
        if (pending.empty()) throw ParseError("content before first context", line_no, 1);
        auto& ctx = pending.back();
        if (key == "atoms" || key == "aux") {
            for (std::size_t i = 1; i < w.size(); ++i) {
                if (!valid_identifier(w[i])) throw ParseError("bad atom name '" + w[i] + "'", line_no, 1);
                Atom a{ctx.id, w[i]};
                bool dup = ctx.aux.count(a) || std::find(ctx.atoms.begin(), ctx.atoms.end(), a) != ctx.atoms.end();
                if (dup) throw ParseError("duplicate atom '" + w[i] + "'", line_no, 1);
                if (key == "atoms") ctx.atoms.push_back(a);
                else ctx.aux.insert(a);
            }
            section = Section::none;
            continue;
        }
        if (key == "kb" && w.size() == 1) {
            section = Section::kb;
            continue;
        }
        if (key == "br" && w.size() == 1) {
            section = Section::br;
            continue;
        }
        if (section == Section::kb) ctx.kb.push_back({line, line_no});
        else if (section == Section::br) ctx.br.push_back({line, line_no});
        else throw ParseError("unexpected line outside kb/br section", line_no, 1);
    }
    if (declared < 0) throw ParseError("missing 'mcs <n>' header", line_no, 1);
    if (static_cast<int>(pending.size()) != declared)
        throw ParseError("header declares " + std::to_string(declared) + " contexts, found " +
                         std::to_string(pending.size()), line_no, 1);

    std::vector<AtomSet> alphabets;
    for (const auto& p : pending) {
        AtomSet own(p.atoms.begin(), p.atoms.end());
        own.insert(p.aux.begin(), p.aux.end());
        alphabets.push_back(std::move(own));
    }
    std::vector<Context> contexts;
    for (std::size_t i = 0; i < pending.size(); ++i) {
        const auto& p = pending[i];
        Context c;
        c.id = p.id;
        c.atoms = p.atoms;
        c.aux = p.aux;
        c.kb = Program(alphabets[i]);
        for (const auto& l : p.kb) c.kb.add(parse_rule(l.text, alphabets[i], l.line_no));
        for (const auto& l : p.br) {
            auto r = parse_bridge(l, alphabets[i], alphabets);
            if (std::find(c.br.begin(), c.br.end(), r) == c.br.end()) c.br.push_back(std::move(r));
        }
        contexts.push_back(std::move(c));
    }
    try {
        return MultiContextSystem(std::move(contexts));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0, 0);
    }
}

MultiContextSystem load_mcs(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_mcs(buf.str());
}

std::string emit_bridge_rule(const BridgeRule& r) {
    std::string out = r.head.name;
    if (r.pos.empty() && r.neg.empty()) return out + ".";
    out += " :- ";
    bool first = true;
    auto lit = [&](const Atom& a, bool neg) {
        if (!first) out += ", ";
        first = false;
        if (neg) out += "not ";
        out += "(" + std::to_string(a.context) + ":" + a.name + ")";
    };
    for (const auto& a : r.pos) lit(a, false);
    for (const auto& a : r.neg) lit(a, true);
    return out + ".";
}

std::string emit_mcs(const MultiContextSystem& m, const std::string& header) {
    std::ostringstream out;
    if (!header.empty()) {
        std::istringstream h(header);
        for (std::string line; std::getline(h, line);) out << "% " << line << "\n";
    }
    out << "mcs " << m.size() << "\n";
    for (const auto& c : m.contexts()) {
        out << "context " << c.id << "\n";
        out << "  atoms";
        for (const auto& a : c.atoms) out << ' ' << a.name;
        out << "\n";
        if (!c.aux.empty()) {
            out << "  aux";
            for (const auto& a : c.aux) out << ' ' << a.name;
            out << "\n";
        }
        out << "  kb\n";
        for (const auto& r : c.kb.rules()) out << "    " << emit_rule(r) << "\n";
        out << "  br\n";
        for (const auto& r : c.br) out << "    " << emit_bridge_rule(r) << "\n";
    }
    return out.str();
}

}  // namespace mcsym
