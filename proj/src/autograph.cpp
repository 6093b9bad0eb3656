#include "mcsym/autograph.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "mcsym/error.hpp"

namespace mcsym {

int ColouredDigraph::add_vertex(int colour) {
    colour_.push_back(colour);
    out_.emplace_back();
    in_.emplace_back();
    return vertex_count() - 1;
}

void ColouredDigraph::add_edge(int from, int to) {
    auto& o = out_.at(static_cast<std::size_t>(from));
    auto it = std::lower_bound(o.begin(), o.end(), to);
    if (it != o.end() && *it == to) return;
    o.insert(it, to);
    auto& i = in_.at(static_cast<std::size_t>(to));
    i.insert(std::lower_bound(i.begin(), i.end(), from), from);
    ++edges_;
}

bool ColouredDigraph::has_edge(int from, int to) const {
    const auto& o = out(from);
    return std::binary_search(o.begin(), o.end(), to);
}

int ColouredDigraph::colour_count() const {
    return static_cast<int>(std::set<int>(colour_.begin(), colour_.end()).size());
}

std::string ColouredDigraph::dump() const {
    std::ostringstream os;
    os << "graph " << vertex_count() << ' ' << edge_count() << ' ' << colour_count() << '\n';
    for (int v = 0; v < vertex_count(); ++v) os << "c " << v << ' ' << colour(v) << '\n';
    for (int v = 0; v < vertex_count(); ++v)
        for (int w : out(v)) os << "e " << v << ' ' << w << '\n';
    return os.str();
}

bool is_automorphism(const ColouredDigraph& g, const VertexPermutation& p) {
    const int n = g.vertex_count();
    if (static_cast<int>(p.size()) != n) return false;
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (int v = 0; v < n; ++v) {
        int w = p[static_cast<std::size_t>(v)];
        if (w < 0 || w >= n || hit[static_cast<std::size_t>(w)]) return false;
        hit[static_cast<std::size_t>(w)] = true;
        if (g.colour(v) != g.colour(w)) return false;
    }
    // A bijection mapping every edge to an edge maps non-edges to non-edges.
    for (int v = 0; v < n; ++v)
        for (int w : g.out(v))
            if (!g.has_edge(p[static_cast<std::size_t>(v)], p[static_cast<std::size_t>(w)])) return false;
    return true;
}

namespace {

int cell_count(const std::vector<int>& cells) { return static_cast<int>(std::set<int>(cells.begin(), cells.end()).size()); }

std::vector<int> compact(const std::vector<std::vector<int>>& keys) {
    std::vector<std::vector<int>> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> out(keys.size());
    for (std::size_t v = 0; v < keys.size(); ++v)
        out[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[v]) - sorted.begin());
    return out;
}

std::vector<int> refine(const ColouredDigraph& g, std::vector<int> cells) {
    int count = cell_count(cells);
    while (true) {
        std::vector<std::vector<int>> keys(cells.size());
        for (int v = 0; v < g.vertex_count(); ++v) {
            auto& key = keys[static_cast<std::size_t>(v)];
            key.push_back(cells[static_cast<std::size_t>(v)]);
            std::vector<int> outs, ins;
            for (int w : g.out(v)) outs.push_back(cells[static_cast<std::size_t>(w)]);
            for (int w : g.in(v)) ins.push_back(cells[static_cast<std::size_t>(w)]);
            std::sort(outs.begin(), outs.end());
            std::sort(ins.begin(), ins.end());
            key.insert(key.end(), outs.begin(), outs.end());
            key.push_back(-1);
            key.insert(key.end(), ins.begin(), ins.end());
        }
        cells = compact(keys);
        int next = cell_count(cells);
        if (next == count) return cells;
        count = next;
    }
}

std::vector<int> individualize(const std::vector<int>& cells, int v) {
    std::vector<std::vector<int>> keys(cells.size());
    for (std::size_t u = 0; u < cells.size(); ++u) keys[u] = {cells[u], static_cast<int>(u) == v ? 0 : 1};
    return compact(keys);
}

// Vertices of the first smallest non-singleton cell, ascending; empty if discrete.
std::vector<int> target_cell(const std::vector<int>& cells) {
    std::map<int, std::vector<int>> members;
    for (std::size_t v = 0; v < cells.size(); ++v) members[cells[v]].push_back(static_cast<int>(v));
    const std::vector<int>* best = nullptr;
    for (const auto& [id, vs] : members)
        if (vs.size() > 1 && (!best || vs.size() < best->size())) best = &vs;
    return best ? *best : std::vector<int>{};
}

std::vector<int> histogram(const std::vector<int>& cells) {
    std::vector<int> h(cells.size(), 0);
    for (int c : cells) ++h[static_cast<std::size_t>(c)];
    return h;
}

class Search {
public:
    explicit Search(const ColouredDigraph& g) : g_(g) {
        std::vector<std::vector<int>> keys;
        for (int c : g.colours()) keys.push_back({c});
        std::vector<int> cells = refine(g_, compact(keys));
        path_.push_back(cells);
        while (true) {
            auto target = target_cell(path_.back());
            if (target.empty()) break;
            chosen_.push_back(target.front());
            path_.push_back(refine(g_, individualize(path_.back(), target.front())));
        }
        for (const auto& node : path_) hist_.push_back(histogram(node));
    }

    std::vector<VertexPermutation> run() {
        std::vector<VertexPermutation> gens;
        for (std::size_t d = chosen_.size(); d-- > 0;) {
            const int v = chosen_[d];
            for (int w : target_cell(path_[d])) {
                if (w == v || in_orbit(gens, v, w)) continue;
                auto child = refine(g_, individualize(path_[d], w));
                if (histogram(child) != hist_[d + 1]) continue;
                if (auto found = find(child, d + 1)) gens.push_back(std::move(*found));
            }
        }
        return gens;
    }

private:
    std::optional<VertexPermutation> find(const std::vector<int>& cells, std::size_t depth) {
        auto target = target_cell(cells);
        if (target.empty()) {
            // Map the first leaf onto this one.
            VertexPermutation p(cells.size());
            std::vector<int> vertex_at(cells.size());
            for (std::size_t v = 0; v < cells.size(); ++v) vertex_at[static_cast<std::size_t>(cells[v])] = static_cast<int>(v);
            const auto& leaf = path_.back();
            for (std::size_t v = 0; v < cells.size(); ++v) p[v] = vertex_at[static_cast<std::size_t>(leaf[v])];
            if (is_automorphism(g_, p)) return p;
            return std::nullopt;
        }
        if (depth + 1 >= hist_.size()) return std::nullopt;
        for (int u : target) {
            auto child = refine(g_, individualize(cells, u));
            if (histogram(child) != hist_[depth + 1]) continue;
            if (auto found = find(child, depth + 1)) return found;
        }
        return std::nullopt;
    }

    static bool in_orbit(const std::vector<VertexPermutation>& gens, int from, int to) {
        std::set<int> seen{from};
        std::vector<int> work{from};
        while (!work.empty()) {
            int x = work.back();
            work.pop_back();
            if (x == to) return true;
            for (const auto& g : gens) {
                int y = g[static_cast<std::size_t>(x)];
                if (seen.insert(y).second) work.push_back(y);
            }
        }
        return false;
    }

    const ColouredDigraph& g_;
    std::vector<std::vector<int>> path_;
    std::vector<std::vector<int>> hist_;
    std::vector<int> chosen_;
};

}  // namespace

std::vector<int> refine_colouring(const ColouredDigraph& g, std::vector<int> colouring) {
    std::vector<std::vector<int>> keys;
    for (int c : colouring) keys.push_back({c});
    return refine(g, compact(keys));
}

std::vector<int> refine_colouring(const ColouredDigraph& g) { return refine_colouring(g, g.colours()); }

std::vector<VertexPermutation> automorphism_generators(const ColouredDigraph& g, std::size_t vertex_bound) {
    if (static_cast<std::size_t>(g.vertex_count()) > vertex_bound)
        throw BoundExceeded("graph has " + std::to_string(g.vertex_count()) + " vertices, bound is " +
                            std::to_string(vertex_bound));
    if (g.vertex_count() == 0) return {};
    return Search(g).run();
}

std::string emit_vertex_cycles(const VertexPermutation& p) {
    std::string out;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t v = 0; v < p.size(); ++v) {
        if (seen[v] || p[v] == static_cast<int>(v)) continue;
        if (!out.empty()) out += ' ';
        out += '(';
        std::size_t cur = v;
        bool first = true;
        while (!seen[cur]) {
            seen[cur] = true;
            if (!first) out += ' ';
            out += std::to_string(cur);
            first = false;
            cur = static_cast<std::size_t>(p[cur]);
        }
        out += ')';
    }
    return out;
}

}  // namespace mcsym
