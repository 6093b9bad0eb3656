#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace mcsym {

/// Directed graph on vertices 0..V-1 with a vertex colouring. Parallel
/// edges are collapsed.
class ColouredDigraph {
public:
    int add_vertex(int colour);
    void add_edge(int from, int to);

    int vertex_count() const { return static_cast<int>(colour_.size()); }
    std::size_t edge_count() const { return edges_; }
    int colour(int v) const { return colour_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& colours() const { return colour_; }
    const std::vector<int>& out(int v) const { return out_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& in(int v) const { return in_[static_cast<std::size_t>(v)]; }
    bool has_edge(int from, int to) const;
    int colour_count() const;

    /// `graph V E C`, then `c <vertex> <colour>` and `e <from> <to>` lines.
    std::string dump() const;

private:
    std::vector<int> colour_;
    std::vector<std::vector<int>> out_, in_;  // sorted
    std::size_t edges_ = 0;
};

/// p[v] is the image of vertex v.
using VertexPermutation = std::vector<int>;

bool is_automorphism(const ColouredDigraph& g, const VertexPermutation& p);

/// Stable colouring obtained by iterated colour refinement on
/// (colour, out-neighbour colours, in-neighbour colours). Cell ids are
/// assigned in sorted signature order, so the result is invariant under
/// automorphisms of the input.
std::vector<int> refine_colouring(const ColouredDigraph& g);
std::vector<int> refine_colouring(const ColouredDigraph& g, std::vector<int> colouring);

inline constexpr std::size_t default_vertex_bound = 10'000;

/// A generating set of the colour-preserving automorphism group, by
/// individualization-refinement: target cell is the first smallest
/// non-singleton cell, branches are taken in ascending vertex order.
/// Identity is never reported. Throws BoundExceeded above `vertex_bound`.
std::vector<VertexPermutation> automorphism_generators(const ColouredDigraph& g,
                                                       std::size_t vertex_bound = default_vertex_bound);

/// "(0 1) (2 3)"; the identity is "".
std::string emit_vertex_cycles(const VertexPermutation& p);

}  // namespace mcsym
