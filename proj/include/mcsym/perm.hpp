#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mcsym/atom.hpp"

namespace mcsym {

/// A bijection on a finite set of atoms (its domain). Atoms outside the
/// domain are treated as fixed points by `image`, which keeps application
/// total over mixed vocabularies. Two permutations are equal only if their
/// domains are equal as well.
class Permutation {
public:
    Permutation() = default;

    static Permutation identity(const AtomSet& domain);

    /// Throws std::invalid_argument unless `mapping` is a bijection on its keys.
    static Permutation from_map(std::map<Atom, Atom> mapping);

    const std::map<Atom, Atom>& mapping() const { return map_; }
    AtomSet domain() const;
    bool in_domain(const Atom& a) const { return map_.count(a) != 0; }
    std::size_t domain_size() const { return map_.size(); }

    /// a^pi; atoms outside the domain are fixed.
    const Atom& image(const Atom& a) const;

    AtomSet support() const;
    bool is_identity() const;
    Permutation inverse() const;

    /// Same mapping over domain() ∪ extra, with new atoms fixed.
    Permutation extended(const AtomSet& extra) const;

    /// Restriction to `sub`; throws std::invalid_argument if sub is not invariant.
    Permutation restricted(const AtomSet& sub) const;

    auto operator<=>(const Permutation&) const = default;
    bool operator==(const Permutation&) const = default;

private:
    explicit Permutation(std::map<Atom, Atom> m) : map_(std::move(m)) {}
    std::map<Atom, Atom> map_;  // complete: fixed points are stored too
};

using PermSet = std::set<Permutation>;

AtomSet apply(const Permutation& p, const AtomSet& atoms);

/// a^(compose(p, s)) = (a^p)^s, over dom(p) ∪ dom(s).
Permutation compose(const Permutation& p, const Permutation& s);

struct CycleForm {
    std::vector<std::vector<Atom>> cycles;  // nontrivial, pairwise disjoint
    AtomSet fixed;
};

/// Canonical: each cycle starts at its least atom, cycles sorted by that atom.
CycleForm to_cycles(const Permutation& p);
Permutation from_cycles(const CycleForm& form);

enum class AtomStyle {
    automatic,  // bare names when the domain lies in a single context
    bare,
    qualified,
};

/// Parses "(a b) (d e)". Atoms are either bare names, resolved against the
/// unique atom of that name in `domain`, or qualified `<ctx>.<name>`.
/// "()" denotes an empty cycle and is ignored. Throws ParseError.
Permutation parse_cycles(std::string_view text, const AtomSet& domain);
std::string emit_cycles(const Permutation& p, AtomStyle style = AtomStyle::automatic);

/// Throws std::invalid_argument if a is outside dom(p).
AtomSet orbit(const Permutation& p, const Atom& a);

/// Partition of dom(p) into orbits, in ascending order of least element.
std::vector<AtomSet> orbits(const Permutation& p);

/// Defined iff p and s agree on dom(p) ∩ dom(s); the result lives on the union.
std::optional<Permutation> join(const Permutation& p, const Permutation& s);

/// All defined pairwise joins.
PermSet join_sets(const PermSet& left, const PermSet& right);

inline constexpr std::size_t default_closure_cap = 1'000'000;

/// The group generated by `gens` (plus identity over `base_domain` ∪ the
/// generators' domains). Throws BoundExceeded when it grows beyond `cap`.
PermSet group_closure(const PermSet& gens, std::size_t cap = default_closure_cap,
                      const AtomSet& base_domain = {});

/// A subset of `gens` generating the same group in which no element is
/// generated by the others. Deterministic: prefers small supports.
PermSet reduce_irredundant(const PermSet& gens, std::size_t cap = default_closure_cap);

/// Orders permutations by support size, then canonically.
bool smaller_support(const Permutation& a, const Permutation& b);

}  // namespace mcsym
