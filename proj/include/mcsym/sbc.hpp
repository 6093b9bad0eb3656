#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mcsym/asp.hpp"
#include "mcsym/mcs.hpp"
#include "mcsym/perm.hpp"

namespace mcsym {

/// Total order over original atoms; a_1 is the most significant position.
class AtomOrder {
public:
    AtomOrder() = default;
    /// Throws std::invalid_argument on duplicates.
    explicit AtomOrder(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool contains(const Atom& a) const { return index_.count(a) != 0; }
    std::size_t index(const Atom& a) const { return index_.at(a); }
    std::size_t size() const { return atoms_.size(); }

private:
    std::vector<Atom> atoms_;
    std::map<Atom, std::size_t> index_;
};

/// Contexts by ascending id, declaration order inside each.
AtomOrder default_order(const MultiContextSystem& m);

/// pc(π) in chained form. `chain` lists the positions that remain after
/// dropping fixed points and positions whose equality a_i = a_i^π already
/// follows from the equalities of earlier positions.
struct PermutationConstraint {
    Permutation perm;
    std::vector<Atom> chain;

    bool trivial() const { return chain.empty(); }
    /// Evaluates the chained formula with c_{m+1} false.
    bool satisfied_by(const std::function<bool(const Atom&)>& truth) const;
};

/// Throws std::invalid_argument if support(π) is not covered by the order.
PermutationConstraint build_pc(const Permutation& p, const AtomOrder& order);

/// Chain position i ≥ 2 housed in the context owning a_{i-1}.
struct ChainLink {
    std::size_t position = 0;
    Atom previous;  // a_{i-1}
    Atom current;   // a_i
    int home = 0;   // context of a_{i-1}
    int source = 0; // context of a_i
    bool crosses() const { return home != source; }
};

struct DistributedPc {
    PermutationConstraint pc;
    int root = 0;      // context of a_1; holds the two constraints
    int terminal = 0;  // context housing the undefined c_{m+1}
    std::vector<ChainLink> links;
    std::size_t seams() const;
};

/// `targets` empty means any context. Throws std::invalid_argument when the
/// support leaves the import closure of the targets, or π moves an atom
/// into another context.
DistributedPc distribute_pc(const Permutation& p, const AtomOrder& order, const MultiContextSystem& m,
                            const std::set<int>& targets = {});

struct ContextRewrite {
    AtomSet aux;
    std::vector<Rule> kb;
    std::vector<BridgeRule> br;
    bool empty() const { return aux.empty() && kb.empty() && br.empty(); }
};

struct SbcRewrite {
    std::map<int, ContextRewrite> contexts;
    bool empty() const;
};

/// Names: sbc_<id>_c<i> for chain atoms, sbc_<id>_p<j>_<name> and
/// sbc_<id>_p<j>_c<i> for atoms imported from context j.
std::string chain_atom_name(const std::string& id, std::size_t position);
std::string import_atom_name(const std::string& id, int source, const std::string& name);

SbcRewrite encode_asp(const Permutation& p, const AtomOrder& order, const MultiContextSystem& m,
                      const std::string& id = "0", const std::set<int>& targets = {});

/// One rewrite per non-identity permutation, ids 0, 1, ... in set order.
SbcRewrite encode_all(const MultiContextSystem& m, const PermSet& perms, const AtomOrder& order,
                      const std::set<int>& targets = {});

/// apply_rewrite(m, encode_all(...)). Throws InvariantError on an
/// auxiliary name collision.
MultiContextSystem extend_mcs(const MultiContextSystem& m, const PermSet& perms, const AtomOrder& order,
                              const std::set<int>& targets = {});
MultiContextSystem apply_rewrite(const MultiContextSystem& m, const SbcRewrite& rewrite);

/// Drops auxiliary atoms; epsilon stays epsilon.
PartialBeliefState project_original(const PartialBeliefState& s, const MultiContextSystem& original);
StateSet project_original(const StateSet& states, const MultiContextSystem& original);

/// Truth values along the order; epsilon components read as false.
std::vector<bool> characteristic_vector(const PartialBeliefState& s, const AtomOrder& order);

/// Lexicographic vec(S) ≤ (truth of a_1^π, ..., a_m^π in S), which is
/// what pc(π) expresses.
bool lex_leq_image(const PartialBeliefState& s, const Permutation& p, const AtomOrder& order);

/// Per orbit under the generated group, the state with the least vector.
StateSet lex_leader_filter(const StateSet& states, const PermSet& perms, const AtomOrder& order,
                           std::size_t cap = default_closure_cap);

/// reduce_irredundant(gens), then the `budget` smallest supports.
PermSet select_breaking_set(const PermSet& gens, std::size_t budget, std::size_t cap = default_closure_cap);

/// The added kb/br sections per context in instance-file syntax.
std::string emit_sbc(const SbcRewrite& rewrite);

}  // namespace mcsym
