#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcsym/asp.hpp"
#include "mcsym/atom.hpp"
#include "mcsym/perm.hpp"

namespace mcsym {

/// head :- (c1:b1), ..., not (cm:bm).
/// Body atoms carry their source context (Atom::context).
struct BridgeRule {
    Atom head;
    AtomSet pos;
    AtomSet neg;

    AtomSet body_atoms() const;
    /// Head and body atoms.
    AtomSet atoms() const;

    auto operator<=>(const BridgeRule&) const = default;
    bool operator==(const BridgeRule&) const = default;
};

/// Context indices of the body are never remapped (they live in the atoms).
BridgeRule apply(const Permutation& p, const BridgeRule& r);
std::set<BridgeRule> apply(const Permutation& p, const std::set<BridgeRule>& rules);

/// An ASP context. `atoms` is the declared alphabet in declaration order;
/// `aux` holds auxiliary atoms added by symmetry-breaking rewrites.
struct Context {
    int id = 0;
    std::vector<Atom> atoms;
    AtomSet aux;
    Program kb;
    std::vector<BridgeRule> br;

    AtomSet alphabet() const { return {atoms.begin(), atoms.end()}; }
    AtomSet all_atoms() const;
    /// atom(br): heads and body atoms of all bridge rules.
    AtomSet bridge_atoms() const;
    /// Own atoms appearing in kb or br.
    AtomSet occurring() const;
    /// Own atoms that can be true in some belief set: kb atoms and bridge heads.
    AtomSet derivable() const;
    std::set<int> imports() const;
    std::set<BridgeRule> br_set() const { return {br.begin(), br.end()}; }
};

/// An ordered collection of contexts with ids 1..n. Immutable after
/// construction, which validates the structural invariants and throws
/// std::invalid_argument on violation.
class MultiContextSystem {
public:
    MultiContextSystem() = default;
    explicit MultiContextSystem(std::vector<Context> contexts);

    int size() const { return static_cast<int>(contexts_.size()); }
    const Context& context(int k) const { return contexts_.at(static_cast<std::size_t>(k - 1)); }
    const std::vector<Context>& contexts() const { return contexts_; }

    /// Union of declared alphabets (auxiliary atoms excluded).
    AtomSet alphabet() const;
    AtomSet all_atoms() const;

private:
    std::vector<Context> contexts_;
};

/// Component i-1 holds S_i; std::nullopt is the unknown value epsilon.
using PartialBeliefState = std::vector<std::optional<AtomSet>>;
using StateSet = std::set<PartialBeliefState>;

/// Componentwise image; epsilon stays epsilon.
PartialBeliefState apply(const Permutation& p, const PartialBeliefState& s);

/// `(\{b\},\{d\},eps)`-style rendering with bare atom names.
std::string format_state(const PartialBeliefState& s);

std::set<int> import_neighbourhood(const MultiContextSystem& m, int k);
std::set<int> import_closure(const MultiContextSystem& m, int k);
std::set<int> import_closure(const MultiContextSystem& m, const std::set<int>& roots);

class InsufficientBeliefState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws InsufficientBeliefState if a referenced component is epsilon.
bool applicable(const BridgeRule& r, const PartialBeliefState& s);

/// Heads of the bridge rules of context k that are applicable in s.
AtomSet applicable_heads(const MultiContextSystem& m, int k, const PartialBeliefState& s);

/// kb_k plus the given heads as facts.
Program local_program(const Context& c, const AtomSet& heads);

bool is_equilibrium(const MultiContextSystem& m, const PartialBeliefState& s);
bool is_partial_equilibrium(const MultiContextSystem& m, int k, const PartialBeliefState& s);

inline constexpr std::size_t default_state_bound = 20;

/// Exhaustive oracle: guesses the derivable original atoms of every context
/// in IC(k), settles auxiliary atoms by fixpoint, and keeps the candidates
/// accepted by is_partial_equilibrium. Throws BoundExceeded when more than
/// `bound` atoms would be guessed.
StateSet enumerate_partial_equilibria(const MultiContextSystem& m, int k, std::size_t bound = default_state_bound);
StateSet enumerate_equilibria(const MultiContextSystem& m, std::size_t bound = default_state_bound);

struct EvaluationOptions {
    /// Per joint guess over the import-cycle interface of one component.
    std::size_t interface_bound = 20;
    /// Occurring atoms per local program.
    std::size_t local_bound = default_asp_bound;
    bool parallel = true;
};

/// Per-context evaluation over the condensation of the import graph below
/// the roots. Components are solved jointly by guessing the atoms their
/// bridge rules read from each other; results travel as state sets.
StateSet evaluate_distributed(const MultiContextSystem& m, int k, const EvaluationOptions& opts = {});
StateSet evaluate_distributed(const MultiContextSystem& m, const std::set<int>& roots,
                              const EvaluationOptions& opts = {});
StateSet evaluate_equilibria(const MultiContextSystem& m, const EvaluationOptions& opts = {});

bool is_symmetry(const MultiContextSystem& m, const Permutation& p);
bool is_local_symmetry(const MultiContextSystem& m, int k, const Permutation& p);
bool is_partial_symmetry(const MultiContextSystem& m, const std::set<int>& contexts, const Permutation& p);

/// ∪ (A_i ∪ atom(br_i)) over the given contexts.
AtomSet partial_symmetry_domain(const MultiContextSystem& m, const std::set<int>& contexts);

/// All partial symmetries w.r.t. the given contexts by enumeration of the
/// alphabet-preserving permutations of their domain. Atoms of a context in
/// the set that do not occur in its kb or bridge rules are kept fixed.
/// Throws BoundExceeded when a context contributes more than `class_bound`
/// movable atoms.
PermSet brute_force_partial_symmetries(const MultiContextSystem& m, const std::set<int>& contexts,
                                       std::size_t class_bound = 8);

/// Closure of {s} under the given permutations.
StateSet orbit_of_states(const PermSet& perms, const PartialBeliefState& s);

}  // namespace mcsym
