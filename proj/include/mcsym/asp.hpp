#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mcsym/atom.hpp"
#include "mcsym/perm.hpp"

namespace mcsym {

/// h1 ; ... ; hl :- b1, ..., bj, not c1, ..., not cm.
/// An empty head makes the rule an integrity constraint.
struct Rule {
    AtomSet head;
    AtomSet pos;
    AtomSet neg;

    bool is_constraint() const { return head.empty(); }
    AtomSet atoms() const;

    auto operator<=>(const Rule&) const = default;
    bool operator==(const Rule&) const = default;
};

/// Rules keep insertion order; duplicates are dropped on insertion since a
/// program is a set of rules.
class Program {
public:
    Program() = default;
    explicit Program(AtomSet alphabet) : alphabet_(std::move(alphabet)) {}

    /// Adds the rule's atoms to the alphabet. Returns false for a duplicate.
    bool add(Rule r);

    const std::vector<Rule>& rules() const { return rules_; }
    const AtomSet& alphabet() const { return alphabet_; }
    void declare(const Atom& a) { alphabet_.insert(a); }

    AtomSet occurring_atoms() const;
    std::set<Rule> rule_set() const { return {rules_.begin(), rules_.end()}; }
    bool empty() const { return rules_.empty(); }

private:
    std::vector<Rule> rules_;
    AtomSet alphabet_;
};

Rule apply(const Permutation& p, const Rule& r);
std::set<Rule> apply(const Permutation& p, const std::set<Rule>& rules);

/// One rule per line of the rule grammar; `%` starts a comment. Bare names
/// are resolved against `alphabet`. Throws ParseError (with line/column) on
/// syntax errors and on undeclared atoms.
Program parse_program(std::string_view text, const AtomSet& alphabet);

/// `line_offset` is added to reported line numbers.
Rule parse_rule(std::string_view line, const AtomSet& alphabet, int line_no = 0);

std::string emit_rule(const Rule& r);
std::string emit_program(const Program& p);

/// Gelfond-Lifschitz reduct: drops rules blocked by X, strips negation.
Program reduct(const Program& p, const AtomSet& x);

/// Classical satisfaction of every rule (constraints included).
bool is_model(const Program& p, const AtomSet& x);

/// X is a model of P^X with no model of P^X strictly inside it.
bool is_answer_set(const Program& p, const AtomSet& x);

inline constexpr std::size_t default_asp_bound = 20;

/// All answer sets, by enumeration of subsets of the occurring atoms.
/// Throws BoundExceeded when more than `bound` atoms occur.
std::set<AtomSet> answer_sets(const Program& p, std::size_t bound = default_asp_bound);

struct StratifiedExtension {
    AtomSet atoms;                   // X plus every derived auxiliary atom
    std::vector<std::size_t> violated;  // indices of violated constraints in aux
    bool consistent() const { return violated.empty(); }
};

/// Extends X by the atoms derivable from `aux`, whose heads are single
/// atoms of `aux_atoms` (or empty). Auxiliary atoms must depend on each
/// other acyclically; atoms outside `aux_atoms` are read from X.
/// Throws InvariantError on a cyclic dependency or a non-auxiliary head.
StratifiedExtension extend_stratified(const AtomSet& x, const Program& aux, const AtomSet& aux_atoms);

/// Answer sets of a program whose rules split into a base part (no auxiliary
/// atoms) and an auxiliary part evaluated with extend_stratified. Only the
/// base atoms are guessed. Falls back to answer_sets when the split does not
/// apply.
std::set<AtomSet> answer_sets_split(const Program& p, const AtomSet& aux_atoms,
                                    std::size_t bound = default_asp_bound);

}  // namespace mcsym
