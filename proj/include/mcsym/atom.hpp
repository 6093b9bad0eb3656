#pragma once

#include <compare>
#include <ostream>
#include <set>
#include <string>

namespace mcsym {

// An atom of context `context` (1-based). Alphabets of distinct contexts are
// disjoint because the context id is part of the identity.
struct Atom {
    int context = 0;
    std::string name;

    auto operator<=>(const Atom&) const = default;
    bool operator==(const Atom&) const = default;
};

using AtomSet = std::set<Atom>;

/// `<context>.<name>`
inline std::string qualified(const Atom& a) { return std::to_string(a.context) + "." + a.name; }

inline std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << qualified(a); }

}  // namespace mcsym
