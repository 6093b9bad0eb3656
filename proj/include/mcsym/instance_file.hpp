#pragma once

#include <string>
#include <string_view>

#include "mcsym/mcs.hpp"

namespace mcsym {

/// Section-per-context instance file:
///
///     mcs 3
///     context 1
///       atoms a b c
///       kb
///         c :- a, b, not c.
///       br
///         a :- not (2:d).
///
/// An optional `aux` line lists auxiliary atoms. `%` starts a comment.
/// Throws ParseError with a line number.
MultiContextSystem parse_mcs(std::string_view text);
MultiContextSystem load_mcs(const std::string& path);

std::string emit_bridge_rule(const BridgeRule& r);

/// Canonical text: atoms in declaration order, rule literals sorted, rules
/// in input order. `header` lines are written first as `%` comments.
std::string emit_mcs(const MultiContextSystem& m, const std::string& header = {});

}  // namespace mcsym
