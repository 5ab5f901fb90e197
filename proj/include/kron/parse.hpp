#pragma once

#include <map>
#include <string>
#include <vector>

#include "kron/poly.hpp"

namespace kron {

/// Parses the plain-text expression grammar (see docs/grammar.md):
///
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*      division by constants only
///   factor := atom ('^' INT)*
///   atom   := RATIONAL | IDENT | '(' expr ')' | ('sin'|'cos') '(' arg ')'
///   arg    := ['-'] sterm (('+'|'-') sterm)*  with sterm := [INT '*'] IDENT
///
/// Identifiers resolve against the coordinate context first, then against
/// `env` (named sub-expressions and constants). Unknown names, kind clashes
/// and division by non-constants fail with Error(ParseError).
PolyExpr parse_expr(const std::string& text, const std::vector<Var>& context,
                    const std::map<std::string, PolyExpr>& env = {});

/// Parses "name = expr".
std::pair<std::string, PolyExpr> parse_definition(
    const std::string& text, const std::vector<Var>& context,
    const std::map<std::string, PolyExpr>& env = {});

/// Canonical rendering; parse(print(f)) == f exactly.
std::string print_expr(const PolyExpr& f);

}  // namespace kron
