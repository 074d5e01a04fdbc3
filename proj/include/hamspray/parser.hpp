#pragma once

#include <span>
#include <string_view>

#include "hamspray/expr.hpp"

namespace hamspray {

/// Parses infix text (`+ - * / ^`, unary minus, parentheses, calls to
/// sin/cos/exp/log/sqrt, decimal and rational literals) into a canonical
/// expression. Every identifier must appear in `alphabet`.
///
/// Throws SyntaxError (with the byte offset of the offending token) or
/// UnknownSymbol.
Expr parse(std::string_view src, std::span<const Symbol> alphabet);

}  // namespace hamspray
