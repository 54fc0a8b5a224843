#pragma once

#include "catmeas/boolalg.hpp"

#include <string_view>

namespace catmeas::cli {

/// Parses an element expression over the algebra's atoms.
///
///   expr   := term (('|' | '\') term)*
///   term   := factor ('&' factor)*
///   factor := '~' factor | '(' expr ')' | 'top' | 'bot' | '{' [id (',' id)*] '}' | id
///
/// Throws SyntaxError (with the column) on malformed text and
/// UnresolvedReference on an unknown atom.
Element parse_element(const BoolAlg& alg, std::string_view text);

}  // namespace catmeas::cli
