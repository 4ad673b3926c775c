#pragma once

#include <string>
#include <vector>

#include "ponzi/ast.hpp"
#include "ponzi/token.hpp"

namespace ponzi {

// Parses a token stream (from tokenize) into an Ast. Comments are skipped.
// Recognized constructs parse strictly and report the first failure as a
// ParseError; unrecognized constructs (assembly, events, structs, ...) are
// captured as opaque raw nodes so real contracts still flow through.
// The returned tree has identifier references resolved (see resolve.hpp).
Ast parse(const std::vector<Token>& tokens);

// Convenience: tokenize + parse.
Ast parse_source(const std::string& source);

}  // namespace ponzi
