#pragma once

#include <string>

#include "ponzi/ast.hpp"

namespace ponzi {

// Deterministic pretty-printer. The output reparses to a structurally
// identical tree (spans excluded); two calls on the same Ast are
// byte-identical. Comments never reach the Ast, so none are emitted.
std::string emit(const Ast& ast);

std::string emit_type(const TypeName& type);
std::string emit_expr(const Expr& expr);

}  // namespace ponzi
