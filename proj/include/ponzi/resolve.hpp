#pragma once

#include <string>
#include <vector>

#include "ponzi/ast.hpp"

namespace ponzi {

enum class DeclCat { StateVar, Parameter, Local, Function };

struct DeclInfo {
    int id = -1;
    std::string name;
    DeclCat cat = DeclCat::Local;
    Span span;
    int contract_index = -1;
    int function_decl_id = -1;  // enclosing function for params/locals, else -1
};

struct DeclTable {
    std::vector<DeclInfo> decls;  // index == id

    const DeclInfo& by_id(int id) const { return decls.at(static_cast<std::size_t>(id)); }
};

// Assigns decl_ids to every declaration and resolves each IdentifierExpr to a
// variable, parameter or function, or flags it external. Scoping: locals and
// parameters shadow state variables and functions; locals are visible from
// their declaration to the end of the enclosing block; state variables and
// functions are visible anywhere in their contract.
DeclTable resolve(Ast& ast);

}  // namespace ponzi
