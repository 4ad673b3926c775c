#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ponzi/token.hpp"

namespace ponzi {

// ---------------------------------------------------------------------------
// Type names
// ---------------------------------------------------------------------------

struct TypeName;
using TypeNamePtr = std::unique_ptr<TypeName>;

enum class TypeKind { Elementary, Named, Mapping, Array };

struct TypeName {
    TypeKind kind = TypeKind::Elementary;
    Span span;
    std::string name;          // Elementary / Named
    TypeNamePtr key, value;    // Mapping
    TypeNamePtr element;       // Array
    std::string array_length;  // Array; empty for dynamic

    TypeNamePtr clone() const;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

// How an identifier resolved. External names (msg, block, builtin functions,
// inherited symbols) are allowed and flagged rather than rejected.
enum class RefKind { Unresolved, Variable, Function, External };

struct IdentifierExpr {
    std::string name;
    RefKind ref = RefKind::Unresolved;
    int decl_id = -1;
};

struct LiteralExpr {
    std::string text;  // verbatim token text, quotes included for strings
};

struct BinaryExpr {
    std::string op;
    ExprPtr lhs, rhs;
};

struct UnaryExpr {
    std::string op;
    ExprPtr operand;
};

struct CallExpr {
    ExprPtr callee;
    std::vector<ExprPtr> args;
};

struct MemberExpr {
    ExprPtr object;
    std::string field;
};

struct IndexExpr {
    ExprPtr object;
    ExprPtr index;
};

struct Expr {
    Span span;
    std::variant<IdentifierExpr, LiteralExpr, BinaryExpr, UnaryExpr, CallExpr, MemberExpr,
                 IndexExpr>
        node;

    ExprPtr clone() const;
};

// ---------------------------------------------------------------------------
// Statements and declarations
// ---------------------------------------------------------------------------

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct VarDecl {
    TypeNamePtr type;
    std::vector<std::string> modifiers;  // visibility / location keywords, in order
    std::string name;
    ExprPtr init;  // may be null
    Span span;
    int decl_id = -1;

    VarDecl clone() const;
};

struct BlockStmt {
    std::vector<StmtPtr> body;
};

struct VarDeclStmt {
    VarDecl decl;
};

struct AssignStmt {
    std::string op;  // "=", "+=", "-=", "*=", "/=", "%="
    ExprPtr lhs, rhs;
};

struct ReturnStmt {
    ExprPtr value;  // may be null
};

struct IfStmt {
    ExprPtr cond;
    StmtPtr then_branch;
    StmtPtr else_branch;  // may be null
};

struct ForStmt {
    StmtPtr init;  // VarDeclStmt, AssignStmt or ExprStmt; may be null
    ExprPtr cond;  // may be null
    StmtPtr post;  // AssignStmt or ExprStmt without trailing ';'; may be null
    StmtPtr body;
};

struct RequireStmt {
    ExprPtr cond;
    ExprPtr message;  // may be null
};

struct ExprStmt {
    ExprPtr expr;
};

// Opaque run of tokens for constructs outside the subset (assembly, emit,
// events, ...). Never rewritten by augmentations; re-emitted verbatim.
struct RawStmt {
    std::vector<Token> tokens;
};

struct Stmt {
    Span span;
    std::variant<BlockStmt, VarDeclStmt, AssignStmt, ReturnStmt, IfStmt, ForStmt, RequireStmt,
                 ExprStmt, RawStmt>
        node;

    StmtPtr clone() const;
};

struct Param {
    TypeNamePtr type;
    std::vector<std::string> modifiers;  // memory/calldata/storage
    std::string name;  // may be empty (unnamed parameter)
    Span span;
    int decl_id = -1;

    Param clone() const;
};

struct FunctionDef {
    std::string name;  // "constructor" for constructors
    bool is_constructor = false;
    std::vector<Param> params;
    std::vector<std::string> modifiers;  // keyword and invocation modifiers, verbatim order
    TypeNamePtr return_type;             // may be null
    StmtPtr body;                        // Block; null for declarations ending in ';'
    Span span;
    int decl_id = -1;

    FunctionDef clone() const;
};

struct RawMember {
    std::vector<Token> tokens;
    Span span;
};

using ContractMember = std::variant<VarDecl, FunctionDef, RawMember>;

struct ContractDef {
    std::string name;
    std::vector<std::string> bases;  // names after "is"; bodies beyond names unsupported
    std::vector<ContractMember> members;
    Span span;

    ContractDef clone() const;
};

using SourceItem = std::variant<ContractDef, RawMember>;

struct Ast {
    std::vector<SourceItem> items;
    Span span;

    Ast clone() const;
};

// Structural equality, spans excluded. Resolution flags are also excluded so
// a freshly parsed tree compares equal to a re-resolved one.
bool ast_equal(const Ast& a, const Ast& b);
bool expr_equal(const Expr& a, const Expr& b);
bool stmt_equal(const Stmt& a, const Stmt& b);

// Renders an expression as compact text ("msg.sender.call"); used for
// external-callee naming and diagnostics.
std::string expr_to_text(const Expr& e);

}  // namespace ponzi
