#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ponzi/emit.hpp"
#include "ponzi/parser.hpp"
#include "ponzi/resolve.hpp"
#include "ponzi/synthetic.hpp"

using namespace ponzi;

namespace {

std::vector<Token> code_tokens(const std::string& src) {
    std::vector<Token> out;
    for (const auto& t : tokenize(src))
        if (t.kind != TokenKind::Comment) out.push_back(t);
    return out;
}

void check_span_containment(const Stmt& stmt, Span parent);

void check_span_containment(const Expr& e, Span parent) {
    CHECK(parent.contains(e.span));
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BinaryExpr>) {
                check_span_containment(*node.lhs, e.span);
                check_span_containment(*node.rhs, e.span);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                check_span_containment(*node.operand, e.span);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                check_span_containment(*node.callee, e.span);
                for (const auto& a : node.args) check_span_containment(*a, e.span);
            } else if constexpr (std::is_same_v<T, MemberExpr>) {
                check_span_containment(*node.object, e.span);
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                check_span_containment(*node.object, e.span);
                check_span_containment(*node.index, e.span);
            }
        },
        e.node);
}

void check_span_containment(const Stmt& stmt, Span parent) {
    CHECK(parent.contains(stmt.span));
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BlockStmt>) {
                for (const auto& st : node.body) check_span_containment(*st, stmt.span);
            } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                if (node.decl.init) check_span_containment(*node.decl.init, stmt.span);
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
                check_span_containment(*node.lhs, stmt.span);
                check_span_containment(*node.rhs, stmt.span);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                if (node.value) check_span_containment(*node.value, stmt.span);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                check_span_containment(*node.cond, stmt.span);
                check_span_containment(*node.then_branch, stmt.span);
                if (node.else_branch) check_span_containment(*node.else_branch, stmt.span);
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                if (node.init) check_span_containment(*node.init, stmt.span);
                if (node.cond) check_span_containment(*node.cond, stmt.span);
                if (node.post) check_span_containment(*node.post, stmt.span);
                check_span_containment(*node.body, stmt.span);
            } else if constexpr (std::is_same_v<T, RequireStmt>) {
                check_span_containment(*node.cond, stmt.span);
                if (node.message) check_span_containment(*node.message, stmt.span);
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                check_span_containment(*node.expr, stmt.span);
            }
        },
        stmt.node);
}

int count_unresolved(const Expr& e) {
    int n = 0;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, IdentifierExpr>) {
                if (node.ref == RefKind::Unresolved) ++n;
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                n += count_unresolved(*node.lhs) + count_unresolved(*node.rhs);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                n += count_unresolved(*node.operand);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                n += count_unresolved(*node.callee);
                for (const auto& a : node.args) n += count_unresolved(*a);
            } else if constexpr (std::is_same_v<T, MemberExpr>) {
                n += count_unresolved(*node.object);
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                n += count_unresolved(*node.object) + count_unresolved(*node.index);
            }
        },
        e.node);
    return n;
}

}  // namespace

TEST_CASE("tokenize: smallest declaration") {
    auto tokens = tokenize("uint x;");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0].kind == TokenKind::Keyword);
    CHECK(tokens[0].text == "uint");
    CHECK(tokens[1].kind == TokenKind::Identifier);
    CHECK(tokens[1].text == "x");
    CHECK(tokens[2].kind == TokenKind::Punct);
    CHECK(tokens[2].text == ";");
}

TEST_CASE("tokenize: empty input") { CHECK(tokenize("").empty()); }

TEST_CASE("tokenize: non-comment token count of a one-function contract") {
    // Hand-lex: contract C { function f ( ) public returns ( bool ) {
    // return true ; } } -> 18 tokens.
    auto tokens = code_tokens(
        "contract C { function f() public returns (bool) { return true; } }");
    CHECK(tokens.size() == 18);
}

TEST_CASE("tokenize: whitespace reconstruction recovers the source") {
    std::string src = "contract C {\n  // pays out\n  uint a = 1;  /* block */ uint b;\n}\n";
    auto tokens = tokenize(src);
    std::string rebuilt;
    std::size_t cursor = 0;
    for (const auto& t : tokens) {
        rebuilt += src.substr(cursor, t.span.begin - cursor);
        CHECK(src.substr(t.span.begin, t.span.end - t.span.begin) == t.text);
        rebuilt += t.text;
        cursor = t.span.end;
    }
    rebuilt += src.substr(cursor);
    CHECK(rebuilt == src);
}

TEST_CASE("tokenize: spans are monotone and non-overlapping") {
    auto tokens = tokenize(make_ponzi_contract(3, 0));
    for (std::size_t i = 1; i < tokens.size(); ++i)
        CHECK(tokens[i - 1].span.end <= tokens[i].span.begin);
}

TEST_CASE("tokenize: lex errors carry spans") {
    CHECK_THROWS_AS(tokenize("uint a = \"oops"), LexError);
    CHECK_THROWS_AS(tokenize("uint `a;"), LexError);
    CHECK_THROWS_AS(tokenize("/* never closed"), LexError);
}

TEST_CASE("parse: empty contract") {
    Ast ast = parse_source("contract C {}");
    REQUIRE(ast.items.size() == 1);
    const auto& contract = std::get<ContractDef>(ast.items[0]);
    CHECK(contract.name == "C");
    CHECK(contract.members.empty());
}

TEST_CASE("parse: state variable with initializer") {
    Ast ast = parse_source("contract C { uint a = 1; }");
    const auto& contract = std::get<ContractDef>(ast.items[0]);
    REQUIRE(contract.members.size() == 1);
    const auto& var = std::get<VarDecl>(contract.members[0]);
    CHECK(var.name == "a");
    CHECK(var.type->name == "uint");
    REQUIRE(var.init);
    CHECK(std::get<LiteralExpr>(var.init->node).text == "1");
}

TEST_CASE("parse: missing initializer expression fails with expected/found") {
    try {
        parse_source("contract C { uint a = ; }");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.expected == "expression");
        CHECK(e.found == ";");
    }
}

TEST_CASE("parse: pragma is ignored") {
    Ast ast = parse_source("pragma solidity ^0.8.0;\ncontract C {}");
    CHECK(ast.items.size() == 1);
}

TEST_CASE("parse: unsupported members and statements become raw nodes") {
    std::string src =
        "contract C {\n"
        "    event Paid(address who);\n"
        "    struct Entry { uint a; }\n"
        "    modifier onlyOwner() { _; }\n"
        "    function f() public {\n"
        "        assembly { let x := 0 }\n"
        "        emit Paid(msg.sender);\n"
        "    }\n"
        "}\n";
    Ast ast = parse_source(src);
    const auto& contract = std::get<ContractDef>(ast.items[0]);
    REQUIRE(contract.members.size() == 4);
    CHECK(std::holds_alternative<RawMember>(contract.members[0]));
    CHECK(std::holds_alternative<RawMember>(contract.members[1]));
    CHECK(std::holds_alternative<RawMember>(contract.members[2]));
    const auto& fn = std::get<FunctionDef>(contract.members[3]);
    const auto& body = std::get<BlockStmt>(fn.body->node);
    REQUIRE(body.body.size() == 2);
    CHECK(std::holds_alternative<RawStmt>(body.body[0]->node));
    CHECK(std::holds_alternative<RawStmt>(body.body[1]->node));
}

TEST_CASE("parse: every identifier resolves or is flagged external") {
    std::string src = make_ponzi_contract(11, 4);
    Ast ast = parse_source(src);
    for (const auto& item : ast.items) {
        const auto* contract = std::get_if<ContractDef>(&item);
        if (!contract) continue;
        for (const auto& member : contract->members) {
            if (const auto* var = std::get_if<VarDecl>(&member)) {
                if (var->init) CHECK(count_unresolved(*var->init) == 0);
            }
        }
    }
}

TEST_CASE("parse: shadowing resolves to the innermost declaration") {
    std::string src =
        "contract C {\n"
        "    uint x = 1;\n"
        "    function f(uint x) public returns (uint) {\n"
        "        return x;\n"
        "    }\n"
        "}\n";
    Ast ast = parse_source(src);
    auto& contract = std::get<ContractDef>(ast.items[0]);
    const auto& var = std::get<VarDecl>(contract.members[0]);
    const auto& fn = std::get<FunctionDef>(contract.members[1]);
    const auto& ret = std::get<ReturnStmt>(std::get<BlockStmt>(fn.body->node).body[0]->node);
    const auto& id = std::get<IdentifierExpr>(ret.value->node);
    CHECK(id.ref == RefKind::Variable);
    CHECK(id.decl_id == fn.params[0].decl_id);
    CHECK(id.decl_id != var.decl_id);
}

TEST_CASE("emit: canonical empty contract") {
    Ast ast = parse_source("contract   C   {   }");
    CHECK(emit(ast) == "contract C {\n}\n");
}

TEST_CASE("emit: deterministic byte-for-byte") {
    Ast ast = parse_source(make_benign_contract(5, 1));
    CHECK(emit(ast) == emit(ast));
}

TEST_CASE("roundtrip and span coverage over the bundled corpus") {
    for (int i = 0; i < 40; ++i) {
        std::string src = i % 2 == 0 ? make_ponzi_contract(17, i) : make_benign_contract(17, i);
        CAPTURE(src);
        Ast ast = parse_source(src);
        std::string emitted = emit(ast);
        Ast reparsed = parse_source(emitted);
        CHECK(ast_equal(ast, reparsed));
        CHECK(emit(reparsed) == emitted);

        for (const auto& item : ast.items) {
            const auto* contract = std::get_if<ContractDef>(&item);
            if (!contract) continue;
            for (const auto& member : contract->members) {
                if (const auto* fn = std::get_if<FunctionDef>(&member)) {
                    if (fn->body) check_span_containment(*fn->body, fn->span);
                    CHECK(contract->span.contains(fn->span));
                } else if (const auto* var = std::get_if<VarDecl>(&member)) {
                    CHECK(contract->span.contains(var->span));
                }
            }
        }
    }
}

TEST_CASE("roundtrip: tricky expressions survive") {
    std::string src =
        "contract C {\n"
        "    uint a = (1 + 2) * 3;\n"
        "    uint b = 1 + 2 * 3;\n"
        "    uint c = 2 ** 3 ** 2;\n"
        "    bool d = !(true && false) || true;\n"
        "    uint e = a - (b - c);\n"
        "    int f = -(1 - 2);\n"
        "    function g(uint x) public returns (uint) {\n"
        "        if (x > 1)\n"
        "            x = x - 1;\n"
        "        else if (x == 0) {\n"
        "            x = 1;\n"
        "        }\n"
        "        for (uint i = 0; i < x; i += 1) x = x + i;\n"
        "        return x % 7;\n"
        "    }\n"
        "}\n";
    Ast ast = parse_source(src);
    Ast reparsed = parse_source(emit(ast));
    CHECK(ast_equal(ast, reparsed));
}

TEST_CASE("parse failures never loop: malformed inputs raise exactly one error") {
    const char* bad[] = {
        "contract",
        "contract C { function }",
        "contract C { uint a = ; }",
        "contract C { function f( { } }",
        "contract C { mapping(uint => ) m; }",
    };
    for (const char* src : bad) {
        CAPTURE(src);
        CHECK_THROWS_AS(parse_source(src), ParseError);
    }
}
