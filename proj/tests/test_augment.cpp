#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "ponzi/augment.hpp"
#include "ponzi/emit.hpp"
#include "ponzi/parser.hpp"
#include "ponzi/synthetic.hpp"

using namespace ponzi;

namespace {

std::vector<Token> code_tokens(const std::string& src) {
    std::vector<Token> out;
    for (const auto& t : tokenize(src))
        if (t.kind != TokenKind::Comment) out.push_back(t);
    return out;
}

// Alpha-equivalence of two token streams: equal except for a consistent
// bijection on identifier texts.
bool alpha_equivalent(const std::string& lhs, const std::string& rhs) {
    auto a = code_tokens(lhs);
    auto b = code_tokens(rhs);
    if (a.size() != b.size()) return false;
    std::map<std::string, std::string> fwd, bwd;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].kind != b[i].kind) return false;
        if (a[i].kind != TokenKind::Identifier) {
            if (a[i].text != b[i].text) return false;
            continue;
        }
        auto f = fwd.find(a[i].text);
        auto g = bwd.find(b[i].text);
        if (f == fwd.end() && g == bwd.end()) {
            fwd[a[i].text] = b[i].text;
            bwd[b[i].text] = a[i].text;
        } else if (f == fwd.end() || g == bwd.end() || f->second != b[i].text ||
                   g->second != a[i].text) {
            return false;
        }
    }
    return true;
}

int count_vardecl_stmts(const Stmt& stmt) {
    int n = 0;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BlockStmt>) {
                for (const auto& st : node.body) n += count_vardecl_stmts(*st);
            } else if constexpr (std::is_same_v<T, VarDeclStmt>) {
                n = 1;
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                n += count_vardecl_stmts(*node.then_branch);
                if (node.else_branch) n += count_vardecl_stmts(*node.else_branch);
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                n += count_vardecl_stmts(*node.body);  // init slot is not rewritable
            }
        },
        stmt.node);
    return n;
}

// Rewritable declarations: state variables + block-level locals.
int count_rewritable(const Ast& ast) {
    int n = 0;
    for (const auto& item : ast.items) {
        const auto* contract = std::get_if<ContractDef>(&item);
        if (!contract) continue;
        for (const auto& member : contract->members) {
            if (std::holds_alternative<VarDecl>(member)) ++n;
            if (const auto* fn = std::get_if<FunctionDef>(&member)) {
                if (fn->body) n += count_vardecl_stmts(*fn->body);
            }
        }
    }
    return n;
}

bool body_is_empty_or_single_return(const Stmt& body) {
    const auto& block = std::get<BlockStmt>(body.node);
    if (block.body.empty()) return true;
    return block.body.size() == 1 && std::holds_alternative<ReturnStmt>(block.body[0]->node);
}

}  // namespace

TEST_CASE("strong: fixed k=3 splits a declaration into numbered sub-variables") {
    Ast ast = parse_source("contract C { uint x = 5; function f() public returns (uint) { return x; } }");
    AugmentationConfig cfg;
    cfg.fixed_k = 3;
    Rng rng(1);
    Ast out = augment_strong(ast, cfg, rng);
    std::string emitted = emit(out);
    CHECK(emitted.find("uint x_1 = 5;") != std::string::npos);
    CHECK(emitted.find("uint x_2 = 0;") != std::string::npos);
    CHECK(emitted.find("uint x_3 = 0;") != std::string::npos);
    CHECK(emitted.find("return x_1;") != std::string::npos);
    CHECK(emitted.find("uint x ") == std::string::npos);  // original gone
}

TEST_CASE("strong: declaration count is the sum of per-variable k") {
    for (int i = 0; i < 10; ++i) {
        std::string src = i % 2 == 0 ? make_ponzi_contract(31, i) : make_benign_contract(31, i);
        Ast ast = parse_source(src);
        int rewritable = count_rewritable(ast);
        AugmentationConfig cfg;
        cfg.fixed_k = 4;
        Rng rng(9);
        Ast out = augment_strong(ast, cfg, rng);
        CHECK(count_rewritable(out) == 4 * rewritable);
        // Every view must reparse.
        CHECK_NOTHROW(parse_source(emit(out)));
    }
}

TEST_CASE("strong: random k draws stay in [k_min, k_max] and are seed-stable") {
    std::string src = make_ponzi_contract(8, 2);
    Ast ast = parse_source(src);
    AugmentationConfig cfg;
    cfg.fixed_k.reset();
    cfg.k_min = 2;
    cfg.k_max = 5;
    int base = count_rewritable(ast);
    Rng rng_a(42), rng_b(42), rng_c(43);
    std::string out_a = emit(augment_strong(ast, cfg, rng_a));
    std::string out_b = emit(augment_strong(ast, cfg, rng_b));
    std::string out_c = emit(augment_strong(ast, cfg, rng_c));
    CHECK(out_a == out_b);  // same seed, byte-identical
    int splits = count_rewritable(parse_source(out_a));
    CHECK(splits >= 2 * base);
    CHECK(splits <= 5 * base);
    CHECK(out_a != out_c);  // different seed moves at least one k draw
}

TEST_CASE("strong: contract with no variables passes through unchanged") {
    Ast ast = parse_source("contract C { function f() public { } }");
    AugmentationConfig cfg;
    Rng rng(7);
    Ast out = augment_strong(ast, cfg, rng);
    CHECK(ast_equal(ast, out));
}

TEST_CASE("strong: collision with an existing name gets extra suffixing") {
    Ast ast = parse_source("contract C { uint x = 1; uint x_1 = 2; }");
    AugmentationConfig cfg;
    cfg.fixed_k = 2;
    Rng rng(3);
    std::string emitted = emit(augment_strong(ast, cfg, rng));
    // x splits into x_1_ (x_1 taken) and x_2; x_1 splits into x_1_1, x_1_2.
    Ast reparsed = parse_source(emitted);
    CHECK(count_rewritable(reparsed) == 4);
    std::set<std::string> names;
    for (const auto& t : code_tokens(emitted))
        if (t.kind == TokenKind::Identifier) names.insert(t.text);
    CHECK(names.size() == 4 + 1);  // four variables + contract name C
}

TEST_CASE("medium: bodies collapse to a single type-appropriate return") {
    std::string src =
        "contract C {\n"
        "    uint total;\n"
        "    function f(uint a) public payable returns (bool) { total += a; return total > 0; }\n"
        "    function g() public { total = 1; }\n"
        "    function h() public view returns (uint) { return total * 2; }\n"
        "    function s() public returns (string) { return \"x\"; }\n"
        "    function addr() public returns (address) { return msg.sender; }\n"
        "}\n";
    Ast ast = parse_source(src);
    Ast out = augment_medium(ast);
    std::string emitted = emit(out);
    CHECK(emitted.find("function f(uint a) public payable returns (bool) {\n        return true;\n    }") != std::string::npos);
    CHECK(emitted.find("function g() public {\n    }") != std::string::npos);
    CHECK(emitted.find("return 0;") != std::string::npos);
    CHECK(emitted.find("return \"\";") != std::string::npos);
    CHECK(emitted.find("return address(0);") != std::string::npos);

    for (const auto& member : std::get<ContractDef>(out.items[0]).members) {
        if (const auto* fn = std::get_if<FunctionDef>(&member)) {
            REQUIRE(fn->body);
            CHECK(body_is_empty_or_single_return(*fn->body));
        }
    }
}

TEST_CASE("medium: contract with zero functions is unchanged") {
    Ast ast = parse_source("contract C { uint a = 1; }");
    CHECK(ast_equal(ast, augment_medium(ast)));
}

TEST_CASE("weak: renames declarations and uses consistently") {
    std::string src = "contract C { uint balance; function f() public { balance = 1; } }";
    Ast ast = parse_source(src);
    AugmentationConfig cfg;
    Rng rng(5);
    std::string emitted = emit(augment_weak(ast, cfg, rng));
    CHECK(emitted.find("balance") == std::string::npos);
    CHECK(emitted.find("v_") != std::string::npos);
    // Both occurrences renamed to the same fresh name.
    Ast out = parse_source(emitted);
    const auto& contract = std::get<ContractDef>(out.items[0]);
    const auto& var = std::get<VarDecl>(contract.members[0]);
    CHECK(emitted.find(var.name + " = 1;") != std::string::npos);
}

TEST_CASE("weak: alpha-equivalence to the input on the bundled corpus") {
    for (int i = 0; i < 20; ++i) {
        std::string src = i % 2 == 0 ? make_ponzi_contract(23, i) : make_benign_contract(23, i);
        // Compare against the canonical form so only the renaming differs.
        std::string canonical = emit(parse_source(src));
        Ast ast = parse_source(src);
        AugmentationConfig cfg;
        Rng rng(100 + static_cast<std::uint64_t>(i));
        std::string weakated = emit(augment_weak(ast, cfg, rng));
        CAPTURE(canonical);
        CAPTURE(weakated);
        CHECK(alpha_equivalent(canonical, weakated));
    }
}

TEST_CASE("weak: same seed gives identical renaming") {
    std::string src = make_benign_contract(6, 3);
    Ast ast = parse_source(src);
    AugmentationConfig cfg;
    Rng a(11), b(11);
    CHECK(emit(augment_weak(ast, cfg, a)) == emit(augment_weak(ast, cfg, b)));
}

TEST_CASE("make_views: closure, determinism, decorrelated view streams") {
    std::string src = make_ponzi_contract(77, 5);
    AugmentationConfig cfg;
    cfg.seed = 1234;
    AugmentedTriple t1 = make_views(src, cfg);
    AugmentedTriple t2 = make_views(src, cfg);

    CHECK_NOTHROW(parse_source(t1.strong.source));
    CHECK_NOTHROW(parse_source(t1.medium.source));
    CHECK_NOTHROW(parse_source(t1.weak.source));

    CHECK(t1.strong.source == t2.strong.source);
    CHECK(t1.medium.source == t2.medium.source);
    CHECK(t1.weak.source == t2.weak.source);

    // Different seeds decorrelate the weak renaming.
    AugmentationConfig other = cfg;
    other.seed = 99;
    AugmentedTriple t3 = make_views(src, other);
    CHECK(t1.weak.source != t3.weak.source);
}

TEST_CASE("make_views: empty contract yields three trivial views") {
    AugmentationConfig cfg;
    AugmentedTriple t = make_views("contract C {}", cfg);
    CHECK(t.strong.source == "contract C {\n}\n");
    CHECK(t.medium.source == "contract C {\n}\n");
    CHECK(t.weak.source == "contract C {\n}\n");
}

TEST_CASE("make_views: propagates parse errors") {
    AugmentationConfig cfg;
    CHECK_THROWS_AS(make_views("contract C { uint a = ; }", cfg), ParseError);
}
