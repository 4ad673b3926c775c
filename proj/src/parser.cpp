#include "ponzi/parser.hpp"

#include <unordered_set>

#include "ponzi/resolve.hpp"

namespace ponzi {

namespace {

const std::unordered_set<std::string>& function_modifier_keywords() {
    static const std::unordered_set<std::string> kw = {
        "public", "private",   "internal", "external", "view",    "pure",
        "payable", "constant", "virtual",  "override",
    };
    return kw;
}

const std::unordered_set<std::string>& var_modifier_keywords() {
    static const std::unordered_set<std::string> kw = {
        "public", "private", "internal", "constant", "immutable",
        "memory", "storage", "calldata",
    };
    return kw;
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& all_tokens) {
        for (const auto& t : all_tokens)
            if (t.kind != TokenKind::Comment) tokens_.push_back(t);
    }

    Ast parse_unit() {
        Ast ast;
        while (!at_end()) {
            if (check_keyword("pragma")) {
                skip_to_semicolon();
            } else if (check_keyword("contract")) {
                ast.items.emplace_back(parse_contract());
            } else {
                // import, interface, library, top-level comments-free odds
                // and ends: opaque.
                ast.items.emplace_back(parse_raw_member());
            }
        }
        ast.span = Span{0, tokens_.empty() ? 0 : tokens_.back().span.end};
        return ast;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

    // -- token cursor -------------------------------------------------------

    bool at_end() const { return pos_ >= tokens_.size(); }

    const Token& peek(std::size_t ahead = 0) const {
        static const Token eof{TokenKind::Punct, "<end of input>",
                               Span{static_cast<std::size_t>(-1), static_cast<std::size_t>(-1)}};
        return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : eof;
    }

    const Token& advance() {
        const Token& t = peek();
        if (!at_end()) ++pos_;
        return t;
    }

    bool check(const std::string& text) const { return !at_end() && peek().text == text; }

    bool check_keyword(const std::string& text) const {
        return !at_end() && peek().kind == TokenKind::Keyword && peek().text == text;
    }

    bool match(const std::string& text) {
        if (!check(text)) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        Span sp = at_end() && !tokens_.empty()
                      ? Span{tokens_.back().span.end, tokens_.back().span.end}
                      : t.span;
        throw ParseError(sp, expected, at_end() ? "<end of input>" : t.text);
    }

    const Token& expect(const std::string& text) {
        if (!check(text)) fail("'" + text + "'");
        return advance();
    }

    std::string expect_identifier(const char* what) {
        if (at_end() || peek().kind != TokenKind::Identifier) fail(what);
        return advance().text;
    }

    void skip_to_semicolon() {
        while (!at_end() && !check(";")) advance();
        if (!at_end()) advance();
    }

    // -- raw capture --------------------------------------------------------

    // Consumes a balanced run of tokens for an unrecognized construct. Stops
    // after a ';' at depth zero, or after a '{...}' block opened at depth
    // zero closes (with an optional trailing ';'). A '}' at depth zero ends
    // the run without being consumed so enclosing blocks stay balanced.
    std::vector<Token> capture_raw() {
        std::vector<Token> raw;
        int paren = 0, bracket = 0, brace = 0;
        bool saw_any = false;
        while (!at_end()) {
            const std::string& t = peek().text;
            if (brace == 0 && paren == 0 && bracket == 0) {
                if (t == "}") break;
                if (t == ";") {
                    raw.push_back(advance());
                    return raw;
                }
            }
            if (t == "(") ++paren;
            else if (t == ")") --paren;
            else if (t == "[") ++bracket;
            else if (t == "]") --bracket;
            else if (t == "{") ++brace;
            else if (t == "}") {
                --brace;
                raw.push_back(advance());
                if (brace == 0 && paren == 0 && bracket == 0) {
                    if (check(";")) raw.push_back(advance());
                    return raw;
                }
                saw_any = true;
                continue;
            }
            raw.push_back(advance());
            saw_any = true;
        }
        if (raw.empty() || brace != 0 || paren != 0 || bracket != 0)
            fail(saw_any ? "balanced construct" : "declaration");
        return raw;
    }

    RawMember parse_raw_member() {
        RawMember r;
        std::size_t begin = peek().span.begin;
        r.tokens = capture_raw();
        r.span = Span{begin, r.tokens.back().span.end};
        return r;
    }

    // -- contracts ----------------------------------------------------------

    ContractDef parse_contract() {
        ContractDef c;
        std::size_t begin = peek().span.begin;
        expect("contract");
        c.name = expect_identifier("contract name");
        if (match("is")) {
            c.bases.push_back(expect_identifier("base contract name"));
            while (match(",")) c.bases.push_back(expect_identifier("base contract name"));
        }
        expect("{");
        while (!at_end() && !check("}")) c.members.push_back(parse_member());
        const Token& close = at_end() ? peek() : advance();
        if (close.text != "}") fail("'}'");
        c.span = Span{begin, close.span.end};
        return c;
    }

    ContractMember parse_member() {
        if (check_keyword("function") || check_keyword("constructor")) return parse_function();
        if (starts_type()) return parse_state_var();
        return parse_raw_member();
    }

    // A type can start with an elementary keyword, "mapping", or an
    // identifier followed by another identifier / array brackets (named
    // user type in declaration position).
    bool starts_type() const {
        const Token& t = peek();
        if (t.kind == TokenKind::Keyword &&
            (is_elementary_type_name(t.text) || t.text == "mapping"))
            return true;
        if (t.kind == TokenKind::Identifier) {
            std::size_t j = 1;
            if (peek(j).text == "[") {
                int depth = 0;
                while (pos_ + j < tokens_.size()) {
                    const std::string& s = peek(j).text;
                    if (s == "[") ++depth;
                    else if (s == "]") {
                        --depth;
                        if (depth == 0) {
                            ++j;
                            break;
                        }
                    }
                    ++j;
                }
            }
            while (peek(j).kind == TokenKind::Keyword && var_modifier_keywords().count(peek(j).text))
                ++j;
            return peek(j).kind == TokenKind::Identifier;
        }
        return false;
    }

    TypeNamePtr parse_type() {
        auto t = std::make_unique<TypeName>();
        std::size_t begin = peek().span.begin;
        if (check_keyword("mapping")) {
            advance();
            expect("(");
            t->kind = TypeKind::Mapping;
            t->key = parse_type();
            expect("=>");
            t->value = parse_type();
            expect(")");
        } else if (!at_end() && peek().kind == TokenKind::Keyword &&
                   is_elementary_type_name(peek().text)) {
            t->kind = TypeKind::Elementary;
            t->name = advance().text;
        } else if (!at_end() && peek().kind == TokenKind::Identifier) {
            t->kind = TypeKind::Named;
            t->name = advance().text;
        } else {
            fail("type name");
        }
        t->span = Span{begin, tokens_[pos_ - 1].span.end};
        while (check("[")) {
            advance();
            auto arr = std::make_unique<TypeName>();
            arr->kind = TypeKind::Array;
            if (!check("]")) {
                if (at_end() || peek().kind != TokenKind::Number) fail("array length");
                arr->array_length = advance().text;
            }
            const Token& close = expect("]");
            arr->element = std::move(t);
            arr->span = Span{begin, close.span.end};
            t = std::move(arr);
        }
        return t;
    }

    VarDecl parse_var_decl_core(bool is_state) {
        VarDecl d;
        std::size_t begin = peek().span.begin;
        d.type = parse_type();
        while (!at_end() && peek().kind == TokenKind::Keyword &&
               var_modifier_keywords().count(peek().text)) {
            if (!is_state && (peek().text == "public" || peek().text == "private" ||
                              peek().text == "internal"))
                break;
            d.modifiers.push_back(advance().text);
        }
        d.name = expect_identifier("variable name");
        if (match("=")) d.init = parse_expression();
        const Token& close = expect(";");
        d.span = Span{begin, close.span.end};
        return d;
    }

    ContractMember parse_state_var() { return parse_var_decl_core(true); }

    FunctionDef parse_function() {
        FunctionDef f;
        std::size_t begin = peek().span.begin;
        if (check_keyword("constructor")) {
            advance();
            f.is_constructor = true;
            f.name = "constructor";
        } else {
            expect("function");
            f.name = expect_identifier("function name");
        }
        expect("(");
        if (!check(")")) {
            f.params.push_back(parse_param());
            while (match(",")) f.params.push_back(parse_param());
        }
        expect(")");
        // Modifiers: bare keywords, or identifier modifiers with optional
        // argument lists, preserved as verbatim text.
        while (!at_end() && !check("{") && !check(";") && !check_keyword("returns")) {
            const Token& t = peek();
            if (t.kind == TokenKind::Keyword && function_modifier_keywords().count(t.text)) {
                f.modifiers.push_back(advance().text);
            } else if (t.kind == TokenKind::Identifier) {
                std::string text = advance().text;
                if (check("(")) {
                    // Invocation-style modifier: capture the balanced argument
                    // list verbatim. Word-like neighbors get a separating
                    // space so the text re-lexes to the same token stream.
                    auto word_like = [](const Token& tok) {
                        return tok.kind == TokenKind::Identifier ||
                               tok.kind == TokenKind::Keyword || tok.kind == TokenKind::Number;
                    };
                    int depth = 0;
                    bool prev_word = false;
                    do {
                        const Token& inner = advance();
                        if (prev_word && word_like(inner)) text += ' ';
                        text += inner.text;
                        prev_word = word_like(inner);
                        if (inner.text == "(") ++depth;
                        else if (inner.text == ")") --depth;
                    } while (!at_end() && depth > 0);
                    if (depth != 0) fail("')' closing modifier arguments");
                }
                f.modifiers.push_back(std::move(text));
            } else {
                fail("modifier, 'returns', or function body");
            }
        }
        if (match("returns")) {
            expect("(");
            f.return_type = parse_type();
            expect(")");
        }
        if (match(";")) {
            f.span = Span{begin, tokens_[pos_ - 1].span.end};
            return f;
        }
        f.body = parse_block();
        f.span = Span{begin, f.body->span.end};
        return f;
    }

    Param parse_param() {
        Param p;
        std::size_t begin = peek().span.begin;
        p.type = parse_type();
        while (!at_end() && peek().kind == TokenKind::Keyword &&
               (peek().text == "memory" || peek().text == "storage" || peek().text == "calldata")) {
            p.modifiers.push_back(advance().text);
        }
        if (!at_end() && peek().kind == TokenKind::Identifier) p.name = advance().text;
        p.span = Span{begin, tokens_[pos_ - 1].span.end};
        return p;
    }

    // -- statements ----------------------------------------------------------

    StmtPtr parse_block() {
        auto s = std::make_unique<Stmt>();
        std::size_t begin = peek().span.begin;
        expect("{");
        BlockStmt block;
        while (!at_end() && !check("}")) block.body.push_back(parse_statement());
        const Token& close = expect("}");
        s->span = Span{begin, close.span.end};
        s->node = std::move(block);
        return s;
    }

    StmtPtr parse_statement() {
        if (check("{")) return parse_block();
        if (check_keyword("return")) return parse_return();
        if (check_keyword("if")) return parse_if();
        if (check_keyword("for")) return parse_for();
        if (check_keyword("require")) return parse_require();
        if (starts_type() || check_keyword("mapping")) {
            auto s = std::make_unique<Stmt>();
            VarDecl d = parse_var_decl_core(false);
            s->span = d.span;
            s->node = VarDeclStmt{std::move(d)};
            return s;
        }
        if (!at_end() && (peek().kind == TokenKind::Identifier ||
                          peek().kind == TokenKind::Number ||
                          peek().kind == TokenKind::String || check("(") ||
                          check("!") || check("-") || check("+") || check("~") ||
                          check_keyword("true") || check_keyword("false") ||
                          check_keyword("payable") ||
                          (peek().kind == TokenKind::Keyword &&
                           is_elementary_type_name(peek().text)))) {
            return parse_expr_or_assign_statement();
        }
        // Anything else (assembly, emit, while, ...) is outside the subset.
        auto s = std::make_unique<Stmt>();
        std::size_t begin = peek().span.begin;
        RawStmt raw{capture_raw()};
        s->span = Span{begin, raw.tokens.back().span.end};
        s->node = std::move(raw);
        return s;
    }

    StmtPtr parse_return() {
        auto s = std::make_unique<Stmt>();
        std::size_t begin = peek().span.begin;
        expect("return");
        ReturnStmt r;
        if (!check(";")) r.value = parse_expression();
        const Token& close = expect(";");
        s->span = Span{begin, close.span.end};
        s->node = std::move(r);
        return s;
    }

    StmtPtr parse_if() {
        auto s = std::make_unique<Stmt>();
        std::size_t begin = peek().span.begin;
        expect("if");
        expect("(");
        IfStmt node;
        node.cond = parse_expression();
        expect(")");
        node.then_branch = parse_statement();
        std::size_t end = node.then_branch->span.end;
        if (match("else")) {
            node.else_branch = parse_statement();
            end = node.else_branch->span.end;
        }
        s->span = Span{begin, end};
        s->node = std::move(node);
        return s;
    }

    StmtPtr parse_for() {
        auto s = std::make_unique<Stmt>();
        std::size_t begin = peek().span.begin;
        expect("for");
        expect("(");
        ForStmt node;
        if (!match(";")) {
            if (starts_type()) {
                auto init = std::make_unique<Stmt>();
                VarDecl d = parse_var_decl_core(false);  // consumes ';'
                init->span = d.span;
                init->node = VarDeclStmt{std::move(d)};
                node.init = std::move(init);
            } else {
                node.init = parse_simple_expr_statement(false);
                expect(";");
            }
        }
        if (!check(";")) node.cond = parse_expression();
        expect(";");
        if (!check(")")) node.post = parse_simple_expr_statement(false);
        expect(")");
        node.body = parse_statement();
        s->span = Span{begin, node.body->span.end};
        s->node = std::move(node);
        return s;
    }

    StmtPtr parse_require() {
        auto s = std::make_unique<Stmt>();
        std::size_t begin = peek().span.begin;
        expect("require");
        expect("(");
        RequireStmt node;
        node.cond = parse_expression();
        if (match(",")) node.message = parse_expression();
        expect(")");
        const Token& close = expect(";");
        s->span = Span{begin, close.span.end};
        s->node = std::move(node);
        return s;
    }

    // Expression or assignment without trailing ';' (for-loop slots), or with
    // it (statement position).
    StmtPtr parse_simple_expr_statement(bool expect_semicolon) {
        auto s = std::make_unique<Stmt>();
        std::size_t begin = peek().span.begin;
        ExprPtr lhs = parse_expression();
        static const std::unordered_set<std::string> assign_ops = {"=", "+=", "-=", "*=", "/=", "%="};
        if (!at_end() && assign_ops.count(peek().text)) {
            std::string op = advance().text;
            if (!std::holds_alternative<IdentifierExpr>(lhs->node) &&
                !std::holds_alternative<MemberExpr>(lhs->node) &&
                !std::holds_alternative<IndexExpr>(lhs->node)) {
                throw ParseError(lhs->span, "assignable expression", expr_to_text(*lhs));
            }
            AssignStmt node;
            node.op = std::move(op);
            node.lhs = std::move(lhs);
            node.rhs = parse_expression();
            std::size_t end = node.rhs->span.end;
            if (expect_semicolon) end = expect(";").span.end;
            s->span = Span{begin, end};
            s->node = std::move(node);
            return s;
        }
        ExprStmt node{std::move(lhs)};
        std::size_t end = node.expr->span.end;
        if (expect_semicolon) end = expect(";").span.end;
        s->span = Span{begin, end};
        s->node = std::move(node);
        return s;
    }

    StmtPtr parse_expr_or_assign_statement() { return parse_simple_expr_statement(true); }

    // -- expressions ---------------------------------------------------------

    ExprPtr parse_expression() { return parse_binary(0); }

    // Precedence table, lowest first.
    static int binary_precedence(const std::string& op) {
        if (op == "||") return 1;
        if (op == "&&") return 2;
        if (op == "|") return 3;
        if (op == "^") return 4;
        if (op == "&") return 5;
        if (op == "==" || op == "!=") return 6;
        if (op == "<" || op == ">" || op == "<=" || op == ">=") return 7;
        if (op == "<<" || op == ">>") return 8;
        if (op == "+" || op == "-") return 9;
        if (op == "*" || op == "/" || op == "%") return 10;
        if (op == "**") return 11;
        return -1;
    }

    ExprPtr parse_binary(int min_prec) {
        ExprPtr lhs = parse_unary();
        while (!at_end()) {
            int prec = binary_precedence(peek().text);
            if (prec < 0 || prec < min_prec) break;
            std::string op = advance().text;
            // ** is right-associative; everything else is left-associative.
            ExprPtr rhs = parse_binary(op == "**" ? prec : prec + 1);
            auto e = std::make_unique<Expr>();
            e->span = Span{lhs->span.begin, rhs->span.end};
            e->node = BinaryExpr{std::move(op), std::move(lhs), std::move(rhs)};
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (check("!") || check("-") || check("+") || check("~")) {
            std::size_t begin = peek().span.begin;
            std::string op = advance().text;
            ExprPtr operand = parse_unary();
            auto e = std::make_unique<Expr>();
            e->span = Span{begin, operand->span.end};
            e->node = UnaryExpr{std::move(op), std::move(operand)};
            return e;
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (!at_end()) {
            if (check("(")) {
                std::size_t begin = e->span.begin;
                advance();
                CallExpr call;
                call.callee = std::move(e);
                if (!check(")")) {
                    call.args.push_back(parse_expression());
                    while (match(",")) call.args.push_back(parse_expression());
                }
                const Token& close = expect(")");
                e = std::make_unique<Expr>();
                e->span = Span{begin, close.span.end};
                e->node = std::move(call);
            } else if (check(".")) {
                std::size_t begin = e->span.begin;
                advance();
                if (at_end() ||
                    (peek().kind != TokenKind::Identifier && peek().kind != TokenKind::Keyword))
                    fail("member name");
                const Token& field = advance();
                MemberExpr mem;
                mem.object = std::move(e);
                mem.field = field.text;
                e = std::make_unique<Expr>();
                e->span = Span{begin, field.span.end};
                e->node = std::move(mem);
            } else if (check("[")) {
                std::size_t begin = e->span.begin;
                advance();
                IndexExpr idx;
                idx.object = std::move(e);
                idx.index = parse_expression();
                const Token& close = expect("]");
                e = std::make_unique<Expr>();
                e->span = Span{begin, close.span.end};
                e->node = std::move(idx);
            } else {
                break;
            }
        }
        return e;
    }

    ExprPtr parse_primary() {
        if (at_end()) fail("expression");
        const Token& t = peek();
        auto e = std::make_unique<Expr>();
        if (t.kind == TokenKind::Number || t.kind == TokenKind::String) {
            advance();
            e->span = t.span;
            e->node = LiteralExpr{t.text};
            return e;
        }
        if (t.kind == TokenKind::Keyword && (t.text == "true" || t.text == "false")) {
            advance();
            e->span = t.span;
            e->node = LiteralExpr{t.text};
            return e;
        }
        if (t.kind == TokenKind::Identifier) {
            advance();
            e->span = t.span;
            e->node = IdentifierExpr{t.text};
            return e;
        }
        // Elementary type used as a cast: address(0), uint(x), payable(p).
        if (t.kind == TokenKind::Keyword &&
            (is_elementary_type_name(t.text) || t.text == "payable") && peek(1).text == "(") {
            advance();
            e->span = t.span;
            e->node = IdentifierExpr{t.text, RefKind::External, -1};
            return e;
        }
        if (t.text == "(") {
            advance();
            ExprPtr inner = parse_expression();
            expect(")");
            return inner;
        }
        fail("expression");
    }
};

}  // namespace

Ast parse(const std::vector<Token>& tokens) {
    Parser p(tokens);
    Ast ast = p.parse_unit();
    resolve(ast);
    return ast;
}

Ast parse_source(const std::string& source) { return parse(tokenize(source)); }

}  // namespace ponzi
