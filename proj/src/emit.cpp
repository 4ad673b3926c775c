#include "ponzi/emit.hpp"

#include <sstream>

namespace ponzi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int binary_precedence(const std::string& op) {
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

constexpr int kUnaryPrec = 12;
constexpr int kPostfixPrec = 13;

int expr_precedence(const Expr& e) {
    return std::visit(overloaded{
                          [](const BinaryExpr& b) { return binary_precedence(b.op); },
                          [](const UnaryExpr&) { return kUnaryPrec; },
                          [](const auto&) { return kPostfixPrec; },
                      },
                      e.node);
}

bool word_like(const Token& t) {
    return t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword ||
           t.kind == TokenKind::Number;
}

class Emitter {
public:
    std::string run(const Ast& ast) {
        bool first = true;
        for (const auto& item : ast.items) {
            if (!first) out_ << "\n";
            first = false;
            std::visit(overloaded{
                           [&](const ContractDef& c) { emit_contract(c); },
                           [&](const RawMember& r) { emit_raw_tokens(r.tokens); },
                       },
                       item);
        }
        return out_.str();
    }

private:
    std::ostringstream out_;
    int indent_ = 0;

    void line_start() {
        for (int i = 0; i < indent_; ++i) out_ << "    ";
    }

    void emit_raw_tokens(const std::vector<Token>& tokens) {
        line_start();
        bool prev_word = false;
        for (const auto& t : tokens) {
            if (prev_word && word_like(t)) out_ << ' ';
            out_ << t.text;
            prev_word = word_like(t);
        }
        out_ << "\n";
    }

    void emit_contract(const ContractDef& c) {
        out_ << "contract " << c.name;
        if (!c.bases.empty()) {
            out_ << " is ";
            for (std::size_t i = 0; i < c.bases.size(); ++i) {
                if (i) out_ << ", ";
                out_ << c.bases[i];
            }
        }
        out_ << " {\n";
        ++indent_;
        for (const auto& member : c.members) {
            std::visit(overloaded{
                           [&](const VarDecl& v) {
                               line_start();
                               emit_var_decl(v);
                               out_ << "\n";
                           },
                           [&](const FunctionDef& f) { emit_function(f); },
                           [&](const RawMember& r) { emit_raw_tokens(r.tokens); },
                       },
                       member);
        }
        --indent_;
        out_ << "}\n";
    }

    void emit_var_decl(const VarDecl& v) {
        out_ << emit_type(*v.type);
        for (const auto& m : v.modifiers) out_ << ' ' << m;
        out_ << ' ' << v.name;
        if (v.init) out_ << " = " << emit_expr(*v.init);
        out_ << ";";
    }

    void emit_function(const FunctionDef& f) {
        line_start();
        if (f.is_constructor) {
            out_ << "constructor(";
        } else {
            out_ << "function " << f.name << "(";
        }
        for (std::size_t i = 0; i < f.params.size(); ++i) {
            if (i) out_ << ", ";
            const Param& p = f.params[i];
            out_ << emit_type(*p.type);
            for (const auto& m : p.modifiers) out_ << ' ' << m;
            if (!p.name.empty()) out_ << ' ' << p.name;
        }
        out_ << ")";
        for (const auto& m : f.modifiers) out_ << ' ' << m;
        if (f.return_type) out_ << " returns (" << emit_type(*f.return_type) << ")";
        if (!f.body) {
            out_ << ";\n";
            return;
        }
        out_ << " ";
        emit_stmt(*f.body, /*inline_block=*/true);
    }

    // Statements always terminate their own line. A block used as a branch
    // or function body starts on the current line (inline_block).
    void emit_stmt(const Stmt& stmt, bool inline_block = false) {
        std::visit(
            overloaded{
                [&](const BlockStmt& s) {
                    if (!inline_block) line_start();
                    out_ << "{\n";
                    ++indent_;
                    for (const auto& st : s.body) emit_stmt(*st);
                    --indent_;
                    line_start();
                    out_ << "}\n";
                },
                [&](const VarDeclStmt& s) {
                    line_start();
                    emit_var_decl(s.decl);
                    out_ << "\n";
                },
                [&](const AssignStmt& s) {
                    line_start();
                    out_ << emit_expr(*s.lhs) << ' ' << s.op << ' ' << emit_expr(*s.rhs) << ";\n";
                },
                [&](const ReturnStmt& s) {
                    line_start();
                    out_ << "return";
                    if (s.value) out_ << ' ' << emit_expr(*s.value);
                    out_ << ";\n";
                },
                [&](const IfStmt& s) { emit_if(s); },
                [&](const ForStmt& s) {
                    line_start();
                    out_ << "for (";
                    if (s.init) out_ << simple_stmt_text(*s.init);
                    out_ << ";";
                    if (s.cond) out_ << ' ' << emit_expr(*s.cond);
                    out_ << ";";
                    if (s.post) out_ << ' ' << simple_stmt_text(*s.post);
                    out_ << ") ";
                    if (std::holds_alternative<BlockStmt>(s.body->node)) {
                        emit_stmt(*s.body, true);
                    } else {
                        out_ << "\n";
                        ++indent_;
                        emit_stmt(*s.body);
                        --indent_;
                    }
                },
                [&](const RequireStmt& s) {
                    line_start();
                    out_ << "require(" << emit_expr(*s.cond);
                    if (s.message) out_ << ", " << emit_expr(*s.message);
                    out_ << ");\n";
                },
                [&](const ExprStmt& s) {
                    line_start();
                    out_ << emit_expr(*s.expr) << ";\n";
                },
                [&](const RawStmt& s) { emit_raw_tokens(s.tokens); },
            },
            stmt.node);
    }

    void emit_if(const IfStmt& s, bool continue_line = false) {
        if (!continue_line) line_start();
        out_ << "if (" << emit_expr(*s.cond) << ") ";
        bool then_is_block = std::holds_alternative<BlockStmt>(s.then_branch->node);
        if (then_is_block) {
            // Emit the block but keep the closing brace available for "else".
            out_ << "{\n";
            ++indent_;
            for (const auto& st : std::get<BlockStmt>(s.then_branch->node).body) emit_stmt(*st);
            --indent_;
            line_start();
            out_ << "}";
        } else {
            out_ << "\n";
            ++indent_;
            emit_stmt(*s.then_branch);
            --indent_;
        }
        if (!s.else_branch) {
            if (then_is_block) out_ << "\n";
            return;
        }
        if (then_is_block) {
            out_ << " else";
        } else {
            line_start();
            out_ << "else";
        }
        if (std::holds_alternative<BlockStmt>(s.else_branch->node) ||
            std::holds_alternative<IfStmt>(s.else_branch->node)) {
            // "else {" and "else if (...)" continue on the same line.
            out_ << ' ';
            if (std::holds_alternative<IfStmt>(s.else_branch->node)) {
                emit_if(std::get<IfStmt>(s.else_branch->node), /*continue_line=*/true);
            } else {
                emit_stmt(*s.else_branch, true);
            }
        } else {
            out_ << "\n";
            ++indent_;
            emit_stmt(*s.else_branch);
            --indent_;
        }
    }

    // A statement rendered without line handling or trailing ';' (for-loop
    // init/post slots).
    std::string simple_stmt_text(const Stmt& stmt) {
        return std::visit(
            overloaded{
                [&](const VarDeclStmt& s) -> std::string {
                    std::string text = emit_type(*s.decl.type);
                    for (const auto& m : s.decl.modifiers) text += ' ' + m;
                    text += ' ' + s.decl.name;
                    if (s.decl.init) text += " = " + emit_expr(*s.decl.init);
                    return text;
                },
                [&](const AssignStmt& s) -> std::string {
                    return emit_expr(*s.lhs) + ' ' + s.op + ' ' + emit_expr(*s.rhs);
                },
                [&](const ExprStmt& s) -> std::string { return emit_expr(*s.expr); },
                [&](const auto&) -> std::string { return ""; },
            },
            stmt.node);
    }
};

}  // namespace

std::string emit_type(const TypeName& type) {
    switch (type.kind) {
        case TypeKind::Elementary:
        case TypeKind::Named:
            return type.name;
        case TypeKind::Mapping:
            return "mapping(" + emit_type(*type.key) + " => " + emit_type(*type.value) + ")";
        case TypeKind::Array:
            return emit_type(*type.element) + "[" + type.array_length + "]";
    }
    return "";
}

namespace {

std::string emit_child(const Expr& child, int parent_prec, bool needs_higher) {
    int child_prec = expr_precedence(child);
    std::string text = emit_expr(child);
    if (child_prec < parent_prec || (needs_higher && child_prec == parent_prec))
        return "(" + text + ")";
    return text;
}

}  // namespace

std::string emit_expr(const Expr& expr) {
    return std::visit(
        overloaded{
            [](const IdentifierExpr& e) { return e.name; },
            [](const LiteralExpr& e) { return e.text; },
            [&](const BinaryExpr& e) {
                int prec = binary_precedence(e.op);
                bool right_assoc = e.op == "**";
                return emit_child(*e.lhs, prec, right_assoc) + " " + e.op + " " +
                       emit_child(*e.rhs, prec, !right_assoc);
            },
            [&](const UnaryExpr& e) {
                std::string inner = emit_child(*e.operand, kUnaryPrec, false);
                // "- -x" must not fuse into the "--" token.
                if (!inner.empty() && (e.op == "-" || e.op == "+") && inner[0] == e.op[0])
                    return e.op + " " + inner;
                return e.op + inner;
            },
            [&](const CallExpr& e) {
                std::string text = emit_child(*e.callee, kPostfixPrec, false) + "(";
                for (std::size_t i = 0; i < e.args.size(); ++i) {
                    if (i) text += ", ";
                    text += emit_expr(*e.args[i]);
                }
                return text + ")";
            },
            [&](const MemberExpr& e) {
                return emit_child(*e.object, kPostfixPrec, false) + "." + e.field;
            },
            [&](const IndexExpr& e) {
                return emit_child(*e.object, kPostfixPrec, false) + "[" + emit_expr(*e.index) + "]";
            },
        },
        expr.node);
}

std::string emit(const Ast& ast) { return Emitter().run(ast); }

}  // namespace ponzi
