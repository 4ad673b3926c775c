#include "ponzi/ast.hpp"

namespace ponzi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ExprPtr clone_opt(const ExprPtr& e) { return e ? e->clone() : nullptr; }
StmtPtr clone_opt(const StmtPtr& s) { return s ? s->clone() : nullptr; }
TypeNamePtr clone_opt(const TypeNamePtr& t) { return t ? t->clone() : nullptr; }

}  // namespace

TypeNamePtr TypeName::clone() const {
    auto t = std::make_unique<TypeName>();
    t->kind = kind;
    t->span = span;
    t->name = name;
    t->key = clone_opt(key);
    t->value = clone_opt(value);
    t->element = clone_opt(element);
    t->array_length = array_length;
    return t;
}

ExprPtr Expr::clone() const {
    auto out = std::make_unique<Expr>();
    out->span = span;
    out->node = std::visit(
        overloaded{
            [](const IdentifierExpr& e) -> decltype(out->node) { return e; },
            [](const LiteralExpr& e) -> decltype(out->node) { return e; },
            [](const BinaryExpr& e) -> decltype(out->node) {
                return BinaryExpr{e.op, e.lhs->clone(), e.rhs->clone()};
            },
            [](const UnaryExpr& e) -> decltype(out->node) {
                return UnaryExpr{e.op, e.operand->clone()};
            },
            [](const CallExpr& e) -> decltype(out->node) {
                CallExpr c;
                c.callee = e.callee->clone();
                for (const auto& a : e.args) c.args.push_back(a->clone());
                return c;
            },
            [](const MemberExpr& e) -> decltype(out->node) {
                return MemberExpr{e.object->clone(), e.field};
            },
            [](const IndexExpr& e) -> decltype(out->node) {
                return IndexExpr{e.object->clone(), e.index->clone()};
            },
        },
        node);
    return out;
}

VarDecl VarDecl::clone() const {
    VarDecl d;
    d.type = clone_opt(type);
    d.modifiers = modifiers;
    d.name = name;
    d.init = clone_opt(init);
    d.span = span;
    d.decl_id = decl_id;
    return d;
}

Param Param::clone() const {
    Param p;
    p.type = clone_opt(type);
    p.modifiers = modifiers;
    p.name = name;
    p.span = span;
    p.decl_id = decl_id;
    return p;
}

FunctionDef FunctionDef::clone() const {
    FunctionDef f;
    f.name = name;
    f.is_constructor = is_constructor;
    for (const auto& p : params) f.params.push_back(p.clone());
    f.modifiers = modifiers;
    f.return_type = clone_opt(return_type);
    f.body = clone_opt(body);
    f.span = span;
    f.decl_id = decl_id;
    return f;
}

StmtPtr Stmt::clone() const {
    auto out = std::make_unique<Stmt>();
    out->span = span;
    out->node = std::visit(
        overloaded{
            [](const BlockStmt& s) -> decltype(out->node) {
                BlockStmt b;
                for (const auto& st : s.body) b.body.push_back(st->clone());
                return b;
            },
            [](const VarDeclStmt& s) -> decltype(out->node) { return VarDeclStmt{s.decl.clone()}; },
            [](const AssignStmt& s) -> decltype(out->node) {
                return AssignStmt{s.op, s.lhs->clone(), s.rhs->clone()};
            },
            [](const ReturnStmt& s) -> decltype(out->node) { return ReturnStmt{clone_opt(s.value)}; },
            [](const IfStmt& s) -> decltype(out->node) {
                return IfStmt{s.cond->clone(), s.then_branch->clone(), clone_opt(s.else_branch)};
            },
            [](const ForStmt& s) -> decltype(out->node) {
                return ForStmt{clone_opt(s.init), clone_opt(s.cond), clone_opt(s.post),
                               s.body->clone()};
            },
            [](const RequireStmt& s) -> decltype(out->node) {
                return RequireStmt{s.cond->clone(), clone_opt(s.message)};
            },
            [](const ExprStmt& s) -> decltype(out->node) { return ExprStmt{s.expr->clone()}; },
            [](const RawStmt& s) -> decltype(out->node) { return s; },
        },
        node);
    return out;
}

ContractDef ContractDef::clone() const {
    ContractDef c;
    c.name = name;
    c.bases = bases;
    c.span = span;
    for (const auto& m : members) {
        std::visit(overloaded{
                       [&](const VarDecl& v) { c.members.emplace_back(v.clone()); },
                       [&](const FunctionDef& f) { c.members.emplace_back(f.clone()); },
                       [&](const RawMember& r) { c.members.emplace_back(r); },
                   },
                   m);
    }
    return c;
}

Ast Ast::clone() const {
    Ast out;
    out.span = span;
    for (const auto& item : items) {
        std::visit(overloaded{
                       [&](const ContractDef& c) { out.items.emplace_back(c.clone()); },
                       [&](const RawMember& r) { out.items.emplace_back(r); },
                   },
                   item);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

namespace {

bool type_equal(const TypeName* a, const TypeName* b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind || a->name != b->name || a->array_length != b->array_length)
        return false;
    return type_equal(a->key.get(), b->key.get()) && type_equal(a->value.get(), b->value.get()) &&
           type_equal(a->element.get(), b->element.get());
}

bool expr_equal_ptr(const Expr* a, const Expr* b) {
    if (!a || !b) return a == b;
    return expr_equal(*a, *b);
}

bool stmt_equal_ptr(const Stmt* a, const Stmt* b) {
    if (!a || !b) return a == b;
    return stmt_equal(*a, *b);
}

bool raw_tokens_equal(const std::vector<Token>& a, const std::vector<Token>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].kind != b[i].kind || a[i].text != b[i].text) return false;
    return true;
}

bool vardecl_equal(const VarDecl& a, const VarDecl& b) {
    return a.name == b.name && a.modifiers == b.modifiers &&
           type_equal(a.type.get(), b.type.get()) && expr_equal_ptr(a.init.get(), b.init.get());
}

bool function_equal(const FunctionDef& a, const FunctionDef& b) {
    if (a.name != b.name || a.is_constructor != b.is_constructor ||
        a.modifiers != b.modifiers || a.params.size() != b.params.size())
        return false;
    for (std::size_t i = 0; i < a.params.size(); ++i) {
        if (a.params[i].name != b.params[i].name ||
            a.params[i].modifiers != b.params[i].modifiers ||
            !type_equal(a.params[i].type.get(), b.params[i].type.get()))
            return false;
    }
    return type_equal(a.return_type.get(), b.return_type.get()) &&
           stmt_equal_ptr(a.body.get(), b.body.get());
}

}  // namespace

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const IdentifierExpr& x) {
                return x.name == std::get<IdentifierExpr>(b.node).name;
            },
            [&](const LiteralExpr& x) { return x.text == std::get<LiteralExpr>(b.node).text; },
            [&](const BinaryExpr& x) {
                const auto& y = std::get<BinaryExpr>(b.node);
                return x.op == y.op && expr_equal(*x.lhs, *y.lhs) && expr_equal(*x.rhs, *y.rhs);
            },
            [&](const UnaryExpr& x) {
                const auto& y = std::get<UnaryExpr>(b.node);
                return x.op == y.op && expr_equal(*x.operand, *y.operand);
            },
            [&](const CallExpr& x) {
                const auto& y = std::get<CallExpr>(b.node);
                if (!expr_equal(*x.callee, *y.callee) || x.args.size() != y.args.size())
                    return false;
                for (std::size_t i = 0; i < x.args.size(); ++i)
                    if (!expr_equal(*x.args[i], *y.args[i])) return false;
                return true;
            },
            [&](const MemberExpr& x) {
                const auto& y = std::get<MemberExpr>(b.node);
                return x.field == y.field && expr_equal(*x.object, *y.object);
            },
            [&](const IndexExpr& x) {
                const auto& y = std::get<IndexExpr>(b.node);
                return expr_equal(*x.object, *y.object) && expr_equal(*x.index, *y.index);
            },
        },
        a.node);
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const BlockStmt& x) {
                const auto& y = std::get<BlockStmt>(b.node);
                if (x.body.size() != y.body.size()) return false;
                for (std::size_t i = 0; i < x.body.size(); ++i)
                    if (!stmt_equal(*x.body[i], *y.body[i])) return false;
                return true;
            },
            [&](const VarDeclStmt& x) {
                return vardecl_equal(x.decl, std::get<VarDeclStmt>(b.node).decl);
            },
            [&](const AssignStmt& x) {
                const auto& y = std::get<AssignStmt>(b.node);
                return x.op == y.op && expr_equal(*x.lhs, *y.lhs) && expr_equal(*x.rhs, *y.rhs);
            },
            [&](const ReturnStmt& x) {
                return expr_equal_ptr(x.value.get(), std::get<ReturnStmt>(b.node).value.get());
            },
            [&](const IfStmt& x) {
                const auto& y = std::get<IfStmt>(b.node);
                return expr_equal(*x.cond, *y.cond) &&
                       stmt_equal(*x.then_branch, *y.then_branch) &&
                       stmt_equal_ptr(x.else_branch.get(), y.else_branch.get());
            },
            [&](const ForStmt& x) {
                const auto& y = std::get<ForStmt>(b.node);
                return stmt_equal_ptr(x.init.get(), y.init.get()) &&
                       expr_equal_ptr(x.cond.get(), y.cond.get()) &&
                       stmt_equal_ptr(x.post.get(), y.post.get()) && stmt_equal(*x.body, *y.body);
            },
            [&](const RequireStmt& x) {
                const auto& y = std::get<RequireStmt>(b.node);
                return expr_equal(*x.cond, *y.cond) &&
                       expr_equal_ptr(x.message.get(), y.message.get());
            },
            [&](const ExprStmt& x) { return expr_equal(*x.expr, *std::get<ExprStmt>(b.node).expr); },
            [&](const RawStmt& x) {
                return raw_tokens_equal(x.tokens, std::get<RawStmt>(b.node).tokens);
            },
        },
        a.node);
}

bool ast_equal(const Ast& a, const Ast& b) {
    if (a.items.size() != b.items.size()) return false;
    for (std::size_t i = 0; i < a.items.size(); ++i) {
        if (a.items[i].index() != b.items[i].index()) return false;
        bool ok = std::visit(
            overloaded{
                [&](const ContractDef& ca) {
                    const auto& cb = std::get<ContractDef>(b.items[i]);
                    if (ca.name != cb.name || ca.bases != cb.bases ||
                        ca.members.size() != cb.members.size())
                        return false;
                    for (std::size_t m = 0; m < ca.members.size(); ++m) {
                        if (ca.members[m].index() != cb.members[m].index()) return false;
                        bool mok = std::visit(
                            overloaded{
                                [&](const VarDecl& v) {
                                    return vardecl_equal(v, std::get<VarDecl>(cb.members[m]));
                                },
                                [&](const FunctionDef& f) {
                                    return function_equal(f, std::get<FunctionDef>(cb.members[m]));
                                },
                                [&](const RawMember& r) {
                                    return raw_tokens_equal(
                                        r.tokens, std::get<RawMember>(cb.members[m]).tokens);
                                },
                            },
                            ca.members[m]);
                        if (!mok) return false;
                    }
                    return true;
                },
                [&](const RawMember& ra) {
                    return raw_tokens_equal(ra.tokens, std::get<RawMember>(b.items[i]).tokens);
                },
            },
            a.items[i]);
        if (!ok) return false;
    }
    return true;
}

std::string expr_to_text(const Expr& e) {
    return std::visit(
        overloaded{
            [](const IdentifierExpr& x) { return x.name; },
            [](const LiteralExpr& x) { return x.text; },
            [](const BinaryExpr& x) {
                return expr_to_text(*x.lhs) + x.op + expr_to_text(*x.rhs);
            },
            [](const UnaryExpr& x) { return x.op + expr_to_text(*x.operand); },
            [](const CallExpr& x) { return expr_to_text(*x.callee) + "(...)"; },
            [](const MemberExpr& x) { return expr_to_text(*x.object) + "." + x.field; },
            [](const IndexExpr& x) { return expr_to_text(*x.object) + "[...]"; },
        },
        e.node);
}

}  // namespace ponzi
