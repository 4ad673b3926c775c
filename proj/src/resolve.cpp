#include "ponzi/resolve.hpp"

#include <map>
#include <vector>

namespace ponzi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct ScopeEntry {
    int id;
    DeclCat cat;
};

class Resolver {
public:
    explicit Resolver(DeclTable& table) : table_(table) {}

    void run(Ast& ast) {
        int contract_index = 0;
        for (auto& item : ast.items) {
            if (auto* c = std::get_if<ContractDef>(&item)) resolve_contract(*c, contract_index++);
        }
    }

private:
    DeclTable& table_;
    // Innermost scope last. std::map keeps lookups deterministic.
    std::vector<std::map<std::string, ScopeEntry>> scopes_;
    int current_function_ = -1;

    int add_decl(const std::string& name, DeclCat cat, Span span, int contract_index) {
        DeclInfo info;
        info.id = static_cast<int>(table_.decls.size());
        info.name = name;
        info.cat = cat;
        info.span = span;
        info.contract_index = contract_index;
        info.function_decl_id = current_function_;
        table_.decls.push_back(info);
        return info.id;
    }

    const ScopeEntry* lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        return nullptr;
    }

    void resolve_contract(ContractDef& contract, int contract_index) {
        scopes_.emplace_back();
        // Contract-level names are visible everywhere in the contract, so
        // collect them before resolving any initializer or body.
        for (auto& member : contract.members) {
            std::visit(overloaded{
                           [&](VarDecl& v) {
                               v.decl_id = add_decl(v.name, DeclCat::StateVar, v.span, contract_index);
                               scopes_.back()[v.name] = {v.decl_id, DeclCat::StateVar};
                           },
                           [&](FunctionDef& f) {
                               f.decl_id = add_decl(f.name, DeclCat::Function, f.span, contract_index);
                               scopes_.back()[f.name] = {f.decl_id, DeclCat::Function};
                           },
                           [](RawMember&) {},
                       },
                       member);
        }
        for (auto& member : contract.members) {
            std::visit(overloaded{
                           [&](VarDecl& v) {
                               if (v.init) resolve_expr(*v.init);
                           },
                           [&](FunctionDef& f) { resolve_function(f, contract_index); },
                           [](RawMember&) {},
                       },
                       member);
        }
        scopes_.pop_back();
    }

    void resolve_function(FunctionDef& fn, int contract_index) {
        current_function_ = fn.decl_id;
        scopes_.emplace_back();
        for (auto& p : fn.params) {
            p.decl_id = add_decl(p.name, DeclCat::Parameter, p.span, contract_index);
            if (!p.name.empty()) scopes_.back()[p.name] = {p.decl_id, DeclCat::Parameter};
        }
        if (fn.body) resolve_stmt(*fn.body, contract_index);
        scopes_.pop_back();
        current_function_ = -1;
    }

    void resolve_stmt(Stmt& stmt, int contract_index) {
        std::visit(
            overloaded{
                [&](BlockStmt& s) {
                    scopes_.emplace_back();
                    for (auto& st : s.body) resolve_stmt(*st, contract_index);
                    scopes_.pop_back();
                },
                [&](VarDeclStmt& s) {
                    if (s.decl.init) resolve_expr(*s.decl.init);
                    s.decl.decl_id = add_decl(s.decl.name, DeclCat::Local, s.decl.span, contract_index);
                    scopes_.back()[s.decl.name] = {s.decl.decl_id, DeclCat::Local};
                },
                [&](AssignStmt& s) {
                    resolve_expr(*s.lhs);
                    resolve_expr(*s.rhs);
                },
                [&](ReturnStmt& s) {
                    if (s.value) resolve_expr(*s.value);
                },
                [&](IfStmt& s) {
                    resolve_expr(*s.cond);
                    resolve_stmt(*s.then_branch, contract_index);
                    if (s.else_branch) resolve_stmt(*s.else_branch, contract_index);
                },
                [&](ForStmt& s) {
                    scopes_.emplace_back();  // init declaration scopes over cond/post/body
                    if (s.init) resolve_stmt(*s.init, contract_index);
                    if (s.cond) resolve_expr(*s.cond);
                    if (s.post) resolve_stmt(*s.post, contract_index);
                    resolve_stmt(*s.body, contract_index);
                    scopes_.pop_back();
                },
                [&](RequireStmt& s) {
                    resolve_expr(*s.cond);
                    if (s.message) resolve_expr(*s.message);
                },
                [&](ExprStmt& s) { resolve_expr(*s.expr); },
                [](RawStmt&) {},
            },
            stmt.node);
    }

    void resolve_expr(Expr& expr) {
        std::visit(overloaded{
                       [&](IdentifierExpr& e) {
                           // Re-derive from scratch so the pass is idempotent
                           // on rewritten trees. Elementary-type casts are
                           // always external.
                           if (is_elementary_type_name(e.name) || e.name == "payable") {
                               e.ref = RefKind::External;
                               e.decl_id = -1;
                               return;
                           }
                           const ScopeEntry* entry = lookup(e.name);
                           if (!entry) {
                               e.ref = RefKind::External;
                               e.decl_id = -1;
                           } else if (entry->cat == DeclCat::Function) {
                               e.ref = RefKind::Function;
                               e.decl_id = entry->id;
                           } else {
                               e.ref = RefKind::Variable;
                               e.decl_id = entry->id;
                           }
                       },
                       [](LiteralExpr&) {},
                       [&](BinaryExpr& e) {
                           resolve_expr(*e.lhs);
                           resolve_expr(*e.rhs);
                       },
                       [&](UnaryExpr& e) { resolve_expr(*e.operand); },
                       [&](CallExpr& e) {
                           resolve_expr(*e.callee);
                           for (auto& a : e.args) resolve_expr(*a);
                       },
                       [&](MemberExpr& e) { resolve_expr(*e.object); },
                       [&](IndexExpr& e) {
                           resolve_expr(*e.object);
                           resolve_expr(*e.index);
                       },
                   },
                   expr.node);
    }
};

}  // namespace

DeclTable resolve(Ast& ast) {
    DeclTable table;
    Resolver(table).run(ast);
    return table;
}

}  // namespace ponzi
