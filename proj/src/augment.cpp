#include "ponzi/augment.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "ponzi/emit.hpp"
#include "ponzi/parser.hpp"
#include "ponzi/resolve.hpp"

namespace ponzi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Collects every identifier-like text in the tree (declared names, uses,
// member fields, function and base names, raw tokens) so fresh names can be
// checked against all of them.
void collect_names(const Expr& e, std::set<std::string>& out);

void collect_names_type(const TypeName& t, std::set<std::string>& out) {
    if (!t.name.empty()) out.insert(t.name);
    if (t.key) collect_names_type(*t.key, out);
    if (t.value) collect_names_type(*t.value, out);
    if (t.element) collect_names_type(*t.element, out);
}

void collect_names(const Stmt& stmt, std::set<std::string>& out) {
    std::visit(overloaded{
                   [&](const BlockStmt& s) {
                       for (const auto& st : s.body) collect_names(*st, out);
                   },
                   [&](const VarDeclStmt& s) {
                       out.insert(s.decl.name);
                       collect_names_type(*s.decl.type, out);
                       if (s.decl.init) collect_names(*s.decl.init, out);
                   },
                   [&](const AssignStmt& s) {
                       collect_names(*s.lhs, out);
                       collect_names(*s.rhs, out);
                   },
                   [&](const ReturnStmt& s) {
                       if (s.value) collect_names(*s.value, out);
                   },
                   [&](const IfStmt& s) {
                       collect_names(*s.cond, out);
                       collect_names(*s.then_branch, out);
                       if (s.else_branch) collect_names(*s.else_branch, out);
                   },
                   [&](const ForStmt& s) {
                       if (s.init) collect_names(*s.init, out);
                       if (s.cond) collect_names(*s.cond, out);
                       if (s.post) collect_names(*s.post, out);
                       collect_names(*s.body, out);
                   },
                   [&](const RequireStmt& s) {
                       collect_names(*s.cond, out);
                       if (s.message) collect_names(*s.message, out);
                   },
                   [&](const ExprStmt& s) { collect_names(*s.expr, out); },
                   [&](const RawStmt& s) {
                       for (const auto& t : s.tokens)
                           if (t.kind == TokenKind::Identifier) out.insert(t.text);
                   },
               },
               stmt.node);
}

void collect_names(const Expr& e, std::set<std::string>& out) {
    std::visit(overloaded{
                   [&](const IdentifierExpr& x) { out.insert(x.name); },
                   [](const LiteralExpr&) {},
                   [&](const BinaryExpr& x) {
                       collect_names(*x.lhs, out);
                       collect_names(*x.rhs, out);
                   },
                   [&](const UnaryExpr& x) { collect_names(*x.operand, out); },
                   [&](const CallExpr& x) {
                       collect_names(*x.callee, out);
                       for (const auto& a : x.args) collect_names(*a, out);
                   },
                   [&](const MemberExpr& x) {
                       collect_names(*x.object, out);
                       out.insert(x.field);
                   },
                   [&](const IndexExpr& x) {
                       collect_names(*x.object, out);
                       collect_names(*x.index, out);
                   },
               },
               e.node);
}

std::set<std::string> all_names(const Ast& ast) {
    std::set<std::string> out;
    for (const auto& item : ast.items) {
        std::visit(overloaded{
                       [&](const ContractDef& c) {
                           out.insert(c.name);
                           for (const auto& b : c.bases) out.insert(b);
                           for (const auto& m : c.members) {
                               std::visit(overloaded{
                                              [&](const VarDecl& v) {
                                                  out.insert(v.name);
                                                  collect_names_type(*v.type, out);
                                                  if (v.init) collect_names(*v.init, out);
                                              },
                                              [&](const FunctionDef& f) {
                                                  out.insert(f.name);
                                                  for (const auto& p : f.params) {
                                                      if (!p.name.empty()) out.insert(p.name);
                                                      collect_names_type(*p.type, out);
                                                  }
                                                  if (f.return_type)
                                                      collect_names_type(*f.return_type, out);
                                                  if (f.body) collect_names(*f.body, out);
                                              },
                                              [&](const RawMember& r) {
                                                  for (const auto& t : r.tokens)
                                                      if (t.kind == TokenKind::Identifier)
                                                          out.insert(t.text);
                                              },
                                          },
                                          m);
                           }
                       },
                       [&](const RawMember& r) {
                           for (const auto& t : r.tokens)
                               if (t.kind == TokenKind::Identifier) out.insert(t.text);
                       },
                   },
                   item);
    }
    return out;
}

enum class DefaultCat { Bool, Integer, String, Address, Other };

DefaultCat default_category(const TypeName& t) {
    if (t.kind == TypeKind::Elementary) {
        if (t.name == "bool") return DefaultCat::Bool;
        if (t.name == "string") return DefaultCat::String;
        if (t.name == "address") return DefaultCat::Address;
        if (t.name.rfind("uint", 0) == 0 || t.name.rfind("int", 0) == 0 ||
            t.name.rfind("bytes", 0) == 0 || t.name == "byte")
            return DefaultCat::Integer;
    }
    return DefaultCat::Other;
}

// Default-value expression for a type, or null when the type has no literal
// default (mappings, arrays, user types).
ExprPtr default_literal(const TypeName& t) {
    auto lit = [](std::string text) {
        auto e = std::make_unique<Expr>();
        e->node = LiteralExpr{std::move(text)};
        return e;
    };
    switch (default_category(t)) {
        case DefaultCat::Bool:
            return lit("false");
        case DefaultCat::Integer:
            return lit("0");
        case DefaultCat::String:
            return lit("\"\"");
        case DefaultCat::Address: {
            auto callee = std::make_unique<Expr>();
            callee->node = IdentifierExpr{"address", RefKind::External, -1};
            CallExpr call;
            call.callee = std::move(callee);
            call.args.push_back(lit("0"));
            auto e = std::make_unique<Expr>();
            e->node = std::move(call);
            return e;
        }
        case DefaultCat::Other:
            return nullptr;
    }
    return nullptr;
}

// Default *return* expression: booleans return true (not false) so the
// simplified body stays a plausible success path.
ExprPtr default_return_value(const TypeName& t) {
    if (default_category(t) == DefaultCat::Bool) {
        auto e = std::make_unique<Expr>();
        e->node = LiteralExpr{"true"};
        return e;
    }
    ExprPtr v = default_literal(t);
    if (!v) {
        auto e = std::make_unique<Expr>();
        e->node = LiteralExpr{"0"};
        return e;
    }
    return v;
}

// -- strong ------------------------------------------------------------------

struct SplitPlan {
    std::vector<std::string> names;  // k collision-free sub-names
};

std::string fresh_suffixed(const std::string& base, int index, std::set<std::string>& used) {
    std::string candidate = base + "_" + std::to_string(index);
    while (used.count(candidate)) candidate += "_";
    used.insert(candidate);
    return candidate;
}

class StrongRewriter {
public:
    StrongRewriter(const AugmentationConfig& cfg, Rng& rng, std::set<std::string> used)
        : cfg_(cfg), rng_(rng), used_(std::move(used)) {}

    void rewrite(Ast& ast) {
        // Plans are registered in declaration order (state variables in
        // member order, then locals in statement order per function) so the
        // k draws are reproducible. For-loop init declarations are skipped:
        // a single init slot cannot hold k declarations.
        for (auto& item : ast.items) {
            auto* contract = std::get_if<ContractDef>(&item);
            if (!contract) continue;
            for (auto& member : contract->members) {
                if (auto* var = std::get_if<VarDecl>(&member)) plan_split(*var);
            }
            for (auto& member : contract->members) {
                if (auto* fn = std::get_if<FunctionDef>(&member)) {
                    if (fn->body) plan_stmt(*fn->body);
                }
            }
        }
        // Uses first (they look up the old decl ids), then declarations.
        rewrite_uses(ast);
        split_declarations(ast);
    }

private:
    const AugmentationConfig& cfg_;
    Rng& rng_;
    std::set<std::string> used_;
    std::map<int, SplitPlan> plans_;  // decl_id -> plan

    int draw_k() {
        if (cfg_.fixed_k) return *cfg_.fixed_k;
        return static_cast<int>(rng_.next_range(static_cast<std::uint64_t>(cfg_.k_min),
                                                static_cast<std::uint64_t>(cfg_.k_max)));
    }

    void plan_split(const VarDecl& decl) {
        if (decl.decl_id < 0) return;
        int k = draw_k();
        SplitPlan plan;
        for (int i = 1; i <= k; ++i) plan.names.push_back(fresh_suffixed(decl.name, i, used_));
        plans_.emplace(decl.decl_id, std::move(plan));
    }

    void plan_stmt(Stmt& stmt) {
        std::visit(overloaded{
                       [&](BlockStmt& s) {
                           for (auto& st : s.body) plan_stmt(*st);
                       },
                       [&](VarDeclStmt& s) { plan_split(s.decl); },
                       [&](IfStmt& s) {
                           plan_stmt(*s.then_branch);
                           if (s.else_branch) plan_stmt(*s.else_branch);
                       },
                       [&](ForStmt& s) { plan_stmt(*s.body); },
                       [](auto&) {},
                   },
                   stmt.node);
    }

    void rewrite_uses_expr(Expr& e) {
        std::visit(overloaded{
                       [&](IdentifierExpr& x) {
                           auto it = plans_.find(x.decl_id);
                           if (x.ref == RefKind::Variable && it != plans_.end())
                               x.name = it->second.names.front();
                       },
                       [](LiteralExpr&) {},
                       [&](BinaryExpr& x) {
                           rewrite_uses_expr(*x.lhs);
                           rewrite_uses_expr(*x.rhs);
                       },
                       [&](UnaryExpr& x) { rewrite_uses_expr(*x.operand); },
                       [&](CallExpr& x) {
                           rewrite_uses_expr(*x.callee);
                           for (auto& a : x.args) rewrite_uses_expr(*a);
                       },
                       [&](MemberExpr& x) { rewrite_uses_expr(*x.object); },
                       [&](IndexExpr& x) {
                           rewrite_uses_expr(*x.object);
                           rewrite_uses_expr(*x.index);
                       },
                   },
                   e.node);
    }

    void rewrite_uses_stmt(Stmt& stmt) {
        std::visit(overloaded{
                       [&](BlockStmt& s) {
                           for (auto& st : s.body) rewrite_uses_stmt(*st);
                       },
                       [&](VarDeclStmt& s) {
                           if (s.decl.init) rewrite_uses_expr(*s.decl.init);
                       },
                       [&](AssignStmt& s) {
                           rewrite_uses_expr(*s.lhs);
                           rewrite_uses_expr(*s.rhs);
                       },
                       [&](ReturnStmt& s) {
                           if (s.value) rewrite_uses_expr(*s.value);
                       },
                       [&](IfStmt& s) {
                           rewrite_uses_expr(*s.cond);
                           rewrite_uses_stmt(*s.then_branch);
                           if (s.else_branch) rewrite_uses_stmt(*s.else_branch);
                       },
                       [&](ForStmt& s) {
                           if (s.init) rewrite_uses_stmt(*s.init);
                           if (s.cond) rewrite_uses_expr(*s.cond);
                           if (s.post) rewrite_uses_stmt(*s.post);
                           rewrite_uses_stmt(*s.body);
                       },
                       [&](RequireStmt& s) {
                           rewrite_uses_expr(*s.cond);
                           if (s.message) rewrite_uses_expr(*s.message);
                       },
                       [&](ExprStmt& s) { rewrite_uses_expr(*s.expr); },
                       [](RawStmt&) {},
                   },
                   stmt.node);
    }

    void rewrite_uses(Ast& ast) {
        for (auto& item : ast.items) {
            auto* contract = std::get_if<ContractDef>(&item);
            if (!contract) continue;
            for (auto& member : contract->members) {
                std::visit(overloaded{
                               [&](VarDecl& v) {
                                   if (v.init) rewrite_uses_expr(*v.init);
                               },
                               [&](FunctionDef& f) {
                                   if (f.body) rewrite_uses_stmt(*f.body);
                               },
                               [](RawMember&) {},
                           },
                           member);
            }
        }
    }

    // Produces the k replacement declarations for one split variable.
    std::vector<VarDecl> expand(const VarDecl& decl, const SplitPlan& plan) {
        std::vector<VarDecl> out;
        for (std::size_t i = 0; i < plan.names.size(); ++i) {
            VarDecl d;
            d.type = decl.type->clone();
            d.modifiers = decl.modifiers;
            d.name = plan.names[i];
            d.span = decl.span;
            if (i == 0) {
                d.init = decl.init ? decl.init->clone() : nullptr;
            } else {
                d.init = default_literal(*decl.type);
            }
            out.push_back(std::move(d));
        }
        return out;
    }

    void split_block(BlockStmt& block) {
        std::vector<StmtPtr> body;
        for (auto& st : block.body) {
            if (auto* vd = std::get_if<VarDeclStmt>(&st->node)) {
                auto it = plans_.find(vd->decl.decl_id);
                if (it != plans_.end()) {
                    for (auto& d : expand(vd->decl, it->second)) {
                        auto s = std::make_unique<Stmt>();
                        s->span = st->span;
                        s->node = VarDeclStmt{std::move(d)};
                        body.push_back(std::move(s));
                    }
                    continue;
                }
            }
            split_stmt(*st);
            body.push_back(std::move(st));
        }
        block.body = std::move(body);
    }

    void split_stmt(Stmt& stmt) {
        std::visit(overloaded{
                       [&](BlockStmt& s) { split_block(s); },
                       [&](IfStmt& s) {
                           split_stmt(*s.then_branch);
                           if (s.else_branch) split_stmt(*s.else_branch);
                       },
                       [&](ForStmt& s) { split_stmt(*s.body); },
                       [](auto&) {},
                   },
                   stmt.node);
    }

    void split_declarations(Ast& ast) {
        for (auto& item : ast.items) {
            auto* contract = std::get_if<ContractDef>(&item);
            if (!contract) continue;
            std::vector<ContractMember> members;
            for (auto& member : contract->members) {
                if (auto* var = std::get_if<VarDecl>(&member)) {
                    auto it = plans_.find(var->decl_id);
                    if (it != plans_.end()) {
                        for (auto& d : expand(*var, it->second)) members.emplace_back(std::move(d));
                        continue;
                    }
                }
                if (auto* fn = std::get_if<FunctionDef>(&member)) {
                    if (fn->body) split_stmt(*fn->body);
                }
                members.push_back(std::move(member));
            }
            contract->members = std::move(members);
        }
    }
};

// -- weak --------------------------------------------------------------------

std::string draw_fresh_name(const AugmentationConfig& cfg, Rng& rng,
                            const std::set<std::string>& taken) {
    static const char* hex = "0123456789abcdef";
    for (int attempt = 0;; ++attempt) {
        int digits = attempt < 64 ? 4 : 16;
        std::string name = cfg.rename_prefix;
        for (int i = 0; i < digits; ++i) name += hex[rng.next_u64() & 0xf];
        if (!taken.count(name) && !is_keyword(name)) return name;
    }
}

void rename_expr(Expr& e, const std::map<std::string, std::string>& names) {
    std::visit(overloaded{
                   [&](IdentifierExpr& x) {
                       if (x.ref != RefKind::Variable) return;
                       auto it = names.find(x.name);
                       if (it != names.end()) x.name = it->second;
                   },
                   [](LiteralExpr&) {},
                   [&](BinaryExpr& x) {
                       rename_expr(*x.lhs, names);
                       rename_expr(*x.rhs, names);
                   },
                   [&](UnaryExpr& x) { rename_expr(*x.operand, names); },
                   [&](CallExpr& x) {
                       rename_expr(*x.callee, names);
                       for (auto& a : x.args) rename_expr(*a, names);
                   },
                   [&](MemberExpr& x) { rename_expr(*x.object, names); },
                   [&](IndexExpr& x) {
                       rename_expr(*x.object, names);
                       rename_expr(*x.index, names);
                   },
               },
               e.node);
}

void rename_stmt(Stmt& stmt, const std::map<std::string, std::string>& names) {
    std::visit(overloaded{
                   [&](BlockStmt& s) {
                       for (auto& st : s.body) rename_stmt(*st, names);
                   },
                   [&](VarDeclStmt& s) {
                       auto it = names.find(s.decl.name);
                       if (it != names.end()) s.decl.name = it->second;
                       if (s.decl.init) rename_expr(*s.decl.init, names);
                   },
                   [&](AssignStmt& s) {
                       rename_expr(*s.lhs, names);
                       rename_expr(*s.rhs, names);
                   },
                   [&](ReturnStmt& s) {
                       if (s.value) rename_expr(*s.value, names);
                   },
                   [&](IfStmt& s) {
                       rename_expr(*s.cond, names);
                       rename_stmt(*s.then_branch, names);
                       if (s.else_branch) rename_stmt(*s.else_branch, names);
                   },
                   [&](ForStmt& s) {
                       if (s.init) rename_stmt(*s.init, names);
                       if (s.cond) rename_expr(*s.cond, names);
                       if (s.post) rename_stmt(*s.post, names);
                       rename_stmt(*s.body, names);
                   },
                   [&](RequireStmt& s) {
                       rename_expr(*s.cond, names);
                       if (s.message) rename_expr(*s.message, names);
                   },
                   [&](ExprStmt& s) { rename_expr(*s.expr, names); },
                   [](RawStmt&) {},
               },
               stmt.node);
}

}  // namespace

Ast augment_strong(const Ast& input, const AugmentationConfig& cfg, Rng& rng) {
    Ast ast = input.clone();
    resolve(ast);
    StrongRewriter rewriter(cfg, rng, all_names(ast));
    rewriter.rewrite(ast);
    return ast;
}

Ast augment_medium(const Ast& input) {
    Ast ast = input.clone();
    for (auto& item : ast.items) {
        auto* contract = std::get_if<ContractDef>(&item);
        if (!contract) continue;
        for (auto& member : contract->members) {
            auto* fn = std::get_if<FunctionDef>(&member);
            if (!fn || !fn->body) continue;
            BlockStmt body;
            if (fn->return_type) {
                auto ret = std::make_unique<Stmt>();
                ret->node = ReturnStmt{default_return_value(*fn->return_type)};
                body.body.push_back(std::move(ret));
            }
            fn->body->node = std::move(body);
        }
    }
    return ast;
}

Ast augment_weak(const Ast& input, const AugmentationConfig& cfg, Rng& rng) {
    Ast ast = input.clone();
    DeclTable table = resolve(ast);

    // Fresh names are drawn per distinct declared name, in first-declaration
    // order, and must not collide with anything that survives the rename.
    std::set<std::string> taken = all_names(ast);
    std::vector<std::string> declared;
    for (const auto& d : table.decls) {
        if (d.cat == DeclCat::Function || d.name.empty()) continue;
        if (std::find(declared.begin(), declared.end(), d.name) == declared.end())
            declared.push_back(d.name);
    }
    std::map<std::string, std::string> names;
    for (const auto& name : declared) {
        std::string fresh = draw_fresh_name(cfg, rng, taken);
        taken.insert(fresh);
        names[name] = fresh;
    }

    for (auto& item : ast.items) {
        auto* contract = std::get_if<ContractDef>(&item);
        if (!contract) continue;
        for (auto& member : contract->members) {
            std::visit(overloaded{
                           [&](VarDecl& v) {
                               auto it = names.find(v.name);
                               if (it != names.end()) v.name = it->second;
                               if (v.init) rename_expr(*v.init, names);
                           },
                           [&](FunctionDef& f) {
                               for (auto& p : f.params) {
                                   auto it = names.find(p.name);
                                   if (it != names.end()) p.name = it->second;
                               }
                               if (f.body) rename_stmt(*f.body, names);
                           },
                           [](RawMember&) {},
                       },
                       member);
        }
    }
    return ast;
}

AugmentedTriple make_views(const std::string& source, const AugmentationConfig& cfg) {
    Ast ast = parse_source(source);

    Rng strong_rng(mix_seed(cfg.seed, 1));
    Rng weak_rng(mix_seed(cfg.seed, 2));

    auto finish = [](Ast&& rewritten) {
        AugmentedView view;
        view.source = emit(rewritten);
        view.ast = parse_source(view.source);
        return view;
    };

    AugmentedTriple triple;
    triple.strong = finish(augment_strong(ast, cfg, strong_rng));
    triple.medium = finish(augment_medium(ast));
    triple.weak = finish(augment_weak(ast, cfg, weak_rng));
    return triple;
}

}  // namespace ponzi
