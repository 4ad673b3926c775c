#include "ponzi/dfg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "ponzi/resolve.hpp"

namespace ponzi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

class DfgBuilder {
public:
    DataFlowGraph run(const Ast& input) {
        // build_dfg takes a const tree; resolution is recomputed on a clone so
        // decl ids are always consistent with this walk.
        ast_ = input.clone();
        table_ = resolve(ast_);

        // Declared variables and parameters, ordered by declaration span.
        std::vector<const DeclInfo*> vars;
        for (const auto& d : table_.decls) {
            if (d.cat == DeclCat::Function) continue;
            if (d.name.empty()) continue;  // unnamed parameters carry no flow
            vars.push_back(&d);
        }
        std::sort(vars.begin(), vars.end(), [](const DeclInfo* a, const DeclInfo* b) {
            return a->span.begin < b->span.begin;
        });
        for (const auto* d : vars) {
            var_node_[d->id] = static_cast<int>(graph_.nodes.size());
            graph_.nodes.push_back(
                {d->name, d->span, static_cast<int>(graph_.nodes.size()), DfgNodeKind::Variable});
        }
        // Synthetic return nodes, one per function, in declaration order.
        std::vector<const DeclInfo*> fns;
        for (const auto& d : table_.decls)
            if (d.cat == DeclCat::Function) fns.push_back(&d);
        std::sort(fns.begin(), fns.end(), [](const DeclInfo* a, const DeclInfo* b) {
            return a->span.begin < b->span.begin;
        });
        for (const auto* d : fns) {
            fn_node_[d->id] = static_cast<int>(graph_.nodes.size());
            graph_.nodes.push_back({d->name + "()", d->span,
                                    static_cast<int>(graph_.nodes.size()),
                                    DfgNodeKind::FunctionReturn});
        }

        for (const auto& item : ast_.items) {
            const auto* contract = std::get_if<ContractDef>(&item);
            if (!contract) continue;
            for (const auto& member : contract->members) {
                std::visit(overloaded{
                               [&](const VarDecl& v) { visit_var_decl(v); },
                               [&](const FunctionDef& f) {
                                   if (f.body) visit_stmt(*f.body, f.decl_id);
                               },
                               [](const RawMember&) {},
                           },
                           member);
            }
        }

        for (const auto& e : edges_) graph_.edges.push_back({e.first, e.second});
        return std::move(graph_);
    }

private:
    Ast ast_;
    DeclTable table_;
    DataFlowGraph graph_;
    std::map<int, int> var_node_;          // decl_id -> ordinal
    std::map<int, int> fn_node_;           // function decl_id -> ordinal
    std::map<std::string, int> external_;  // name -> ordinal
    std::set<std::pair<int, int>> edges_;  // deduplicated, ordered

    int external_node(const std::string& name) {
        auto it = external_.find(name);
        if (it != external_.end()) return it->second;
        int ordinal = static_cast<int>(graph_.nodes.size());
        graph_.nodes.push_back({name, Span{0, 0}, ordinal, DfgNodeKind::External});
        external_.emplace(name, ordinal);
        return ordinal;
    }

    void add_edge(int from, int to) {
        if (from == to) return;  // single-statement self loops are dropped
        edges_.emplace(from, to);
    }

    // Variable reads in an expression: every resolved variable identifier in
    // read position, plus unresolved names as external nodes. Also harvests
    // call and require edges as a side effect.
    void collect_reads(const Expr& e, std::vector<int>& reads) {
        std::visit(
            overloaded{
                [&](const IdentifierExpr& x) {
                    if (x.ref == RefKind::Variable) {
                        auto it = var_node_.find(x.decl_id);
                        if (it != var_node_.end()) reads.push_back(it->second);
                    } else if (x.ref == RefKind::External && !is_elementary_type_name(x.name) &&
                               x.name != "payable") {
                        reads.push_back(external_node(x.name));
                    }
                },
                [](const LiteralExpr&) {},
                [&](const BinaryExpr& x) {
                    collect_reads(*x.lhs, reads);
                    collect_reads(*x.rhs, reads);
                },
                [&](const UnaryExpr& x) { collect_reads(*x.operand, reads); },
                [&](const CallExpr& x) { visit_call(x, &reads); },
                [&](const MemberExpr& x) { collect_reads(*x.object, reads); },
                [&](const IndexExpr& x) {
                    collect_reads(*x.object, reads);
                    collect_reads(*x.index, reads);
                },
            },
            e.node);
    }

    // Call: argument reads flow into the callee's node. Also records the
    // argument/callee reads into the surrounding expression's read set.
    void visit_call(const CallExpr& call, std::vector<int>* outer_reads) {
        int target;
        if (const auto* id = std::get_if<IdentifierExpr>(&call.callee->node);
            id && id->ref == RefKind::Function) {
            target = fn_node_.at(id->decl_id);
        } else {
            target = external_node(expr_to_text(*call.callee));
            if (outer_reads) collect_reads(*call.callee, *outer_reads);
        }
        for (const auto& arg : call.args) {
            std::vector<int> arg_reads;
            collect_reads(*arg, arg_reads);
            for (int r : arg_reads) {
                add_edge(r, target);
                if (outer_reads) outer_reads->push_back(r);
            }
        }
    }

    // Root variable written by an assignment target; index/member
    // subexpressions contribute reads.
    int written_target(const Expr& lhs, std::vector<int>& reads) {
        return std::visit(
            overloaded{
                [&](const IdentifierExpr& x) -> int {
                    if (x.ref == RefKind::Variable) {
                        auto it = var_node_.find(x.decl_id);
                        if (it != var_node_.end()) return it->second;
                    }
                    return external_node(x.name);
                },
                [&](const MemberExpr& x) -> int { return written_target(*x.object, reads); },
                [&](const IndexExpr& x) -> int {
                    collect_reads(*x.index, reads);
                    return written_target(*x.object, reads);
                },
                [&](const auto&) -> int { return external_node(expr_to_text(lhs)); },
            },
            lhs.node);
    }

    void visit_var_decl(const VarDecl& decl) {
        if (!decl.init) return;
        std::vector<int> reads;
        collect_reads(*decl.init, reads);
        auto it = var_node_.find(decl.decl_id);
        if (it == var_node_.end()) return;
        for (int r : reads) add_edge(r, it->second);
    }

    // Expressions in non-flow positions (conditions) still surface their
    // calls; the plain reads go nowhere.
    void visit_bare_expr(const Expr& e) {
        std::vector<int> ignored;
        collect_reads(e, ignored);
    }

    void visit_stmt(const Stmt& stmt, int function_id) {
        std::visit(
            overloaded{
                [&](const BlockStmt& s) {
                    for (const auto& st : s.body) visit_stmt(*st, function_id);
                },
                [&](const VarDeclStmt& s) { visit_var_decl(s.decl); },
                [&](const AssignStmt& s) {
                    std::vector<int> reads;
                    collect_reads(*s.rhs, reads);
                    int target = written_target(*s.lhs, reads);
                    if (s.op != "=") {
                        // op-assign also reads the target; the self edge is
                        // dropped by add_edge.
                        reads.push_back(target);
                    }
                    for (int r : reads) add_edge(r, target);
                },
                [&](const ReturnStmt& s) {
                    if (!s.value) return;
                    std::vector<int> reads;
                    collect_reads(*s.value, reads);
                    auto it = fn_node_.find(function_id);
                    if (it == fn_node_.end()) return;
                    for (int r : reads) add_edge(r, it->second);
                },
                [&](const IfStmt& s) {
                    visit_bare_expr(*s.cond);
                    visit_stmt(*s.then_branch, function_id);
                    if (s.else_branch) visit_stmt(*s.else_branch, function_id);
                },
                [&](const ForStmt& s) {
                    if (s.init) visit_stmt(*s.init, function_id);
                    if (s.cond) visit_bare_expr(*s.cond);
                    if (s.post) visit_stmt(*s.post, function_id);
                    visit_stmt(*s.body, function_id);
                },
                [&](const RequireStmt& s) {
                    int target = external_node("require");
                    std::vector<int> reads;
                    collect_reads(*s.cond, reads);
                    if (s.message) collect_reads(*s.message, reads);
                    for (int r : reads) add_edge(r, target);
                },
                [&](const ExprStmt& s) { visit_bare_expr(*s.expr); },
                [](const RawStmt&) {},
            },
            stmt.node);
    }
};

}  // namespace

DataFlowGraph build_dfg(const Ast& ast) { return DfgBuilder().run(ast); }

std::string dfg_to_text(const DataFlowGraph& dfg) {
    std::ostringstream out;
    for (const auto& e : dfg.edges)
        out << dfg.nodes[static_cast<std::size_t>(e.from)].name << " -> "
            << dfg.nodes[static_cast<std::size_t>(e.to)].name << "\n";
    return out.str();
}

EncoderSequence to_encoder_sequence(const std::vector<Token>& source_tokens,
                                    const DataFlowGraph& dfg) {
    EncoderSequence seq;
    seq.items.push_back({SeqItemKind::Cls, "[CLS]"});
    for (const auto& t : source_tokens) {
        if (t.kind == TokenKind::Comment) continue;
        seq.items.push_back({SeqItemKind::CodeToken, t.text});
    }
    seq.items.push_back({SeqItemKind::Sep, "[SEP]"});
    for (const auto& n : dfg.nodes) seq.items.push_back({SeqItemKind::DfgNode, n.name});
    return seq;
}

}  // namespace ponzi
