#pragma once

#include <string>
#include <vector>

#include "ponzi/ast.hpp"
#include "ponzi/token.hpp"

namespace ponzi {

enum class DfgNodeKind { Variable, FunctionReturn, External };

struct DfgNode {
    std::string name;  // variable name, "f()" for return nodes, raw text for externals
    Span decl_span;    // zero span for externals
    int ordinal = 0;
    DfgNodeKind kind = DfgNodeKind::Variable;
};

struct DfgEdge {
    int from = 0;
    int to = 0;
};

// Variables as nodes, data dependencies as directed edges. Edge semantics are
// flow-insensitive def-use:
//   - declaration with initializer: reads of the initializer -> declared var
//   - assignment L = E (or op-assign): reads of E, of L's index/member
//     subexpressions, and of L itself for op-assigns -> L's root variable
//     (the self edge is dropped)
//   - return E in function f: reads of E -> the synthetic node "f()"
//   - call g(...): reads of each argument -> g's return node when g is a
//     contract function, else an external node named after the callee
//     (require statements count as calls to "require")
// Unresolved names become external nodes. Edges are deduplicated; nodes are
// ordered by declaration span (externals after, in first-use order).
struct DataFlowGraph {
    std::vector<DfgNode> nodes;
    std::vector<DfgEdge> edges;
};

// Requires a resolved Ast (as returned by parse).
DataFlowGraph build_dfg(const Ast& ast);

// Plain-text edge list, one "from -> to" line per edge.
std::string dfg_to_text(const DataFlowGraph& dfg);

// ---------------------------------------------------------------------------
// Encoder input sequence
// ---------------------------------------------------------------------------

enum class SeqItemKind { Cls, Sep, CodeToken, DfgNode };

struct SeqItem {
    SeqItemKind kind;
    std::string payload;
};

// [CLS] + non-comment code tokens + [SEP] + node names in ordinal order.
struct EncoderSequence {
    std::vector<SeqItem> items;
};

EncoderSequence to_encoder_sequence(const std::vector<Token>& source_tokens,
                                    const DataFlowGraph& dfg);

}  // namespace ponzi
