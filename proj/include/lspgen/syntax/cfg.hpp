#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lspgen/core/location.hpp"
#include "lspgen/syntax/adapter.hpp"
#include "lspgen/syntax/syntax_tree.hpp"

namespace lspgen::syntax {

enum class CfgNodeKind { entry, exit, statement, branch, merge };
enum class EdgeLabel { seq, true_branch, false_branch, loop_back, exception };

struct CfgNode {
    int id = 0;
    CfgNodeKind kind = CfgNodeKind::statement;
    core::Location span;
    std::optional<core::Location> condition_span;  // branch nodes only
};

struct CfgEdge {
    int from = 0;
    int to = 0;
    EdgeLabel label = EdgeLabel::seq;
};

struct Cfg {
    std::vector<CfgNode> nodes;
    std::vector<CfgEdge> edges;
    int entry_id = 0;
    int exit_id = 0;

    const CfgNode* node(int id) const {
        for (const auto& n : nodes) {
            if (n.id == id) return &n;
        }
        return nullptr;
    }
    std::vector<const CfgEdge*> out_edges(int id) const {
        std::vector<const CfgEdge*> out;
        for (const auto& e : edges) {
            if (e.from == id) out.push_back(&e);
        }
        return out;
    }
};

/// Builds the lightweight intraprocedural CFG from a parsed method body.
/// Straight-line runs collapse into single statement nodes; conditionals,
/// loops and switch/match arms become branch nodes carrying the guard span.
Cfg build_cfg(const SyntaxNode& root, const LanguageAdapter& adapter);

/// Guard spans of every branch node, in source order, deduplicated.
std::vector<core::Location> condition_spans(const Cfg& cfg);

const char* to_string(CfgNodeKind kind);
const char* to_string(EdgeLabel label);

}  // namespace lspgen::syntax
