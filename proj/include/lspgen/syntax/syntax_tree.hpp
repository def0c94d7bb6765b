#pragma once

#include <string>
#include <vector>

#include "lspgen/core/location.hpp"

namespace lspgen::syntax {

/// Concrete-syntax node. Kinds use a small shared vocabulary the CFG
/// builder understands; adapters translate their grammar constructs into it:
///   body, block, statement, statement_with_block, if_statement,
///   loop_statement, switch_statement, case_clause, default_clause,
///   condition, scrutinee, else_clause, try_statement, handler_clause,
///   finally_clause, return_statement, raise_statement, break_statement,
///   continue_statement, conditional_expression, error
struct SyntaxNode {
    std::string kind;
    core::Location loc;
    std::vector<SyntaxNode> children;

    const SyntaxNode* child(const std::string& kind_name) const {
        for (const auto& c : children) {
            if (c.kind == kind_name) return &c;
        }
        return nullptr;
    }
};

/// Depth-first search for any node of the given kind.
int count_kind(const SyntaxNode& node, const std::string& kind);

}  // namespace lspgen::syntax
