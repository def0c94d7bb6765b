#pragma once

#include <string>
#include <vector>

#include "lspgen/core/token.hpp"
#include "lspgen/core/workspace.hpp"

namespace lspgen::retrieval {

enum class SnippetKind { definition, reference_example };

/// One retrieved piece of context: the source of a symbol (definition) or
/// of an enclosing symbol around a use site (reference example).
struct Snippet {
    std::string text;
    core::Location origin;
    SnippetKind kind = SnippetKind::definition;
    core::Token anchor;  // the key token this snippet was fetched for
};

/// All context gathered for one focal method, grouped per key token.
struct ContextItem {
    core::Token key_token;
    std::vector<Snippet> definitions;
    std::vector<Snippet> references;
};

struct ContextBundle {
    std::vector<ContextItem> items;
    std::size_t total_chars = 0;
    std::size_t estimated_tokens = 0;  // chars / 4 heuristic unless a real tokenizer is wired

    void recount() {
        total_chars = 0;
        for (const auto& item : items) {
            for (const auto& s : item.definitions) total_chars += s.text.size();
            for (const auto& s : item.references) total_chars += s.text.size();
        }
        estimated_tokens = (total_chars + 3) / 4;
    }
};

}  // namespace lspgen::retrieval
