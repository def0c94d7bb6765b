#pragma once

#include <string>
#include <vector>

#include "lspgen/core/location.hpp"

namespace lspgen::core {

enum class SymbolKind {
    Class,
    Function,
    Method,
    Constant,
    Variable,
    Module,
    Field,
    Other,
};

const char* to_string(SymbolKind kind);

/// Numeric LSP SymbolKind (documentSymbol payloads) to our coarse enum.
SymbolKind symbol_kind_from_lsp(int lsp_kind);
int symbol_kind_to_lsp(SymbolKind kind);

/// A named program entity with its nested children.
struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::Other;
    Location loc;
    std::vector<Symbol> children;

    bool is_callable() const {
        return kind == SymbolKind::Function || kind == SymbolKind::Method;
    }
};

/// Drops any child whose span is not contained in its parent (some servers
/// emit such trees) and recurses. Emits a warning per dropped child.
void normalize_children(Symbol& symbol);
void normalize_children(std::vector<Symbol>& symbols);

/// Depth-first flattening of a symbol forest.
std::vector<const Symbol*> flatten(const std::vector<Symbol>& symbols);

/// The innermost symbol whose span contains `target`, or nullptr. Ties are
/// impossible in a well-formed tree; the deepest match wins.
const Symbol* smallest_enclosing(const std::vector<Symbol>& symbols, const Location& target);

}  // namespace lspgen::core
