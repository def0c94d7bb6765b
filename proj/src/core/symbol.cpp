#include "lspgen/core/symbol.hpp"

#include <algorithm>

#include "lspgen/core/log.hpp"

namespace lspgen::core {

const char* to_string(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Class: return "class";
        case SymbolKind::Function: return "function";
        case SymbolKind::Method: return "method";
        case SymbolKind::Constant: return "constant";
        case SymbolKind::Variable: return "variable";
        case SymbolKind::Module: return "module";
        case SymbolKind::Field: return "field";
        case SymbolKind::Other: return "other";
    }
    return "other";
}

SymbolKind symbol_kind_from_lsp(int lsp_kind) {
    switch (lsp_kind) {
        case 2:   // Module
        case 3:   // Namespace
        case 4:   // Package
            return SymbolKind::Module;
        case 5:   // Class
        case 10:  // Enum
        case 11:  // Interface
        case 23:  // Struct
            return SymbolKind::Class;
        case 6:   // Method
        case 9:   // Constructor
            return SymbolKind::Method;
        case 12:  // Function
            return SymbolKind::Function;
        case 13:  // Variable
            return SymbolKind::Variable;
        case 14:  // Constant
        case 22:  // EnumMember
            return SymbolKind::Constant;
        case 7:   // Property
        case 8:   // Field
            return SymbolKind::Field;
        default:
            return SymbolKind::Other;
    }
}

int symbol_kind_to_lsp(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Class: return 5;
        case SymbolKind::Function: return 12;
        case SymbolKind::Method: return 6;
        case SymbolKind::Constant: return 14;
        case SymbolKind::Variable: return 13;
        case SymbolKind::Module: return 2;
        case SymbolKind::Field: return 8;
        case SymbolKind::Other: return 20;  // Key: harmless catch-all
    }
    return 20;
}

void normalize_children(Symbol& symbol) {
    auto kept = std::vector<Symbol>{};
    kept.reserve(symbol.children.size());
    for (auto& child : symbol.children) {
        if (contains(symbol.loc, child.loc)) {
            kept.push_back(std::move(child));
        } else {
            log::warn("dropping symbol '" + child.name + "' at " + to_string(child.loc) +
                      ": not contained in parent '" + symbol.name + "'");
        }
    }
    symbol.children = std::move(kept);
    for (auto& child : symbol.children) normalize_children(child);
}

void normalize_children(std::vector<Symbol>& symbols) {
    for (auto& s : symbols) normalize_children(s);
}

namespace {

void flatten_into(const Symbol& s, std::vector<const Symbol*>& out) {
    out.push_back(&s);
    for (const auto& child : s.children) flatten_into(child, out);
}

}  // namespace

std::vector<const Symbol*> flatten(const std::vector<Symbol>& symbols) {
    std::vector<const Symbol*> out;
    for (const auto& s : symbols) flatten_into(s, out);
    return out;
}

const Symbol* smallest_enclosing(const std::vector<Symbol>& symbols, const Location& target) {
    for (const auto& s : symbols) {
        if (s.loc.file != target.file) continue;
        if (!contains(s.loc, target)) continue;
        const Symbol* deeper = smallest_enclosing(s.children, target);
        return deeper ? deeper : &s;
    }
    return nullptr;
}

}  // namespace lspgen::core
