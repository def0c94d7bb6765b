#include "lspgen/retrieval/retriever.hpp"

#include <algorithm>
#include <set>

#include "lspgen/core/log.hpp"
#include "lspgen/lsp/protocol_error.hpp"

namespace lspgen::retrieval {
namespace {

/// Widens a bare range to the containing line so a snippet is never empty.
core::Location line_window(const core::SourceFile& file, const core::Location& loc,
                           int context_lines) {
    core::Location out;
    out.file = file.path();
    out.start.line = std::max(0, loc.start.line - context_lines);
    out.start.character = 0;
    const int last_line = static_cast<int>(file.line_count()) - 1;
    const int end_line = std::min(last_line, loc.end.line + context_lines);
    out.end.line = end_line;
    out.end.character = static_cast<int>(core::utf16_length(file.line_text(end_line)));
    return out;
}

}  // namespace

Retriever::Retriever(lsp::LspClient& client, core::Workspace& workspace, int reference_limit)
    : client_(client), workspace_(workspace), reference_limit_(reference_limit) {}

core::SourceFile* Retriever::ensure_open(const std::string& path) {
    core::SourceFile* file = workspace_.find_or_load(path);
    if (file == nullptr) return nullptr;
    if (!client_.document_open(file->path())) client_.open_document(*file);
    return file;
}

const std::vector<core::Symbol>& Retriever::symbols_for(const std::string& path) {
    auto it = symbol_cache_.find(path);
    if (it != symbol_cache_.end()) return it->second;
    std::vector<core::Symbol> symbols;
    try {
        if (ensure_open(path) != nullptr) symbols = client_.symbols(path);
    } catch (const std::exception& e) {
        log::warn("SYM failed for " + path + ": " + e.what());
    }
    return symbol_cache_.emplace(path, std::move(symbols)).first->second;
}

std::vector<Snippet> Retriever::retrieve_definitions(const core::Token& token) {
    std::vector<Snippet> out;
    std::vector<core::Location> locations;
    try {
        locations = client_.definition(token.loc);
    } catch (const std::exception& e) {
        log::warn("DEF failed for '" + token.lex + "': " + e.what());
        return out;
    }
    for (const auto& loc : locations) {
        if (!workspace_.contains(loc.file)) continue;  // standard library, vendored deps, ...
        const std::string path = workspace_.canonical_key(loc.file);
        core::SourceFile* file = ensure_open(path);
        if (file == nullptr) continue;

        core::Location target = loc;
        target.file = path;
        const auto& symbols = symbols_for(path);
        const core::Symbol* symbol = core::smallest_enclosing(symbols, target);

        Snippet snippet;
        snippet.kind = SnippetKind::definition;
        snippet.anchor = token;
        if (symbol != nullptr) {
            snippet.origin = symbol->loc;
        } else {
            // Name-only range with no symbol around it: fall back to the line.
            snippet.origin = line_window(*file, target, 0);
        }
        snippet.text = file->slice(snippet.origin);
        out.push_back(std::move(snippet));
    }
    return out;
}

std::vector<Snippet> Retriever::retrieve_references(const core::Token& token,
                                                    const core::Location& exclude_span,
                                                    std::optional<int> limit) {
    std::vector<Snippet> out;
    const int cap = limit.value_or(reference_limit_);
    if (cap <= 0) return out;

    std::vector<core::Location> locations;
    try {
        locations = client_.references(token.loc);
    } catch (const std::exception& e) {
        log::warn("REF failed for '" + token.lex + "': " + e.what());
        return out;
    }
    for (const auto& loc : locations) {
        if (static_cast<int>(out.size()) >= cap) break;
        if (!workspace_.contains(loc.file)) continue;
        const std::string path = workspace_.canonical_key(loc.file);
        if (path == exclude_span.file && core::contains(exclude_span, core::Location{
                                             exclude_span.file, loc.start, loc.end})) {
            continue;  // usage inside the focal method itself
        }
        core::SourceFile* file = ensure_open(path);
        if (file == nullptr) continue;

        core::Location target = loc;
        target.file = path;
        const auto& symbols = symbols_for(path);
        const core::Symbol* enclosing = core::smallest_enclosing(symbols, target);

        Snippet snippet;
        snippet.kind = SnippetKind::reference_example;
        snippet.anchor = token;
        snippet.origin = enclosing != nullptr ? enclosing->loc : line_window(*file, target, 2);
        snippet.text = file->slice(snippet.origin);
        out.push_back(std::move(snippet));
    }
    return out;
}

ContextBundle Retriever::build_bundle(const core::FocalMethod& focal,
                                      const keytok::KeyTokenSet& keys) {
    ContextBundle bundle;
    std::set<std::tuple<std::string, core::Position, core::Position>> seen_origins;

    const auto fresh = [&](const Snippet& s) {
        return seen_origins.insert({s.origin.file, s.origin.start, s.origin.end}).second;
    };

    for (const auto& token : keytok::dedupe_by_lexeme(keys.tokens)) {
        ContextItem item;
        item.key_token = token;
        for (auto& snippet : retrieve_definitions(token)) {
            // The prompt already carries the focal source in full.
            if (snippet.origin.file == focal.file_path &&
                core::contains(focal.symbol.loc, snippet.origin)) {
                continue;
            }
            if (fresh(snippet)) item.definitions.push_back(std::move(snippet));
        }
        for (auto& snippet : retrieve_references(token, focal.symbol.loc)) {
            if (fresh(snippet)) item.references.push_back(std::move(snippet));
        }
        if (!item.definitions.empty() || !item.references.empty()) {
            bundle.items.push_back(std::move(item));
        }
    }
    bundle.recount();
    return bundle;
}

}  // namespace lspgen::retrieval
