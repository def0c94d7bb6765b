#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lspgen/core/workspace.hpp"
#include "lspgen/keytokens/extract.hpp"
#include "lspgen/lsp/client.hpp"
#include "lspgen/retrieval/snippet.hpp"

namespace lspgen::retrieval {

/// Context retrieval over one server handle: DEF/REF per key token, with the
/// workspace filter and enclosing-symbol enrichment. Caches per-file symbol
/// trees; provider failures degrade to empty results with a warning rather
/// than aborting generation.
class Retriever {
public:
    Retriever(lsp::LspClient& client, core::Workspace& workspace, int reference_limit = 2);

    /// Definition snippets for `token`: every DEF location inside the
    /// workspace becomes the full source of the symbol found there. Locations
    /// outside the workspace root are silently skipped.
    std::vector<Snippet> retrieve_definitions(const core::Token& token);

    /// Reference snippets: each REF location becomes the source of the
    /// smallest enclosing symbol (a complete usage example). References
    /// inside `exclude_span` (the focal method) are skipped; at most `limit`
    /// snippets are returned.
    std::vector<Snippet> retrieve_references(const core::Token& token,
                                             const core::Location& exclude_span,
                                             std::optional<int> limit = std::nullopt);

    /// Full bundle for a focal method: tokens deduplicated by lexeme before
    /// querying, snippets deduplicated across tokens by origin location, and
    /// definitions that live inside the focal method itself dropped (the
    /// prompt already carries the focal source).
    ContextBundle build_bundle(const core::FocalMethod& focal, const keytok::KeyTokenSet& keys);

    const std::vector<core::Symbol>& symbols_for(const std::string& path);

private:
    /// Ensures the document is registered with the server and returns the
    /// local copy, or nullptr when it cannot be loaded.
    core::SourceFile* ensure_open(const std::string& path);

    lsp::LspClient& client_;
    core::Workspace& workspace_;
    int reference_limit_;
    std::map<std::string, std::vector<core::Symbol>> symbol_cache_;
};

}  // namespace lspgen::retrieval
