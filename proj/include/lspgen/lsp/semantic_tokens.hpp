#pragma once

#include <cstdint>
#include <vector>

#include "lspgen/core/source_file.hpp"
#include "lspgen/core/token.hpp"

namespace lspgen::lsp {

/// One decoded semantic token in absolute coordinates. `start` and `length`
/// are UTF-16 code units, as on the wire.
struct RawSemanticToken {
    std::uint32_t line = 0;
    std::uint32_t start = 0;
    std::uint32_t length = 0;
    std::uint32_t type_index = 0;
    std::uint32_t modifiers = 0;

    bool operator==(const RawSemanticToken&) const = default;
};

/// Decodes the 5-tuple delta stream from textDocument/semanticTokens/full.
/// Throws ProtocolError on negative values, a length not divisible by 5,
/// or a delta that would move backwards.
std::vector<RawSemanticToken> decode_semantic_tokens(const std::vector<std::int64_t>& data);

/// Inverse of decode; re-encoding decoded data reproduces it bit for bit.
/// Tokens must be sorted by (line, start), as the protocol requires.
std::vector<std::int64_t> encode_semantic_tokens(const std::vector<RawSemanticToken>& tokens);

/// Resolves raw tokens against the document text and the server's legend,
/// producing domain tokens with lexemes and roles.
std::vector<core::Token> resolve_semantic_tokens(const std::vector<RawSemanticToken>& raw,
                                                 const core::SourceFile& file,
                                                 const std::vector<std::string>& legend);

}  // namespace lspgen::lsp
