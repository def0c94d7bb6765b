#include "lspgen/lsp/semantic_tokens.hpp"

#include <limits>
#include <string>

#include "lspgen/lsp/protocol_error.hpp"

namespace lspgen::lsp {

std::vector<RawSemanticToken> decode_semantic_tokens(const std::vector<std::int64_t>& data) {
    if (data.size() % 5 != 0) {
        throw ProtocolError("semantic tokens data length " + std::to_string(data.size()) +
                            " is not a multiple of 5");
    }
    std::vector<RawSemanticToken> out;
    out.reserve(data.size() / 5);
    std::uint32_t line = 0;
    std::uint32_t start = 0;
    for (std::size_t i = 0; i < data.size(); i += 5) {
        for (std::size_t k = 0; k < 5; ++k) {
            if (data[i + k] < 0 || data[i + k] > std::numeric_limits<std::uint32_t>::max()) {
                throw ProtocolError("semantic token field out of range at index " +
                                    std::to_string(i + k));
            }
        }
        const auto delta_line = static_cast<std::uint32_t>(data[i]);
        const auto delta_start = static_cast<std::uint32_t>(data[i + 1]);
        line += delta_line;
        start = (delta_line == 0) ? start + delta_start : delta_start;
        out.push_back(RawSemanticToken{
            line,
            start,
            static_cast<std::uint32_t>(data[i + 2]),
            static_cast<std::uint32_t>(data[i + 3]),
            static_cast<std::uint32_t>(data[i + 4]),
        });
    }
    return out;
}

std::vector<std::int64_t> encode_semantic_tokens(const std::vector<RawSemanticToken>& tokens) {
    std::vector<std::int64_t> out;
    out.reserve(tokens.size() * 5);
    std::uint32_t prev_line = 0;
    std::uint32_t prev_start = 0;
    for (const auto& t : tokens) {
        if (t.line < prev_line || (t.line == prev_line && t.start < prev_start)) {
            throw ProtocolError("semantic tokens not sorted by position");
        }
        const std::uint32_t delta_line = t.line - prev_line;
        const std::uint32_t delta_start = (delta_line == 0) ? t.start - prev_start : t.start;
        out.push_back(delta_line);
        out.push_back(delta_start);
        out.push_back(t.length);
        out.push_back(t.type_index);
        out.push_back(t.modifiers);
        prev_line = t.line;
        prev_start = t.start;
    }
    return out;
}

std::vector<core::Token> resolve_semantic_tokens(const std::vector<RawSemanticToken>& raw,
                                                 const core::SourceFile& file,
                                                 const std::vector<std::string>& legend) {
    std::vector<core::Token> out;
    out.reserve(raw.size());
    for (const auto& r : raw) {
        if (r.type_index >= legend.size()) {
            throw ProtocolError("semantic token type index " + std::to_string(r.type_index) +
                                " overruns legend of size " + std::to_string(legend.size()));
        }
        core::Token token;
        token.loc.file = file.path();
        token.loc.start = core::Position{static_cast<int>(r.line), static_cast<int>(r.start)};
        token.loc.end =
            core::Position{static_cast<int>(r.line), static_cast<int>(r.start + r.length)};
        token.lex = file.slice(token.loc);
        token.role = core::token_role_from_lsp_type(legend[r.type_index]);
        out.push_back(std::move(token));
    }
    return out;
}

}  // namespace lspgen::lsp
