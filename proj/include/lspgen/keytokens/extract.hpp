#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lspgen/core/token.hpp"
#include "lspgen/core/workspace.hpp"
#include "lspgen/syntax/cfg.hpp"

namespace lspgen::keytok {

/// Ordered selection of the focal method's branch-governing tokens.
struct KeyTokenSet {
    /// Source order, deduplicated by location.
    std::vector<core::Token> tokens;
    /// Index into `tokens` -> the guard span whose lines selected it.
    std::map<std::size_t, core::Location> origin;
};

/// True for roles that never need a context search (literals, keywords,
/// comments, operators, and the unclassified identifier catch-all).
bool is_excluded_role(core::TokenRole role);

/// Selects T_key in three steps: mark tokens intersecting any branch guard,
/// expand to every token sharing a physical line with a marked token, then
/// drop non-searchable roles. `only_span`, when set, restricts selection to
/// that one guard (branch-targeted generation).
KeyTokenSet extract_key_tokens(const core::FocalMethod& focal,
                               const std::vector<core::Token>& all_tokens,
                               const syntax::Cfg& cfg,
                               const std::optional<core::Location>& only_span = std::nullopt);

/// Collapses tokens that share (lexeme, role), keeping the first occurrence.
/// Retrieval uses this to avoid duplicate DEF/REF queries.
std::vector<core::Token> dedupe_by_lexeme(const std::vector<core::Token>& tokens);

}  // namespace lspgen::keytok
