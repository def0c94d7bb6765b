#pragma once

#include <string>
#include <vector>

#include "lspgen/core/location.hpp"

namespace lspgen::core {

/// Semantic role of a lexical token, the closure over common LSP
/// semantic-token types. `Identifier` is the catch-all a server emits for
/// names it could not classify; classified names get a specific role.
enum class TokenRole {
    Keyword,
    Identifier,
    Variable,
    Parameter,
    Function,
    Method,
    Property,
    Class,
    Namespace,
    String,
    Number,
    Comment,
    Regex,
    Operator,
    Other,
};

const char* to_string(TokenRole role);

/// Maps an LSP semantic-token type name to a role. Unknown names map to
/// Other; the literal "identifier" maps to Identifier.
TokenRole token_role_from_lsp_type(const std::string& type_name);

/// Canonical LSP type name for a role (used when serving tokens).
const char* token_role_to_lsp_type(TokenRole role);

struct Token {
    Location loc;
    std::string lex;
    TokenRole role = TokenRole::Other;

    bool operator==(const Token&) const = default;
};

}  // namespace lspgen::core
