#include "lspgen/core/token.hpp"

namespace lspgen::core {

const char* to_string(TokenRole role) {
    return token_role_to_lsp_type(role);
}

TokenRole token_role_from_lsp_type(const std::string& type_name) {
    if (type_name == "keyword" || type_name == "modifier") return TokenRole::Keyword;
    if (type_name == "identifier") return TokenRole::Identifier;
    if (type_name == "variable") return TokenRole::Variable;
    if (type_name == "parameter") return TokenRole::Parameter;
    if (type_name == "function" || type_name == "macro") return TokenRole::Function;
    if (type_name == "method") return TokenRole::Method;
    if (type_name == "property" || type_name == "enumMember" || type_name == "event") {
        return TokenRole::Property;
    }
    if (type_name == "class" || type_name == "struct" || type_name == "enum" ||
        type_name == "interface" || type_name == "type") {
        return TokenRole::Class;
    }
    if (type_name == "namespace") return TokenRole::Namespace;
    if (type_name == "string") return TokenRole::String;
    if (type_name == "number") return TokenRole::Number;
    if (type_name == "comment") return TokenRole::Comment;
    if (type_name == "regexp" || type_name == "regex") return TokenRole::Regex;
    if (type_name == "operator") return TokenRole::Operator;
    return TokenRole::Other;
}

const char* token_role_to_lsp_type(TokenRole role) {
    switch (role) {
        case TokenRole::Keyword: return "keyword";
        case TokenRole::Identifier: return "identifier";
        case TokenRole::Variable: return "variable";
        case TokenRole::Parameter: return "parameter";
        case TokenRole::Function: return "function";
        case TokenRole::Method: return "method";
        case TokenRole::Property: return "property";
        case TokenRole::Class: return "class";
        case TokenRole::Namespace: return "namespace";
        case TokenRole::String: return "string";
        case TokenRole::Number: return "number";
        case TokenRole::Comment: return "comment";
        case TokenRole::Regex: return "regexp";
        case TokenRole::Operator: return "operator";
        case TokenRole::Other: return "other";
    }
    return "other";
}

}  // namespace lspgen::core
