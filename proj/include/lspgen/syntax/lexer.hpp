#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "lspgen/core/source_file.hpp"
#include "lspgen/core/token.hpp"

namespace lspgen::syntax {

/// Lexical shape of one language family, table-driven so adapters stay small.
struct LexicalSpec {
    std::vector<std::string> line_comments;
    std::vector<std::pair<std::string, std::string>> block_comments;
    bool triple_quoted_strings = false;   // Python
    bool backtick_strings = false;        // Go raw strings
    bool single_quote_is_string = false;  // Python; Java/Go treat ' as char literal
    std::unordered_set<std::string> keywords;
    // Declaration keywords drive identifier classification: the name that
    // follows one of these becomes Function/Class.
    std::unordered_set<std::string> function_decl_keywords;  // def, func
    std::unordered_set<std::string> class_decl_keywords;     // class, interface, ...
};

enum class LexKind {
    Identifier,
    Keyword,
    String,
    Number,
    Comment,
    Operator,
    Punct,  // structural characters a semantic-token server would not emit
};

/// A lexical token over the raw byte buffer.
struct LexToken {
    LexKind kind = LexKind::Punct;
    std::size_t begin = 0;  // byte offset
    std::size_t end = 0;    // byte offset, exclusive
    core::TokenRole role = core::TokenRole::Other;
    std::string_view text;  // view into the lexed buffer
};

/// Full lexical stream including punctuation, in file order.
/// `module_names` marks identifiers to classify as Namespace (importable
/// module/package names, when the caller knows them).
std::vector<LexToken> lex(const std::string& text, const LexicalSpec& spec,
                          const std::unordered_set<std::string>& module_names = {});

/// Converts the lexical stream to domain tokens the way a semantic-token
/// server would serve them: punctuation dropped, multi-line lexemes split
/// into one token per line.
std::vector<core::Token> to_semantic_tokens(const std::vector<LexToken>& lexed,
                                            const core::SourceFile& file);

}  // namespace lspgen::syntax
