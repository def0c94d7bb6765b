#include "lspgen/syntax/lexer.hpp"

#include <algorithm>
#include <cctype>

namespace lspgen::syntax {
namespace {

bool is_ident_start(unsigned char c) {
    return std::isalpha(c) != 0 || c == '_' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
    return std::isalnum(c) != 0 || c == '_' || c >= 0x80;
}

bool is_operator_char(char c) {
    static const std::string ops = "+-*/%=!<>&|^~?:";
    return ops.find(c) != std::string::npos;
}

bool starts_with(const std::string& text, std::size_t pos, const std::string& prefix) {
    return text.compare(pos, prefix.size(), prefix) == 0;
}

// Python-style string prefixes (r"", f"", rb"", ...).
bool is_string_prefix(std::string_view ident) {
    if (ident.empty() || ident.size() > 3) return false;
    for (char c : ident) {
        const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (l != 'r' && l != 'b' && l != 'f' && l != 'u') return false;
    }
    return true;
}

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }
};

std::size_t scan_string(Cursor& c, bool triple_allowed) {
    const char quote = c.peek();
    const bool triple = triple_allowed && c.peek(1) == quote && c.peek(2) == quote;
    c.pos += triple ? 3 : 1;
    while (!c.done()) {
        if (c.peek() == '\\') {
            c.pos += 2;
            continue;
        }
        if (triple) {
            if (c.peek() == quote && c.peek(1) == quote && c.peek(2) == quote) {
                c.pos += 3;
                return c.pos;
            }
            ++c.pos;
        } else {
            if (c.peek() == quote) {
                ++c.pos;
                return c.pos;
            }
            if (c.peek() == '\n') return c.pos;  // unterminated: stop at EOL
            ++c.pos;
        }
    }
    return c.pos;
}

}  // namespace

std::vector<LexToken> lex(const std::string& text, const LexicalSpec& spec,
                          const std::unordered_set<std::string>& module_names) {
    std::vector<LexToken> out;
    Cursor c{text};

    const auto push = [&](LexKind kind, std::size_t begin, std::size_t end) {
        LexToken t;
        t.kind = kind;
        t.begin = begin;
        t.end = end;
        t.text = std::string_view(text).substr(begin, end - begin);
        switch (kind) {
            case LexKind::Keyword: t.role = core::TokenRole::Keyword; break;
            case LexKind::String: t.role = core::TokenRole::String; break;
            case LexKind::Number: t.role = core::TokenRole::Number; break;
            case LexKind::Comment: t.role = core::TokenRole::Comment; break;
            case LexKind::Operator: t.role = core::TokenRole::Operator; break;
            case LexKind::Identifier: t.role = core::TokenRole::Identifier; break;
            case LexKind::Punct: t.role = core::TokenRole::Other; break;
        }
        out.push_back(t);
    };

    while (!c.done()) {
        const char ch = c.peek();
        if (std::isspace(static_cast<unsigned char>(ch)) != 0) {
            ++c.pos;
            continue;
        }

        bool matched_comment = false;
        for (const auto& lc : spec.line_comments) {
            if (starts_with(text, c.pos, lc)) {
                const std::size_t begin = c.pos;
                while (!c.done() && c.peek() != '\n') ++c.pos;
                push(LexKind::Comment, begin, c.pos);
                matched_comment = true;
                break;
            }
        }
        if (matched_comment) continue;
        for (const auto& [open, close] : spec.block_comments) {
            if (starts_with(text, c.pos, open)) {
                const std::size_t begin = c.pos;
                c.pos += open.size();
                const auto end = text.find(close, c.pos);
                c.pos = end == std::string::npos ? text.size() : end + close.size();
                push(LexKind::Comment, begin, c.pos);
                matched_comment = true;
                break;
            }
        }
        if (matched_comment) continue;

        if (ch == '"' || (ch == '\'' && spec.single_quote_is_string)) {
            const std::size_t begin = c.pos;
            scan_string(c, spec.triple_quoted_strings);
            push(LexKind::String, begin, c.pos);
            continue;
        }
        if (ch == '\'' && !spec.single_quote_is_string) {  // char literal
            const std::size_t begin = c.pos;
            scan_string(c, false);
            push(LexKind::String, begin, c.pos);
            continue;
        }
        if (ch == '`' && spec.backtick_strings) {
            const std::size_t begin = c.pos;
            ++c.pos;
            while (!c.done() && c.peek() != '`') ++c.pos;
            if (!c.done()) ++c.pos;
            push(LexKind::String, begin, c.pos);
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(ch)) != 0 ||
            (ch == '.' && std::isdigit(static_cast<unsigned char>(c.peek(1))) != 0)) {
            const std::size_t begin = c.pos;
            ++c.pos;
            while (!c.done()) {
                const char d = c.peek();
                if (std::isalnum(static_cast<unsigned char>(d)) != 0 || d == '_' || d == '.') {
                    ++c.pos;
                } else if ((d == '+' || d == '-') && c.pos > begin) {
                    const char prev = text[c.pos - 1];
                    if (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P') {
                        ++c.pos;
                    } else {
                        break;
                    }
                } else {
                    break;
                }
            }
            push(LexKind::Number, begin, c.pos);
            continue;
        }

        if (is_ident_start(static_cast<unsigned char>(ch))) {
            const std::size_t begin = c.pos;
            while (!c.done() && is_ident_char(static_cast<unsigned char>(c.peek()))) ++c.pos;
            const std::string_view ident = std::string_view(text).substr(begin, c.pos - begin);
            // r"...", f'...' and friends lex as one string token.
            if (spec.triple_quoted_strings && is_string_prefix(ident) &&
                (c.peek() == '"' || c.peek() == '\'')) {
                scan_string(c, true);
                push(LexKind::String, begin, c.pos);
                continue;
            }
            if (spec.keywords.contains(std::string(ident))) {
                push(LexKind::Keyword, begin, c.pos);
            } else {
                push(LexKind::Identifier, begin, c.pos);
            }
            continue;
        }

        if (is_operator_char(ch)) {
            const std::size_t begin = c.pos;
            while (!c.done() && is_operator_char(c.peek())) ++c.pos;
            push(LexKind::Operator, begin, c.pos);
            continue;
        }

        push(LexKind::Punct, c.pos, c.pos + 1);
        ++c.pos;
    }

    // Classification pass: give identifiers their semantic-ish roles from
    // the immediate context, the way lightweight servers do.
    const auto significant_before = [&](std::size_t i) -> const LexToken* {
        while (i > 0) {
            --i;
            if (out[i].kind != LexKind::Comment) return &out[i];
        }
        return nullptr;
    };
    const auto significant_after = [&](std::size_t i) -> const LexToken* {
        for (std::size_t k = i + 1; k < out.size(); ++k) {
            if (out[k].kind != LexKind::Comment) return &out[k];
        }
        return nullptr;
    };

    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].kind != LexKind::Identifier) continue;
        const LexToken* prev = significant_before(i);
        const LexToken* next = significant_after(i);
        const bool after_dot = prev != nullptr && prev->kind == LexKind::Punct && prev->text == ".";
        const bool before_call = next != nullptr && next->kind == LexKind::Punct && next->text == "(";

        if (prev != nullptr && prev->kind == LexKind::Keyword &&
            spec.function_decl_keywords.contains(std::string(prev->text))) {
            out[i].role = core::TokenRole::Function;
        } else if (prev != nullptr && prev->kind == LexKind::Keyword &&
                   spec.class_decl_keywords.contains(std::string(prev->text))) {
            out[i].role = core::TokenRole::Class;
        } else if (before_call) {
            out[i].role = after_dot ? core::TokenRole::Method : core::TokenRole::Function;
        } else if (after_dot) {
            out[i].role = core::TokenRole::Property;
        } else if (!after_dot && module_names.contains(std::string(out[i].text))) {
            out[i].role = core::TokenRole::Namespace;
        } else {
            out[i].role = core::TokenRole::Variable;
        }
    }
    return out;
}

std::vector<core::Token> to_semantic_tokens(const std::vector<LexToken>& lexed,
                                            const core::SourceFile& file) {
    std::vector<core::Token> out;
    out.reserve(lexed.size());
    for (const auto& t : lexed) {
        if (t.kind == LexKind::Punct) continue;
        core::Position start = file.position_at(t.begin);
        const core::Position end = file.position_at(t.end);
        // Multi-line lexemes (triple-quoted strings, block comments) become
        // one token per line, which is how they travel over the wire.
        std::size_t begin_offset = t.begin;
        for (int line = start.line; line <= end.line; ++line) {
            std::size_t line_end_offset;
            core::Position seg_end;
            if (line == end.line) {
                line_end_offset = t.end;
                seg_end = end;
            } else {
                line_end_offset = file.line_start_offset(line + 1) - 1;  // before '\n'
                seg_end = file.position_at(line_end_offset);
            }
            if (line_end_offset > begin_offset) {
                core::Token token;
                token.loc = core::Location{file.path(), file.position_at(begin_offset), seg_end};
                token.lex = file.text().substr(begin_offset, line_end_offset - begin_offset);
                token.role = t.role;
                out.push_back(std::move(token));
            }
            if (line != end.line) begin_offset = file.line_start_offset(line + 1);
        }
    }
    return out;
}

}  // namespace lspgen::syntax
