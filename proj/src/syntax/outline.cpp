#include "lspgen/syntax/outline.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace lspgen::syntax {
namespace {

bool all_caps(std::string_view name) {
    bool has_alpha = false;
    for (char c : name) {
        if (std::islower(static_cast<unsigned char>(c)) != 0) return false;
        if (std::isalpha(static_cast<unsigned char>(c)) != 0) has_alpha = true;
    }
    return has_alpha;
}

bool is_punct_text(const LexToken& t, std::string_view text) {
    return t.kind == LexKind::Punct && t.text == text;
}

core::Location span(const core::SourceFile& file, std::size_t begin, std::size_t end) {
    return core::Location{file.path(), file.position_at(begin), file.position_at(end)};
}

// ---------------------------------------------------------------------------
// Python: indentation scopes
// ---------------------------------------------------------------------------

struct PyLine {
    std::size_t first = 0, last = 0;  // token index range
    int indent = 0;
};

std::vector<PyLine> logical_lines(const std::vector<LexToken>& toks,
                                  const core::SourceFile& file) {
    std::vector<PyLine> lines;
    int depth = 0;
    std::size_t first = 0;
    for (std::size_t k = 0; k < toks.size(); ++k) {
        if (toks[k].kind == LexKind::Punct) {
            if (toks[k].text == "(" || toks[k].text == "[" || toks[k].text == "{") ++depth;
            if (toks[k].text == ")" || toks[k].text == "]" || toks[k].text == "}") --depth;
        }
        const bool last_token = k + 1 == toks.size();
        bool breaks = last_token;
        if (!last_token && depth <= 0) {
            const auto& text = file.text();
            bool saw_newline = false;
            bool continuation = false;
            for (std::size_t p = toks[k].end; p < toks[k + 1].begin; ++p) {
                if (text[p] == '\\') continuation = true;
                if (text[p] == '\n') {
                    if (!continuation) saw_newline = true;
                    continuation = false;
                }
            }
            breaks = saw_newline;
        }
        if (breaks) {
            PyLine line;
            line.first = first;
            line.last = k;
            line.indent = file.position_at(toks[first].begin).character;
            lines.push_back(line);
            first = k + 1;
            if (depth < 0) depth = 0;
        }
    }
    return lines;
}

std::vector<core::Symbol> python_outline(const core::SourceFile& file,
                                         const LanguageAdapter& adapter) {
    const auto toks = lex(file.text(), adapter.lexical);
    const auto lines = logical_lines(toks, file);

    struct Open {
        core::Symbol symbol;
        int indent;
        bool is_class;
    };
    std::vector<core::Symbol> roots;
    std::vector<Open> stack;

    const auto close_to = [&](int indent, std::size_t end_offset) {
        while (!stack.empty() && stack.back().indent >= indent) {
            Open open = std::move(stack.back());
            stack.pop_back();
            open.symbol.loc.end = file.position_at(end_offset);
            if (stack.empty()) {
                roots.push_back(std::move(open.symbol));
            } else {
                stack.back().symbol.children.push_back(std::move(open.symbol));
            }
        }
    };

    std::size_t prev_line_end = 0;
    for (const auto& line : lines) {
        const LexToken& head = toks[line.first];
        if (head.kind == LexKind::Comment) {
            continue;  // comments do not close scopes
        }
        close_to(line.indent, prev_line_end);

        const bool is_def =
            head.kind == LexKind::Keyword && (head.text == "def" || head.text == "async");
        const bool is_class = head.kind == LexKind::Keyword && head.text == "class";
        if (is_def || is_class) {
            std::size_t name_idx = line.first + 1;
            if (head.text == "async" && name_idx <= line.last &&
                toks[name_idx].kind == LexKind::Keyword) {
                ++name_idx;  // async def
            }
            if (name_idx <= line.last && toks[name_idx].kind == LexKind::Identifier) {
                Open open;
                open.symbol.name = std::string(toks[name_idx].text);
                const bool in_class = !stack.empty() && stack.back().is_class;
                open.symbol.kind = is_class ? core::SymbolKind::Class
                                   : in_class ? core::SymbolKind::Method
                                              : core::SymbolKind::Function;
                open.symbol.loc = span(file, toks[line.first].begin, toks[line.last].end);
                open.indent = line.indent;
                open.is_class = is_class;
                stack.push_back(std::move(open));
                prev_line_end = toks[line.last].end;
                continue;
            }
        }
        // NAME = ... bindings become Variable/Constant symbols.
        if (head.kind == LexKind::Identifier && line.first + 1 <= line.last) {
            const LexToken& next = toks[line.first + 1];
            const bool plain_assign = next.kind == LexKind::Operator &&
                                      (next.text == "=" || next.text == ":");
            if (plain_assign) {
                core::Symbol s;
                s.name = std::string(head.text);
                s.kind = all_caps(head.text) ? core::SymbolKind::Constant
                                             : core::SymbolKind::Variable;
                s.loc = span(file, head.begin, toks[line.last].end);
                if (stack.empty()) {
                    roots.push_back(std::move(s));
                } else {
                    stack.back().symbol.children.push_back(std::move(s));
                }
            }
        }
        prev_line_end = toks[line.last].end;
    }
    close_to(0, prev_line_end);
    return roots;
}

// ---------------------------------------------------------------------------
// Brace languages
// ---------------------------------------------------------------------------

std::size_t match_brace(const std::vector<LexToken>& toks, std::size_t open) {
    int depth = 0;
    for (std::size_t k = open; k < toks.size(); ++k) {
        if (is_punct_text(toks[k], "{")) ++depth;
        if (is_punct_text(toks[k], "}")) {
            --depth;
            if (depth == 0) return k;
        }
    }
    return toks.size() - 1;
}

std::vector<core::Symbol> java_symbols_in(const std::vector<LexToken>& toks,
                                          const core::SourceFile& file,
                                          const LanguageAdapter& adapter, std::size_t begin,
                                          std::size_t end, bool member_level);

core::Symbol java_class_at(const std::vector<LexToken>& toks, const core::SourceFile& file,
                           const LanguageAdapter& adapter, std::size_t kw, std::size_t* next) {
    core::Symbol sym;
    sym.kind = core::SymbolKind::Class;
    std::size_t name_idx = kw + 1;
    if (name_idx < toks.size() && toks[name_idx].kind == LexKind::Identifier) {
        sym.name = std::string(toks[name_idx].text);
    } else {
        sym.name = "(anonymous)";
    }
    std::size_t open = name_idx;
    while (open < toks.size() && !is_punct_text(toks[open], "{")) ++open;
    const std::size_t close = open < toks.size() ? match_brace(toks, open) : toks.size() - 1;
    sym.loc = span(file, toks[kw].begin, toks[close].end);
    if (open < toks.size() && close > open) {
        sym.children = java_symbols_in(toks, file, adapter, open + 1, close, true);
    }
    *next = close + 1;
    return sym;
}

std::vector<core::Symbol> java_symbols_in(const std::vector<LexToken>& toks,
                                          const core::SourceFile& file,
                                          const LanguageAdapter& adapter, std::size_t begin,
                                          std::size_t end, bool member_level) {
    std::vector<core::Symbol> out;
    std::size_t k = begin;
    std::size_t stmt_start = begin;
    while (k < end) {
        const LexToken& t = toks[k];
        if (t.kind == LexKind::Keyword && (t.text == "package" || t.text == "import")) {
            while (k < end && !is_punct_text(toks[k], ";")) ++k;
            if (k < end) ++k;
            stmt_start = k;
            continue;
        }
        if (t.kind == LexKind::Keyword &&
            adapter.lexical.class_decl_keywords.contains(std::string(t.text))) {
            std::size_t next = k + 1;
            out.push_back(java_class_at(toks, file, adapter, k, &next));
            k = next;
            stmt_start = k;
            continue;
        }
        // method/constructor: IDENT ( ... ) [throws ...] {  — at member level,
        // or at the top of a sliced method fragment
        if (t.kind == LexKind::Identifier && k + 1 < end && is_punct_text(toks[k + 1], "(")) {
            // find the matching ')'
            int depth = 0;
            std::size_t close_paren = k + 1;
            for (std::size_t p = k + 1; p < end; ++p) {
                if (is_punct_text(toks[p], "(")) ++depth;
                if (is_punct_text(toks[p], ")")) {
                    --depth;
                    if (depth == 0) {
                        close_paren = p;
                        break;
                    }
                }
            }
            // skip "throws A, B"
            std::size_t after = close_paren + 1;
            while (after < end && !is_punct_text(toks[after], "{") &&
                   !is_punct_text(toks[after], ";") && !is_punct_text(toks[after], "=")) {
                ++after;
            }
            if (after < end && is_punct_text(toks[after], "{")) {
                const std::size_t close = match_brace(toks, after);
                core::Symbol m;
                m.name = std::string(t.text);
                m.kind = core::SymbolKind::Method;
                m.loc = span(file, toks[stmt_start].begin, toks[close].end);
                out.push_back(std::move(m));
                k = close + 1;
                stmt_start = k;
                continue;
            }
        }
        // field: ... IDENT = ...; or ... IDENT; at member level
        if (member_level && is_punct_text(t, ";")) {
            for (std::size_t p = stmt_start; p < k; ++p) {
                if (toks[p].kind == LexKind::Identifier && p + 1 <= k &&
                    ((toks[p + 1].kind == LexKind::Operator && toks[p + 1].text == "=") ||
                     is_punct_text(toks[p + 1], ";"))) {
                    core::Symbol f;
                    f.name = std::string(toks[p].text);
                    f.kind = all_caps(f.name) ? core::SymbolKind::Constant
                                              : core::SymbolKind::Field;
                    f.loc = span(file, toks[stmt_start].begin, toks[k].end);
                    out.push_back(std::move(f));
                    break;
                }
            }
            k += 1;
            stmt_start = k;
            continue;
        }
        if (is_punct_text(t, "{")) {  // initializer or stray block
            k = match_brace(toks, k) + 1;
            stmt_start = k;
            continue;
        }
        ++k;
    }
    return out;
}

std::vector<core::Symbol> java_outline(const core::SourceFile& file,
                                       const LanguageAdapter& adapter) {
    const auto toks = lex(file.text(), adapter.lexical);
    if (toks.empty()) return {};
    return java_symbols_in(toks, file, adapter, 0, toks.size(), false);
}

std::vector<core::Symbol> go_outline(const core::SourceFile& file,
                                     const LanguageAdapter& adapter) {
    const auto toks = lex(file.text(), adapter.lexical);
    std::vector<core::Symbol> out;
    std::size_t k = 0;
    while (k < toks.size()) {
        const LexToken& t = toks[k];
        if (t.kind == LexKind::Keyword && t.text == "func") {
            std::size_t name_idx = k + 1;
            bool is_method = false;
            if (name_idx < toks.size() && is_punct_text(toks[name_idx], "(")) {
                // receiver: func (r *T) Name(...)
                int depth = 0;
                while (name_idx < toks.size()) {
                    if (is_punct_text(toks[name_idx], "(")) ++depth;
                    if (is_punct_text(toks[name_idx], ")")) {
                        --depth;
                        if (depth == 0) break;
                    }
                    ++name_idx;
                }
                ++name_idx;
                is_method = true;
            }
            if (name_idx < toks.size() && toks[name_idx].kind == LexKind::Identifier) {
                std::size_t open = name_idx;
                int depth = 0;
                while (open < toks.size()) {
                    if (is_punct_text(toks[open], "{") && depth == 0) break;
                    if (is_punct_text(toks[open], "(") || is_punct_text(toks[open], "[")) ++depth;
                    if (is_punct_text(toks[open], ")") || is_punct_text(toks[open], "]")) --depth;
                    ++open;
                }
                const std::size_t close =
                    open < toks.size() ? match_brace(toks, open) : toks.size() - 1;
                core::Symbol s;
                s.name = std::string(toks[name_idx].text);
                s.kind = is_method ? core::SymbolKind::Method : core::SymbolKind::Function;
                s.loc = span(file, t.begin, toks[close].end);
                out.push_back(std::move(s));
                k = close + 1;
                continue;
            }
        }
        if (t.kind == LexKind::Keyword && t.text == "type" && k + 1 < toks.size() &&
            toks[k + 1].kind == LexKind::Identifier) {
            std::size_t open = k + 2;
            while (open < toks.size() && !is_punct_text(toks[open], "{")) {
                if (is_punct_text(toks[open], ";")) break;
                // type aliases end at the newline; approximate with next token line
                ++open;
                if (open < toks.size() &&
                    file.position_at(toks[open].begin).line !=
                        file.position_at(toks[k].begin).line &&
                    !is_punct_text(toks[open], "{")) {
                    break;
                }
            }
            std::size_t close = k + 1;
            if (open < toks.size() && is_punct_text(toks[open], "{")) {
                close = match_brace(toks, open);
            } else {
                close = open < toks.size() ? open - 1 : toks.size() - 1;
            }
            core::Symbol s;
            s.name = std::string(toks[k + 1].text);
            s.kind = core::SymbolKind::Class;
            s.loc = span(file, t.begin, toks[close].end);
            out.push_back(std::move(s));
            k = close + 1;
            continue;
        }
        if (t.kind == LexKind::Keyword && (t.text == "var" || t.text == "const")) {
            const bool constant = t.text == "const";
            if (k + 1 < toks.size() && is_punct_text(toks[k + 1], "(")) {
                // grouped declarations: every NAME = ... line binds a symbol
                int depth = 0;
                std::size_t p = k + 1;
                std::optional<int> current_line;
                for (; p < toks.size(); ++p) {
                    if (is_punct_text(toks[p], "(")) ++depth;
                    if (is_punct_text(toks[p], ")")) {
                        --depth;
                        if (depth == 0) break;
                    }
                    if (depth == 1 && toks[p].kind == LexKind::Identifier) {
                        const int line = file.position_at(toks[p].begin).line;
                        if (!current_line || *current_line != line) {
                            current_line = line;
                            core::Symbol s;
                            s.name = std::string(toks[p].text);
                            s.kind = constant ? core::SymbolKind::Constant
                                              : core::SymbolKind::Variable;
                            std::size_t line_last = p;
                            while (line_last + 1 < toks.size() &&
                                   file.position_at(toks[line_last + 1].begin).line == line) {
                                ++line_last;
                            }
                            s.loc = span(file, toks[p].begin, toks[line_last].end);
                            out.push_back(std::move(s));
                        }
                    }
                }
                k = p + 1;
                continue;
            }
            if (k + 1 < toks.size() && toks[k + 1].kind == LexKind::Identifier) {
                core::Symbol s;
                s.name = std::string(toks[k + 1].text);
                s.kind = constant ? core::SymbolKind::Constant : core::SymbolKind::Variable;
                const int line = file.position_at(toks[k].begin).line;
                std::size_t line_last = k + 1;
                while (line_last + 1 < toks.size() &&
                       file.position_at(toks[line_last + 1].begin).line == line) {
                    ++line_last;
                }
                s.loc = span(file, t.begin, toks[line_last].end);
                out.push_back(std::move(s));
                k = line_last + 1;
                continue;
            }
        }
        ++k;
    }
    return out;
}

}  // namespace

std::vector<core::Symbol> file_outline(const core::SourceFile& file,
                                       const LanguageAdapter& adapter) {
    if (adapter.block_style == BlockStyle::indentation) return python_outline(file, adapter);
    if (adapter.language_id == "go") return go_outline(file, adapter);
    return java_outline(file, adapter);
}

std::string extract_import_block(const core::SourceFile& file, const LanguageAdapter& adapter) {
    std::string out;
    const auto& text = file.text();
    std::size_t pos = 0;
    bool in_docstring = false;
    std::string docstring_quote;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));

        const auto starts = [&](const char* prefix) { return trimmed.rfind(prefix, 0) == 0; };

        if (in_docstring) {
            if (trimmed.find(docstring_quote) != std::string::npos) in_docstring = false;
        } else if (adapter.language_id == "python") {
            if (starts("\"\"\"") || starts("'''")) {
                docstring_quote = trimmed.substr(0, 3);
                if (trimmed.size() < 6 || trimmed.find(docstring_quote, 3) == std::string::npos) {
                    in_docstring = true;
                }
            } else if (starts("import ") || starts("from ")) {
                out += line + "\n";
            } else if (!trimmed.empty() && !starts("#")) {
                break;
            }
        } else if (adapter.language_id == "java") {
            if (starts("package ") || starts("import ")) {
                out += line + "\n";
            } else if (!trimmed.empty() && !starts("//") && !starts("/*") && !starts("*")) {
                break;
            }
        } else {  // go
            if (starts("package ")) {
                out += line + "\n";
            } else if (starts("import (")) {
                out += line + "\n";
                std::size_t p = eol + 1;
                while (p < text.size()) {
                    std::size_t e = text.find('\n', p);
                    if (e == std::string::npos) e = text.size();
                    const std::string l = text.substr(p, e - p);
                    out += l + "\n";
                    if (l.find(')') != std::string::npos) {
                        pos = e == text.size() ? e : e + 1;
                        break;
                    }
                    p = e + 1;
                }
                if (pos <= eol) pos = text.size();
                continue;
            } else if (starts("import ")) {
                out += line + "\n";
            } else if (!trimmed.empty() && !starts("//")) {
                break;
            }
        }
        pos = eol == text.size() ? eol : eol + 1;
    }
    return out;
}

std::unordered_set<std::string> imported_module_names(const core::SourceFile& file,
                                                      const LanguageAdapter& adapter) {
    std::unordered_set<std::string> names;
    const std::string block = extract_import_block(file, adapter);
    std::size_t pos = 0;
    while (pos < block.size()) {
        std::size_t eol = block.find('\n', pos);
        if (eol == std::string::npos) eol = block.size();
        std::string line = block.substr(pos, eol - pos);
        pos = eol + 1;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));

        const auto first_word_after = [&](const std::string& prefix) -> std::string {
            if (trimmed.rfind(prefix, 0) != 0) return {};
            std::string rest = trimmed.substr(prefix.size());
            std::string word;
            for (char c : rest) {
                if (std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_') {
                    word.push_back(c);
                } else {
                    break;
                }
            }
            return word;
        };

        if (adapter.language_id == "python") {
            if (auto w = first_word_after("import "); !w.empty()) names.insert(w);
            if (trimmed.rfind("from ", 0) == 0) {
                const auto import_pos = trimmed.find(" import ");
                if (import_pos != std::string::npos) {
                    std::string rest = trimmed.substr(import_pos + 8);
                    std::string word;
                    for (char c : rest) {
                        if (std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_') {
                            word.push_back(c);
                        } else if (c == ',' || c == ' ') {
                            if (!word.empty()) names.insert(word);
                            word.clear();
                        } else {
                            break;
                        }
                    }
                    if (!word.empty()) names.insert(word);
                }
            }
        } else if (adapter.language_id == "go") {
            // import "path/base" or an aliased form
            const auto quote = trimmed.find('"');
            if (quote != std::string::npos) {
                const auto close = trimmed.find('"', quote + 1);
                if (close != std::string::npos) {
                    std::string path = trimmed.substr(quote + 1, close - quote - 1);
                    const auto slash = path.rfind('/');
                    names.insert(slash == std::string::npos ? path : path.substr(slash + 1));
                }
            }
        }
    }
    return names;
}

}  // namespace lspgen::syntax
