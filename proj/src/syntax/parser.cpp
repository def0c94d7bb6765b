#include "lspgen/syntax/parser.hpp"

#include <algorithm>
#include <cassert>

namespace lspgen::syntax {
namespace {

bool is_punct(const LexToken& t, std::string_view text) {
    return t.kind == LexKind::Punct && t.text == text;
}

bool is_op(const LexToken& t, std::string_view text) {
    return t.kind == LexKind::Operator && t.text == text;
}

bool is_kw(const LexToken& t, const std::unordered_set<std::string>& set) {
    return t.kind == LexKind::Keyword && set.contains(std::string(t.text));
}

int depth_change(const LexToken& t) {
    if (t.kind != LexKind::Punct) return 0;
    if (t.text == "(" || t.text == "[" || t.text == "{") return 1;
    if (t.text == ")" || t.text == "]" || t.text == "}") return -1;
    return 0;
}

/// Shared parse state over the lexical stream of one method body.
struct Engine {
    const std::vector<LexToken>& toks;
    const core::SourceFile& file;
    const LanguageAdapter& adapter;

    core::Location span_of(std::size_t first, std::size_t last) const {
        // [first, last] token index range, inclusive.
        return core::Location{file.path(), file.position_at(toks[first].begin),
                              file.position_at(toks[last].end)};
    }

    SyntaxNode leaf(std::string kind, std::size_t first, std::size_t last) const {
        return SyntaxNode{std::move(kind), span_of(first, last), {}};
    }
};

// ---------------------------------------------------------------------------
// Brace-family engine (Java, Go)
// ---------------------------------------------------------------------------

struct BraceParser {
    Engine e;
    std::size_t i = 0;
    bool java_style;  // parenthesized guards; otherwise Go headers up to '{'

    const std::vector<LexToken>& toks() const { return e.toks; }
    bool done() const { return i >= toks().size(); }
    const LexToken& cur() const { return toks()[i]; }

    bool same_statement_continues(std::size_t pos) const {
        // Go has no statement terminators; emulate automatic semicolon
        // insertion: a newline ends the statement unless the previous token
        // cannot end one.
        if (pos + 1 >= toks().size()) return false;
        const LexToken& a = toks()[pos];
        const LexToken& b = toks()[pos + 1];
        const auto line_of = [&](std::size_t off) { return e.file.position_at(off).line; };
        if (line_of(a.end > 0 ? a.end - 1 : a.end) == line_of(b.begin)) return true;
        if (a.kind == LexKind::Operator && a.text != "++" && a.text != "--") return true;
        if (is_punct(a, ",") || is_punct(a, ".") || is_punct(a, "(") || is_punct(a, "[")) {
            return true;
        }
        return false;
    }

    // Consumes a balanced paren group starting at '('; returns the index of
    // the matching ')'. On imbalance, returns the last index consumed.
    std::size_t match_paren(std::size_t open) {
        int depth = 0;
        for (std::size_t k = open; k < toks().size(); ++k) {
            depth += depth_change(toks()[k]);
            if (depth == 0) return k;
        }
        return toks().size() - 1;
    }

    std::vector<SyntaxNode> parse_statements(bool stop_at_close_brace) {
        std::vector<SyntaxNode> out;
        while (!done()) {
            if (is_punct(cur(), "}")) {
                if (stop_at_close_brace) return out;
                // Stray brace: record and move on.
                out.push_back(e.leaf("error", i, i));
                ++i;
                continue;
            }
            if (is_punct(cur(), ";")) {
                ++i;
                continue;
            }
            out.push_back(parse_statement());
        }
        return out;
    }

    SyntaxNode parse_statement() {
        const std::size_t start = i;
        const LexToken& t = cur();
        const auto& table = e.adapter.constructs;

        if (t.kind == LexKind::Keyword) {
            const std::string kw(t.text);
            if (table.if_like.contains(kw)) return parse_if();
            if (table.loop_like.contains(kw)) return parse_loop();
            if (table.switch_like.contains(kw)) return parse_switch();
            if (table.try_like.contains(kw)) return parse_try();
            if (table.with_like.contains(kw)) return parse_with();
            if (table.return_like.contains(kw)) return parse_simple("return_statement");
            if (table.raise_like.contains(kw)) return parse_simple("raise_statement");
            if (table.break_like.contains(kw)) return parse_simple("break_statement");
            if (table.continue_like.contains(kw)) return parse_simple("continue_statement");
        }
        if (is_punct(t, "{")) {  // bare block
            return parse_block();
        }
        (void)start;
        return parse_simple("statement");
    }

    // Guard of a control header. Java: the parenthesized group after the
    // keyword. Go: every token between the keyword and the block's '{'.
    // Returns a condition node trimmed to the guard's own tokens.
    std::optional<SyntaxNode> parse_guard() {
        if (java_style) {
            if (done() || !is_punct(cur(), "(")) return std::nullopt;
            const std::size_t open = i;
            const std::size_t close = match_paren(open);
            i = close + 1;
            if (close <= open + 1) return std::nullopt;  // empty parens
            return e.leaf("condition", open + 1, close - 1);
        }
        const std::size_t first = i;
        int depth = 0;
        std::size_t last = first;
        bool any = false;
        while (!done()) {
            if (depth == 0 && is_punct(cur(), "{")) break;
            depth += depth_change(cur());
            last = i;
            any = true;
            ++i;
        }
        if (!any) return std::nullopt;
        return e.leaf("condition", first, last);
    }

    SyntaxNode parse_block() {
        const std::size_t open = i;
        if (!done() && is_punct(cur(), "{")) ++i;
        auto stmts = parse_statements(true);
        std::size_t close = i;
        if (!done() && is_punct(cur(), "}")) {
            ++i;
        } else {
            close = toks().empty() ? 0 : toks().size() - 1;
            stmts.push_back(e.leaf("error", std::min(open, close), close));
        }
        SyntaxNode block{"block", e.span_of(open, std::min(close, toks().size() - 1)),
                         std::move(stmts)};
        return block;
    }

    // Control bodies may be a braced block or a single bare statement.
    SyntaxNode parse_body() {
        if (!done() && is_punct(cur(), "{")) return parse_block();
        SyntaxNode block{"block", {}, {}};
        if (!done()) {
            auto stmt = parse_statement();
            block.loc = stmt.loc;
            block.children.push_back(std::move(stmt));
        }
        return block;
    }

    SyntaxNode parse_if() {
        const std::size_t start = i;
        ++i;  // if
        SyntaxNode node{"if_statement", {}, {}};
        if (auto guard = parse_guard()) node.children.push_back(std::move(*guard));
        node.children.push_back(parse_body());
        std::size_t last = i > 0 ? i - 1 : 0;
        if (!done() && cur().kind == LexKind::Keyword && cur().text == "else") {
            const std::size_t else_start = i;
            ++i;
            SyntaxNode else_clause{"else_clause", {}, {}};
            if (!done() && is_kw(cur(), e.adapter.constructs.if_like)) {
                else_clause.children.push_back(parse_if());
            } else {
                else_clause.children.push_back(parse_body());
            }
            last = i > 0 ? i - 1 : 0;
            else_clause.loc = e.span_of(else_start, last);
            node.children.push_back(std::move(else_clause));
        }
        node.loc = e.span_of(start, last);
        return node;
    }

    SyntaxNode parse_loop() {
        const std::size_t start = i;
        const bool is_do = cur().text == "do";
        ++i;
        SyntaxNode node{"loop_statement", {}, {}};
        if (is_do) {
            node.children.push_back(parse_body());
            if (!done() && cur().kind == LexKind::Keyword && cur().text == "while") {
                ++i;
                if (auto guard = parse_guard()) node.children.push_back(std::move(*guard));
            }
        } else {
            if (auto guard = parse_guard()) node.children.push_back(std::move(*guard));
            node.children.push_back(parse_body());
        }
        node.loc = e.span_of(start, i > 0 ? i - 1 : 0);
        return node;
    }

    SyntaxNode parse_switch() {
        const std::size_t start = i;
        ++i;  // switch/select
        SyntaxNode node{"switch_statement", {}, {}};
        // Scrutinee is not a guard; arm expressions are.
        if (java_style) {
            if (!done() && is_punct(cur(), "(")) {
                const std::size_t open = i;
                const std::size_t close = match_paren(open);
                i = close + 1;
                if (close > open + 1) node.children.push_back(e.leaf("scrutinee", open + 1, close - 1));
            }
        } else {
            const std::size_t first = i;
            std::size_t last = first;
            bool any = false;
            int depth = 0;
            while (!done() && !(depth == 0 && is_punct(cur(), "{"))) {
                depth += depth_change(cur());
                last = i;
                any = true;
                ++i;
            }
            if (any) node.children.push_back(e.leaf("scrutinee", first, last));
        }
        if (!done() && is_punct(cur(), "{")) ++i;
        const auto& table = e.adapter.constructs;
        while (!done() && !is_punct(cur(), "}")) {
            if (cur().kind == LexKind::Keyword && table.case_like.contains(std::string(cur().text))) {
                node.children.push_back(parse_case_clause(false));
            } else if (cur().kind == LexKind::Keyword &&
                       table.default_like.contains(std::string(cur().text))) {
                node.children.push_back(parse_case_clause(true));
            } else {
                node.children.push_back(e.leaf("error", i, i));
                ++i;
            }
        }
        if (!done()) ++i;  // '}'
        node.loc = e.span_of(start, i > 0 ? i - 1 : 0);
        return node;
    }

    SyntaxNode parse_case_clause(bool is_default) {
        const std::size_t start = i;
        ++i;  // case/default
        SyntaxNode node{is_default ? "default_clause" : "case_clause", {}, {}};
        // Guard runs to ':' or '->' at depth 0.
        if (!is_default) {
            const std::size_t first = i;
            std::size_t last = first;
            bool any = false;
            int depth = 0;
            while (!done()) {
                if (depth == 0 && (is_op(cur(), ":") || is_punct(cur(), ":") ||
                                   is_op(cur(), "->"))) {
                    break;
                }
                depth += depth_change(cur());
                last = i;
                any = true;
                ++i;
            }
            if (any) node.children.push_back(e.leaf("condition", first, last));
        } else {
            while (!done() && !(is_op(cur(), ":") || is_punct(cur(), ":") || is_op(cur(), "->"))) {
                ++i;
            }
        }
        if (!done()) ++i;  // separator
        // Arm body: statements until the next case/default or '}'.
        SyntaxNode block{"block", {}, {}};
        const std::size_t body_start = i;
        const auto& table = e.adapter.constructs;
        while (!done() && !is_punct(cur(), "}")) {
            if (cur().kind == LexKind::Keyword &&
                (table.case_like.contains(std::string(cur().text)) ||
                 table.default_like.contains(std::string(cur().text)))) {
                break;
            }
            block.children.push_back(parse_statement());
        }
        const std::size_t body_end = i > body_start ? i - 1 : body_start;
        if (body_start < toks().size()) {
            block.loc = e.span_of(body_start, std::min(body_end, toks().size() - 1));
        } else {
            block.loc = e.span_of(start, toks().size() - 1);
        }
        node.children.push_back(std::move(block));
        node.loc = e.span_of(start, i > 0 ? i - 1 : 0);
        return node;
    }

    SyntaxNode parse_try() {
        const std::size_t start = i;
        ++i;
        SyntaxNode node{"try_statement", {}, {}};
        // Java try-with-resources header.
        if (!done() && is_punct(cur(), "(")) i = match_paren(i) + 1;
        node.children.push_back(parse_block());
        const auto& table = e.adapter.constructs;
        while (!done() && cur().kind == LexKind::Keyword &&
               table.handler_like.contains(std::string(cur().text))) {
            const std::size_t h_start = i;
            ++i;
            if (!done() && is_punct(cur(), "(")) i = match_paren(i) + 1;
            SyntaxNode handler{"handler_clause", {}, {}};
            handler.children.push_back(parse_block());
            handler.loc = e.span_of(h_start, i > 0 ? i - 1 : 0);
            node.children.push_back(std::move(handler));
        }
        if (!done() && cur().kind == LexKind::Keyword &&
            table.finally_like.contains(std::string(cur().text))) {
            const std::size_t f_start = i;
            ++i;
            SyntaxNode fin{"finally_clause", {}, {}};
            fin.children.push_back(parse_block());
            fin.loc = e.span_of(f_start, i > 0 ? i - 1 : 0);
            node.children.push_back(std::move(fin));
        }
        node.loc = e.span_of(start, i > 0 ? i - 1 : 0);
        return node;
    }

    SyntaxNode parse_with() {  // synchronized/defer style statement + block
        const std::size_t start = i;
        ++i;
        while (!done() && !is_punct(cur(), "{")) {
            if (is_punct(cur(), "(")) {
                i = match_paren(i) + 1;
                continue;
            }
            if (is_punct(cur(), ";")) break;
            ++i;
        }
        SyntaxNode node{"statement_with_block", {}, {}};
        if (!done() && is_punct(cur(), "{")) node.children.push_back(parse_block());
        node.loc = e.span_of(start, i > 0 ? i - 1 : 0);
        return node;
    }

    // A run of tokens up to ';', a '}' boundary, or a Go newline break.
    SyntaxNode parse_simple(const std::string& kind) {
        const std::size_t start = i;
        std::size_t last = i;
        int depth = 0;
        std::optional<std::size_t> ternary_q;
        std::optional<std::size_t> ternary_colon;
        while (!done()) {
            const LexToken& t = cur();
            if (depth == 0 && is_punct(t, ";")) {
                ++i;
                break;
            }
            if (depth == 0 && is_punct(t, "}")) break;
            if (depth == 0 && is_punct(t, "{")) {
                // Composite literal vs. unexpected block: treat a '{' inside
                // a simple statement as nested structure and skip it.
                int brace = 0;
                while (!done()) {
                    if (is_punct(cur(), "{")) ++brace;
                    if (is_punct(cur(), "}")) {
                        --brace;
                        if (brace == 0) break;
                    }
                    last = i;
                    ++i;
                }
                if (!done()) {
                    last = i;
                    ++i;
                }
                continue;
            }
            if (e.adapter.c_style_ternary && depth == 0 && is_op(t, "?") && !ternary_q) {
                ternary_q = i;
            }
            if (e.adapter.c_style_ternary && depth == 0 && ternary_q && !ternary_colon &&
                (is_op(t, ":") || is_punct(t, ":"))) {
                ternary_colon = i;
            }
            depth += depth_change(t);
            last = i;
            ++i;
            if (!java_style && depth == 0 && !same_statement_continues(i - 1)) break;
        }
        SyntaxNode node{kind, e.span_of(start, std::min(last, toks().size() - 1)), {}};
        if (ternary_q && *ternary_q > start) {
            // cond ? a : b gates behavior like an if; surface the guard.
            SyntaxNode cond_expr{"conditional_expression",
                                 e.span_of(start, std::min(last, toks().size() - 1)),
                                 {}};
            std::size_t guard_first = start;
            if (toks()[start].kind == LexKind::Keyword) guard_first = start + 1;  // return c ? ..
            if (guard_first < *ternary_q) {
                cond_expr.children.push_back(e.leaf("condition", guard_first, *ternary_q - 1));
            }
            node.children.push_back(std::move(cond_expr));
        }
        return node;
    }
};

// ---------------------------------------------------------------------------
// Indentation-family engine (Python)
// ---------------------------------------------------------------------------

struct LogicalLine {
    std::size_t first_tok = 0;  // token index range [first, last]
    std::size_t last_tok = 0;
    int indent = 0;
};

struct IndentParser {
    Engine e;
    std::vector<LogicalLine> lines;
    std::size_t li = 0;

    void split_lines() {
        const auto& toks = e.toks;
        int depth = 0;
        std::size_t first = 0;
        for (std::size_t k = 0; k < toks.size(); ++k) {
            depth += depth_change(toks[k]);
            const bool last_token = k + 1 == toks.size();
            bool breaks = last_token;
            if (!last_token && depth <= 0) {
                // A newline between k and k+1 ends the logical line unless
                // escaped with a backslash.
                const auto& text = e.file.text();
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
                LogicalLine line;
                line.first_tok = first;
                line.last_tok = k;
                const auto pos = e.file.position_at(toks[first].begin);
                line.indent = pos.character;
                lines.push_back(line);
                first = k + 1;
                if (depth < 0) depth = 0;
            }
        }
    }

    bool done() const { return li >= lines.size(); }

    const LexToken& tok(std::size_t idx) const { return e.toks[idx]; }

    // Token index of the suite colon: the last ':' at depth 0 in the line.
    std::optional<std::size_t> suite_colon(const LogicalLine& line, std::size_t from) const {
        std::optional<std::size_t> found;
        int depth = 0;
        for (std::size_t k = from; k <= line.last_tok; ++k) {
            if (depth == 0 && (is_op(tok(k), ":") || is_punct(tok(k), ":"))) found = k;
            depth += depth_change(tok(k));
        }
        return found;
    }

    std::vector<SyntaxNode> parse_suite(int parent_indent) {
        std::vector<SyntaxNode> out;
        while (!done()) {
            const LogicalLine& line = lines[li];
            if (line.indent <= parent_indent) break;
            out.push_back(parse_line_statement(line.indent));
        }
        return out;
    }

    SyntaxNode parse_line_statement(int indent) {
        const LogicalLine line = lines[li];
        const LexToken& head = tok(line.first_tok);
        const auto& table = e.adapter.constructs;

        if (head.kind == LexKind::Keyword) {
            const std::string kw(head.text);
            if (table.if_like.contains(kw)) return parse_if(indent);
            if (table.loop_like.contains(kw)) return parse_loop(indent);
            if (table.switch_like.contains(kw)) return parse_switch(indent);
            if (table.try_like.contains(kw)) return parse_try(indent);
            if (table.with_like.contains(kw)) return parse_compound("statement_with_block", indent);
            if (table.return_like.contains(kw)) return parse_simple("return_statement");
            if (table.raise_like.contains(kw)) return parse_simple("raise_statement");
            if (table.break_like.contains(kw)) return parse_simple("break_statement");
            if (table.continue_like.contains(kw)) return parse_simple("continue_statement");
            if (kw == "def" || kw == "class" || kw == "async") {
                // Nested definitions are opaque single statements of this body.
                return parse_compound("statement_with_block", indent);
            }
        }
        return parse_simple("statement");
    }

    // Header line with a condition between the keyword and the suite colon,
    // plus an indented (or inline) body.
    SyntaxNode parse_header(const std::string& kind, int indent, bool guard_expected,
                            std::vector<SyntaxNode>* extra_clauses) {
        const LogicalLine line = lines[li];
        const std::size_t head = line.first_tok;
        SyntaxNode node{kind, {}, {}};
        const auto colon = suite_colon(line, head + 1);
        const std::size_t guard_first = head + 1;
        const std::size_t guard_last = colon ? *colon - 1 : line.last_tok;
        if (guard_expected && guard_first <= guard_last && guard_last <= line.last_tok) {
            node.children.push_back(
                e.leaf("condition", trim_open_paren(guard_first, guard_last),
                       trim_close_paren(guard_first, guard_last)));
        }
        ++li;

        SyntaxNode block{"block", {}, {}};
        if (colon && *colon < line.last_tok) {
            // Inline suite on the same logical line.
            block.children.push_back(inline_statement(*colon + 1, line.last_tok));
            block.loc = e.span_of(*colon + 1, line.last_tok);
        } else {
            auto stmts = parse_suite(indent);
            if (!stmts.empty()) {
                block.loc =
                    core::Location{e.file.path(), stmts.front().loc.start, stmts.back().loc.end};
            } else {
                block.loc = e.span_of(line.first_tok, line.last_tok);
            }
            block.children = std::move(stmts);
        }
        node.children.push_back(std::move(block));
        (void)extra_clauses;
        node.loc = node_span(line.first_tok, node);
        return node;
    }

    std::size_t trim_open_paren(std::size_t first, std::size_t last) const {
        // A fully parenthesized guard reads better without its outer parens.
        if (first < last && is_punct(tok(first), "(") && is_punct(tok(last), ")")) {
            int depth = 0;
            for (std::size_t k = first; k <= last; ++k) {
                depth += depth_change(tok(k));
                if (depth == 0 && k < last) return first;  // parens close early
            }
            return first + 1;
        }
        return first;
    }

    std::size_t trim_close_paren(std::size_t first, std::size_t last) const {
        if (first < last && is_punct(tok(first), "(") && is_punct(tok(last), ")")) {
            int depth = 0;
            for (std::size_t k = first; k <= last; ++k) {
                depth += depth_change(tok(k));
                if (depth == 0 && k < last) return last;
            }
            return last - 1;
        }
        return last;
    }

    core::Location node_span(std::size_t first_tok_idx, const SyntaxNode& node) const {
        core::Position end = e.file.position_at(tok(first_tok_idx).end);
        for (const auto& c : node.children) end = std::max(end, c.loc.end);
        return core::Location{e.file.path(), e.file.position_at(tok(first_tok_idx).begin), end};
    }

    SyntaxNode parse_if(int indent) {
        SyntaxNode node = parse_header("if_statement", indent, true, nullptr);
        // elif/else chains at the same indent attach to this if.
        while (!done()) {
            const LogicalLine& next = lines[li];
            if (next.indent != indent) break;
            const LexToken& head = tok(next.first_tok);
            if (head.kind != LexKind::Keyword) break;
            if (head.text == "elif") {
                SyntaxNode else_clause{"else_clause", {}, {}};
                else_clause.children.push_back(parse_if_from_elif(indent));
                else_clause.loc = else_clause.children.front().loc;
                node.children.push_back(std::move(else_clause));
                break;  // the nested if owns any further chain
            }
            if (head.text == "else") {
                SyntaxNode else_clause{"else_clause", {}, {}};
                SyntaxNode body = parse_header("block_holder", indent, false, nullptr);
                // unwrap: parse_header produced kind block_holder with block child
                else_clause.children.push_back(std::move(body.children.back()));
                else_clause.loc = else_clause.children.front().loc;
                node.children.push_back(std::move(else_clause));
                break;
            }
            break;
        }
        node.loc.end = std::max(node.loc.end, node.children.back().loc.end);
        return node;
    }

    SyntaxNode parse_if_from_elif(int indent) {
        SyntaxNode node = parse_header("if_statement", indent, true, nullptr);
        while (!done()) {
            const LogicalLine& next = lines[li];
            if (next.indent != indent) break;
            const LexToken& head = tok(next.first_tok);
            if (head.kind != LexKind::Keyword) break;
            if (head.text == "elif") {
                SyntaxNode else_clause{"else_clause", {}, {}};
                else_clause.children.push_back(parse_if_from_elif(indent));
                else_clause.loc = else_clause.children.front().loc;
                node.children.push_back(std::move(else_clause));
                break;
            }
            if (head.text == "else") {
                SyntaxNode else_clause{"else_clause", {}, {}};
                SyntaxNode body = parse_header("block_holder", indent, false, nullptr);
                else_clause.children.push_back(std::move(body.children.back()));
                else_clause.loc = else_clause.children.front().loc;
                node.children.push_back(std::move(else_clause));
                break;
            }
            break;
        }
        node.loc.end = std::max(node.loc.end, node.children.back().loc.end);
        return node;
    }

    SyntaxNode parse_loop(int indent) {
        SyntaxNode node = parse_header("loop_statement", indent, true, nullptr);
        // for/while ... else: the else suite runs after normal exit; flow-wise
        // it is a trailing block.
        if (!done()) {
            const LogicalLine& next = lines[li];
            if (next.indent == indent && tok(next.first_tok).kind == LexKind::Keyword &&
                tok(next.first_tok).text == "else") {
                SyntaxNode body = parse_header("block_holder", indent, false, nullptr);
                SyntaxNode else_clause{"else_clause", body.children.back().loc, {}};
                else_clause.children.push_back(std::move(body.children.back()));
                node.children.push_back(std::move(else_clause));
            }
        }
        node.loc.end = std::max(node.loc.end, node.children.back().loc.end);
        return node;
    }

    SyntaxNode parse_switch(int indent) {  // match statement
        const LogicalLine line = lines[li];
        SyntaxNode node{"switch_statement", {}, {}};
        const auto colon = suite_colon(line, line.first_tok + 1);
        if (colon && *colon > line.first_tok + 1) {
            node.children.push_back(e.leaf("scrutinee", line.first_tok + 1, *colon - 1));
        }
        ++li;
        while (!done()) {
            const LogicalLine& case_line = lines[li];
            if (case_line.indent <= indent) break;
            const LexToken& head = tok(case_line.first_tok);
            if (head.kind == LexKind::Keyword && head.text == "case") {
                const auto case_colon = suite_colon(case_line, case_line.first_tok + 1);
                SyntaxNode clause{"case_clause", {}, {}};
                bool is_default = false;
                if (case_colon && *case_colon > case_line.first_tok + 1) {
                    // `case _:` is the default arm.
                    if (*case_colon == case_line.first_tok + 2 &&
                        tok(case_line.first_tok + 1).text == "_") {
                        is_default = true;
                    } else {
                        clause.children.push_back(
                            e.leaf("condition", case_line.first_tok + 1, *case_colon - 1));
                    }
                }
                if (is_default) clause.kind = "default_clause";
                const std::size_t head_idx = case_line.first_tok;
                ++li;
                SyntaxNode block{"block", {}, {}};
                auto stmts = parse_suite(case_line.indent);
                if (!stmts.empty()) {
                    block.loc = core::Location{e.file.path(), stmts.front().loc.start,
                                               stmts.back().loc.end};
                } else {
                    block.loc = e.span_of(head_idx, case_line.last_tok);
                }
                block.children = std::move(stmts);
                clause.children.push_back(std::move(block));
                clause.loc = node_span(head_idx, clause);
                node.children.push_back(std::move(clause));
            } else {
                ++li;  // stray line inside match
            }
        }
        node.loc = node_span(line.first_tok, node);
        return node;
    }

    SyntaxNode parse_try(int indent) {
        SyntaxNode body = parse_header("block_holder", indent, false, nullptr);
        SyntaxNode node{"try_statement", {}, {}};
        node.children.push_back(std::move(body.children.back()));
        while (!done()) {
            const LogicalLine& next = lines[li];
            if (next.indent != indent) break;
            const LexToken& head = tok(next.first_tok);
            if (head.kind != LexKind::Keyword) break;
            if (e.adapter.constructs.handler_like.contains(std::string(head.text))) {
                SyntaxNode handler{"handler_clause", {}, {}};
                SyntaxNode h = parse_header("block_holder", indent, false, nullptr);
                handler.children.push_back(std::move(h.children.back()));
                handler.loc = handler.children.front().loc;
                node.children.push_back(std::move(handler));
                continue;
            }
            if (e.adapter.constructs.finally_like.contains(std::string(head.text)) ||
                head.text == "else") {
                SyntaxNode fin{"finally_clause", {}, {}};
                SyntaxNode f = parse_header("block_holder", indent, false, nullptr);
                fin.children.push_back(std::move(f.children.back()));
                fin.loc = fin.children.front().loc;
                node.children.push_back(std::move(fin));
                continue;
            }
            break;
        }
        if (!node.children.empty()) {
            node.loc = node.children.front().loc;
            for (const auto& c : node.children) node.loc.end = std::max(node.loc.end, c.loc.end);
        }
        return node;
    }

    SyntaxNode parse_compound(const std::string& kind, int indent) {
        SyntaxNode body = parse_header("block_holder", indent, false, nullptr);
        SyntaxNode node{kind, body.loc, {}};
        node.children.push_back(std::move(body.children.back()));
        node.loc = node.children.front().loc;
        return node;
    }

    SyntaxNode inline_statement(std::size_t first, std::size_t last) {
        SyntaxNode node{"statement", e.span_of(first, last), {}};
        if (tok(first).kind == LexKind::Keyword) {
            const auto& table = e.adapter.constructs;
            const std::string kw(tok(first).text);
            if (table.return_like.contains(kw)) node.kind = "return_statement";
            if (table.raise_like.contains(kw)) node.kind = "raise_statement";
            if (table.break_like.contains(kw)) node.kind = "break_statement";
            if (table.continue_like.contains(kw)) node.kind = "continue_statement";
        }
        attach_python_ternary(node, first, last);
        return node;
    }

    SyntaxNode parse_simple(const std::string& kind) {
        const LogicalLine line = lines[li];
        ++li;
        SyntaxNode node{kind, e.span_of(line.first_tok, line.last_tok), {}};
        attach_python_ternary(node, line.first_tok, line.last_tok);
        return node;
    }

    void attach_python_ternary(SyntaxNode& node, std::size_t first, std::size_t last) {
        if (!e.adapter.python_ternary) return;
        // `value if cond else other` anywhere past the first token.
        std::optional<std::size_t> if_idx;
        for (std::size_t k = first + 1; k <= last; ++k) {
            if (tok(k).kind == LexKind::Keyword && tok(k).text == "if") {
                if_idx = k;
                break;
            }
        }
        if (!if_idx) return;
        std::optional<std::size_t> else_idx;
        for (std::size_t k = *if_idx + 1; k <= last; ++k) {
            if (tok(k).kind == LexKind::Keyword && tok(k).text == "else") {
                else_idx = k;
                break;
            }
        }
        if (!else_idx || *else_idx <= *if_idx + 1) return;
        SyntaxNode cond_expr{"conditional_expression", e.span_of(first, last), {}};
        cond_expr.children.push_back(e.leaf("condition", *if_idx + 1, *else_idx - 1));
        node.children.push_back(std::move(cond_expr));
    }
};

}  // namespace

int count_kind(const SyntaxNode& node, const std::string& kind) {
    int n = node.kind == kind ? 1 : 0;
    for (const auto& c : node.children) n += count_kind(c, kind);
    return n;
}

SyntaxNode parse_source(const std::string& source, const std::string& path,
                        const LanguageAdapter& adapter) {
    core::SourceFile file(path, source, adapter.language_id);
    const auto lexed = lex(file.text(), adapter.lexical);

    SyntaxNode root{"body", file.full_range(), {}};
    if (lexed.empty()) return root;

    Engine engine{lexed, file, adapter};
    if (adapter.block_style == BlockStyle::braces) {
        BraceParser p{engine, 0, adapter.language_id == "java"};
        // A method slice usually starts at its signature; skip to the body's
        // opening brace when one exists at depth 0.
        std::size_t probe = 0;
        int depth = 0;
        std::optional<std::size_t> body_open;
        for (std::size_t k = 0; k < lexed.size(); ++k) {
            if (depth == 0 && is_punct(lexed[k], "{")) {
                body_open = k;
                break;
            }
            depth += depth_change(lexed[k]);
            probe = k;
        }
        (void)probe;
        if (body_open) {
            p.i = *body_open;
            root.children.push_back(p.parse_block());
        } else {
            root.children = p.parse_statements(false);
        }
    } else {
        IndentParser p{engine, {}, 0};
        p.split_lines();
        // Skip the signature: a leading def/class header owns the rest.
        if (!p.lines.empty()) {
            const auto& first_line = p.lines.front();
            const LexToken& head = lexed[first_line.first_tok];
            if (head.kind == LexKind::Keyword &&
                (head.text == "def" || head.text == "class" || head.text == "async")) {
                const int indent = first_line.indent;
                ++p.li;
                root.children = p.parse_suite(indent);
            } else {
                while (!p.done()) {
                    root.children.push_back(p.parse_line_statement(p.lines[p.li].indent));
                }
            }
        }
    }
    return root;
}

namespace {

void shift_node(SyntaxNode& node, const core::Position& base, const std::string& file) {
    const auto shift = [&](core::Position& p) {
        if (p.line == 0) p.character += base.character;
        p.line += base.line;
    };
    shift(node.loc.start);
    shift(node.loc.end);
    node.loc.file = file;
    for (auto& c : node.children) shift_node(c, base, file);
}

}  // namespace

SyntaxNode parse(const core::FocalMethod& focal, const LanguageAdapter& adapter) {
    SyntaxNode root = parse_source(focal.source, focal.file_path, adapter);
    shift_node(root, focal.symbol.loc.start, focal.file_path);
    root.loc = focal.symbol.loc;  // root spans the full method
    return root;
}

}  // namespace lspgen::syntax
