#include "lspgen/keytokens/extract.hpp"

#include <algorithm>
#include <set>

#include "lspgen/core/error.hpp"

namespace lspgen::keytok {

bool is_excluded_role(core::TokenRole role) {
    switch (role) {
        case core::TokenRole::Keyword:
        case core::TokenRole::String:
        case core::TokenRole::Number:
        case core::TokenRole::Comment:
        case core::TokenRole::Regex:
        case core::TokenRole::Operator:
        case core::TokenRole::Identifier:  // the unclassified catch-all
        case core::TokenRole::Other:
            return true;
        case core::TokenRole::Variable:
        case core::TokenRole::Parameter:
        case core::TokenRole::Function:
        case core::TokenRole::Method:
        case core::TokenRole::Property:
        case core::TokenRole::Class:
        case core::TokenRole::Namespace:
            return false;
    }
    return true;
}

KeyTokenSet extract_key_tokens(const core::FocalMethod& focal,
                               const std::vector<core::Token>& all_tokens,
                               const syntax::Cfg& cfg,
                               const std::optional<core::Location>& only_span) {
    KeyTokenSet out;
    if (all_tokens.empty()) return out;

    std::vector<core::Location> spans = syntax::condition_spans(cfg);
    if (only_span) {
        std::erase_if(spans, [&](const core::Location& s) { return !(s == *only_span); });
    }
    if (spans.empty()) return out;

    for (const auto& span : spans) {
        if (!core::contains(focal.symbol.loc, span)) {
            throw Error("guard span " + core::to_string(span) +
                        " escapes the focal method at " + core::to_string(focal.symbol.loc));
        }
    }

    // Step 1: mark tokens participating in a guard expression.
    std::set<int> marked_lines;
    for (const auto& token : all_tokens) {
        for (const auto& span : spans) {
            if (core::overlaps(token.loc, span)) {
                for (int line = token.loc.start.line; line <= token.loc.end.line; ++line) {
                    marked_lines.insert(line);
                }
                break;
            }
        }
    }
    if (marked_lines.empty()) return out;

    // Steps 2+3: walk the ordered token sequence once, keep searchable-role
    // tokens on marked lines, dropping duplicate locations.
    std::set<std::pair<core::Position, core::Position>> seen;
    for (const auto& token : all_tokens) {
        if (is_excluded_role(token.role)) continue;
        bool on_marked_line = false;
        for (int line = token.loc.start.line; line <= token.loc.end.line && !on_marked_line;
             ++line) {
            on_marked_line = marked_lines.contains(line);
        }
        if (!on_marked_line) continue;
        if (!seen.insert({token.loc.start, token.loc.end}).second) continue;

        // Origin: the first guard whose lines cover this token.
        for (const auto& span : spans) {
            const bool line_hit = token.loc.start.line >= span.start.line &&
                                  token.loc.start.line <= span.end.line;
            if (line_hit) {
                out.origin[out.tokens.size()] = span;
                break;
            }
        }
        out.tokens.push_back(token);
    }
    return out;
}

std::vector<core::Token> dedupe_by_lexeme(const std::vector<core::Token>& tokens) {
    std::vector<core::Token> out;
    std::set<std::pair<std::string, core::TokenRole>> seen;
    for (const auto& t : tokens) {
        if (seen.insert({t.lex, t.role}).second) out.push_back(t);
    }
    return out;
}

}  // namespace lspgen::keytok
