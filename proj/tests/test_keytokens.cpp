#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "lspgen/core/error.hpp"
#include "lspgen/keytokens/extract.hpp"
#include "lspgen/syntax/cfg.hpp"
#include "lspgen/syntax/parser.hpp"
#include "support/fixtures.hpp"

using namespace lspgen;

namespace {

using TokenKey = std::tuple<int, int, std::string>;  // line, column, lexeme

// Brute-force oracle, independent of the extraction path: the set of tokens
// lying on any physical line intersected by a guard span, minus the roles
// that never need a context search. No CFG walking, no marking pass — plain
// line-set arithmetic.
std::set<TokenKey> oracle_key_tokens(const std::vector<core::Token>& tokens,
                                     const std::vector<core::Location>& guard_spans) {
    std::set<int> guard_lines;
    for (const auto& span : guard_spans) {
        for (int line = span.start.line; line <= span.end.line; ++line) {
            guard_lines.insert(line);
        }
    }
    const auto excluded = [](core::TokenRole role) {
        switch (role) {
            case core::TokenRole::Variable:
            case core::TokenRole::Parameter:
            case core::TokenRole::Function:
            case core::TokenRole::Method:
            case core::TokenRole::Property:
            case core::TokenRole::Class:
            case core::TokenRole::Namespace:
                return false;
            default:
                return true;
        }
    };
    std::set<TokenKey> out;
    for (const auto& t : tokens) {
        if (excluded(t.role)) continue;
        for (int line = t.loc.start.line; line <= t.loc.end.line; ++line) {
            if (guard_lines.contains(line)) {
                out.insert({t.loc.start.line, t.loc.start.character, t.lex});
                break;
            }
        }
    }
    return out;
}

std::set<TokenKey> as_keys(const keytok::KeyTokenSet& set) {
    std::set<TokenKey> out;
    for (const auto& t : set.tokens) {
        out.insert({t.loc.start.line, t.loc.start.character, t.lex});
    }
    return out;
}

struct MethodCase {
    core::FocalMethod focal;
    std::vector<core::Token> tokens;
    syntax::Cfg cfg;
};

std::vector<MethodCase> corpus_cases(const std::string& relative, const std::string& lang) {
    const auto* adapter = syntax::find_adapter(lang);
    REQUIRE(adapter != nullptr);
    static std::map<std::string, core::SourceFile> cache;
    auto [it, fresh] = cache.try_emplace(relative, testutil::load_fixture(relative));
    (void)fresh;
    const auto& file = it->second;

    std::vector<MethodCase> out;
    for (auto& focal : testutil::fixture_methods(file, *adapter)) {
        MethodCase c;
        c.tokens = testutil::method_tokens(file, focal, *adapter);
        c.cfg = syntax::build_cfg(syntax::parse(focal, *adapter), *adapter);
        c.focal = std::move(focal);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

TEST_CASE("role filter keeps exactly the searchable roles") {
    using R = core::TokenRole;
    for (R kept : {R::Variable, R::Parameter, R::Function, R::Method, R::Property, R::Class,
                   R::Namespace}) {
        CHECK_FALSE(keytok::is_excluded_role(kept));
    }
    for (R dropped : {R::Keyword, R::String, R::Number, R::Comment, R::Regex, R::Operator,
                      R::Identifier, R::Other}) {
        CHECK(keytok::is_excluded_role(dropped));
    }
}

TEST_CASE("checkout: guard tokens selected, non-branch lines excluded") {
    const auto cases = corpus_cases("corpus/Corpus.java", "java");
    const MethodCase* checkout = nullptr;
    for (const auto& c : cases) {
        if (c.focal.symbol.name == "checkout") checkout = &c;
    }
    REQUIRE(checkout != nullptr);

    const auto keys = keytok::extract_key_tokens(checkout->focal, checkout->tokens, checkout->cfg);
    std::set<std::string> lexemes;
    for (const auto& t : keys.tokens) lexemes.insert(t.lex);
    CHECK(lexemes.contains("card"));
    CHECK(lexemes.contains("isValid"));
    CHECK_FALSE(lexemes.contains("markFailure"));
    CHECK_FALSE(lexemes.contains("total"));
    CHECK_FALSE(lexemes.contains("println"));
}

TEST_CASE("split-priority port: dotted constant qualifiers are selected") {
    const auto cases = corpus_cases("corpus/corpus.py", "python");
    const MethodCase* split = nullptr;
    for (const auto& c : cases) {
        if (c.focal.symbol.name == "is_split_before_delimiter") split = &c;
    }
    REQUIRE(split != nullptr);

    const auto keys = keytok::extract_key_tokens(split->focal, split->tokens, split->cfg);
    std::set<std::string> lexemes;
    for (const auto& t : keys.tokens) lexemes.insert(t.lex);
    CHECK(lexemes.contains("is_vararg"));
    CHECK(lexemes.contains("tokens"));
    CHECK(lexemes.contains("DOT"));
    CHECK(lexemes.contains("leaf"));
    // return-only lines contribute nothing
    CHECK_FALSE(lexemes.contains("DOT_PRIORITY"));
}

TEST_CASE("branch-free method yields the empty set") {
    const auto cases = corpus_cases("corpus/corpus.py", "python");
    for (const auto& c : cases) {
        if (c.focal.symbol.name != "describe_pair") continue;
        const auto keys = keytok::extract_key_tokens(c.focal, c.tokens, c.cfg);
        CHECK(keys.tokens.empty());
        return;
    }
    FAIL("describe_pair not found");
}

TEST_CASE("empty token list is not an error") {
    const auto cases = corpus_cases("corpus/corpus.py", "python");
    const auto keys = keytok::extract_key_tokens(cases[0].focal, {}, cases[0].cfg);
    CHECK(keys.tokens.empty());
}

TEST_CASE("cfg/source mismatch raises a consistency error") {
    const auto py_cases = corpus_cases("corpus/corpus.py", "python");
    const auto java_cases = corpus_cases("corpus/Corpus.java", "java");
    const MethodCase* with_guards = nullptr;
    for (const auto& c : java_cases) {
        if (!syntax::condition_spans(c.cfg).empty()) with_guards = &c;
    }
    REQUIRE(with_guards != nullptr);
    // Focal from one file, CFG from another: spans escape the focal span.
    CHECK_THROWS_AS(
        keytok::extract_key_tokens(py_cases[0].focal, py_cases[0].tokens, with_guards->cfg),
        lspgen::Error);
}

TEST_CASE("oracle equivalence across the full corpus, all three languages") {
    const std::map<std::string, std::string> corpus = {
        {"python", "corpus/corpus.py"},
        {"java", "corpus/Corpus.java"},
        {"go", "corpus/corpus.go"},
    };
    for (const auto& [lang, rel] : corpus) {
        const auto cases = corpus_cases(rel, lang);
        REQUIRE(cases.size() >= 10);
        for (const auto& c : cases) {
            INFO(lang, ":", c.focal.symbol.name);
            const auto keys = keytok::extract_key_tokens(c.focal, c.tokens, c.cfg);
            const auto expected = oracle_key_tokens(c.tokens, syntax::condition_spans(c.cfg));
            CHECK(as_keys(keys) == expected);
        }
    }
}

TEST_CASE("determinism: identical inputs give identical ordered output") {
    const auto cases = corpus_cases("corpus/corpus.go", "go");
    for (const auto& c : cases) {
        const auto a = keytok::extract_key_tokens(c.focal, c.tokens, c.cfg);
        const auto b = keytok::extract_key_tokens(c.focal, c.tokens, c.cfg);
        REQUIRE(a.tokens.size() == b.tokens.size());
        for (std::size_t i = 0; i < a.tokens.size(); ++i) CHECK(a.tokens[i] == b.tokens[i]);
    }
}

TEST_CASE("tokens come out in source order, deduplicated by location") {
    const auto cases = corpus_cases("corpus/corpus.py", "python");
    for (const auto& c : cases) {
        const auto keys = keytok::extract_key_tokens(c.focal, c.tokens, c.cfg);
        for (std::size_t i = 1; i < keys.tokens.size(); ++i) {
            const auto& prev = keys.tokens[i - 1].loc.start;
            const auto& cur = keys.tokens[i].loc.start;
            CHECK(prev < cur);
        }
    }
}

TEST_CASE("monotonicity: appending a conditional never removes selections") {
    const auto* py = syntax::find_adapter("python");
    const std::string base =
        "def gate(a, b, flag):\n"
        "    if a > 0:\n"
        "        return a\n"
        "    total = a + b\n"
        "    return total\n";
    // Mutation appends a new guard line at the end; earlier positions are
    // untouched, so prior selections must survive verbatim.
    const std::string mutated = base +
                                "\n"
                                "def gate2(a, b, flag):\n"
                                "    if a > 0:\n"
                                "        return a\n"
                                "    total = a + b\n"
                                "    if flag:\n"
                                "        return 0\n"
                                "    return total\n";

    const auto run = [&](const std::string& text, const std::string& name) {
        core::SourceFile file("m.py", text, "python");
        const auto symbols = syntax::file_outline(file, *py);
        for (const auto* s : core::flatten(symbols)) {
            if (s->name != name) continue;
            auto focal = core::make_focal_method(file, *s);
            const auto tokens = testutil::method_tokens(file, focal, *py);
            const auto cfg = syntax::build_cfg(syntax::parse(focal, *py), *py);
            return keytok::extract_key_tokens(focal, tokens, cfg);
        }
        FAIL("missing method ", name);
        return keytok::KeyTokenSet{};
    };

    const auto before = run(base, "gate");
    const auto after = run(mutated, "gate2");
    std::set<std::pair<std::string, int>> after_keys;  // lexeme + line offset in method
    for (const auto& t : after.tokens) after_keys.insert({t.lex, t.loc.start.line - 6});
    for (const auto& t : before.tokens) {
        CHECK(after_keys.contains({t.lex, t.loc.start.line}));
    }
    CHECK(after.tokens.size() > before.tokens.size());
}

TEST_CASE("branch-target restriction selects only that guard's lines") {
    const auto cases = corpus_cases("corpus/corpus.py", "python");
    for (const auto& c : cases) {
        if (c.focal.symbol.name != "clamp") continue;
        const auto spans = syntax::condition_spans(c.cfg);
        REQUIRE(spans.size() == 2);
        const auto keys = keytok::extract_key_tokens(c.focal, c.tokens, c.cfg, spans[1]);
        REQUIRE_FALSE(keys.tokens.empty());
        for (const auto& t : keys.tokens) {
            CHECK(t.loc.start.line == spans[1].start.line);
        }
        return;
    }
    FAIL("clamp not found");
}

TEST_CASE("dedupe_by_lexeme keeps first occurrence only") {
    core::Token a{core::Location{"f", {0, 0}, {0, 3}}, "foo", core::TokenRole::Function};
    core::Token b{core::Location{"f", {2, 0}, {2, 3}}, "foo", core::TokenRole::Function};
    core::Token c{core::Location{"f", {3, 0}, {3, 3}}, "foo", core::TokenRole::Variable};
    const auto out = keytok::dedupe_by_lexeme({a, b, c});
    REQUIRE(out.size() == 2);  // same lexeme, different role survives
    CHECK(out[0].loc.start.line == 0);
    CHECK(out[1].role == core::TokenRole::Variable);
}
