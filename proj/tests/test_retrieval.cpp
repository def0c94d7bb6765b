#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "lspgen/keytokens/extract.hpp"
#include "lspgen/lsp/uri.hpp"
#include "lspgen/retrieval/prompt.hpp"
#include "lspgen/retrieval/retriever.hpp"
#include "lspgen/retrieval/template.hpp"
#include "lspgen/syntax/cfg.hpp"
#include "lspgen/syntax/parser.hpp"
#include "support/fixtures.hpp"

using namespace lspgen;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

lsp::ServerConfig mini_config(const std::string& language_id) {
    lsp::ServerConfig config;
    config.language_id = language_id;
    config.command = {LSPGEN_MINI_SERVER_BIN};
    config.request_timeout = std::chrono::milliseconds(10000);
    config.warmup_timeout = std::chrono::milliseconds(10000);
    config.diagnostics_wait = std::chrono::milliseconds(1500);
    config.diagnostics_settle = std::chrono::milliseconds(50);
    return config;
}

struct Rig {
    testutil::TempWorkspace temp;
    core::Workspace workspace;
    std::unique_ptr<lsp::LspClient> client;

    explicit Rig(const std::string& fixture, const std::string& language)
        : temp(fixture), workspace(temp.root()) {
        workspace.scan(syntax::adapter_extension_map());
        client = lsp::LspClient::start(mini_config(language), workspace);
    }

    ~Rig() {
        if (client) client->shutdown();
    }

    core::FocalMethod focal(const std::string& file_name, const std::string& method) {
        core::SourceFile* file = workspace.find(temp.root() / file_name);
        REQUIRE(file != nullptr);
        if (!client->document_open(file->path())) client->open_document(*file);
        const auto symbols = client->symbols(file->path());
        for (const auto* s : core::flatten(symbols)) {
            if (s->name == method && s->is_callable()) {
                return core::make_focal_method(*file, *s);
            }
        }
        FAIL("method not found: ", method);
        return {};
    }

    keytok::KeyTokenSet keys_for(const core::FocalMethod& focal) {
        const auto* adapter = syntax::find_adapter(focal.language_id);
        REQUIRE(adapter != nullptr);
        const auto tokens = client->tokens(focal.symbol.loc);
        const auto cfg = syntax::build_cfg(syntax::parse(focal, *adapter), *adapter);
        return keytok::extract_key_tokens(focal, tokens, cfg);
    }
};

}  // namespace

TEST_CASE("mini server roundtrip: symbols, tokens, cross-file definition") {
    Rig rig("checkout_java", "java");
    const auto focal = rig.focal("Order.java", "checkout");
    CHECK(focal.source.find("isValid") != std::string::npos);

    const auto tokens = rig.client->tokens(focal.symbol.loc);
    REQUIRE_FALSE(tokens.empty());

    // DEF on the isValid call inside checkout resolves into PaymentService.java
    const core::Token* is_valid = nullptr;
    for (const auto& t : tokens) {
        if (t.lex == "isValid") is_valid = &t;
    }
    REQUIRE(is_valid != nullptr);
    CHECK(is_valid->role == core::TokenRole::Method);
    const auto defs = rig.client->definition(is_valid->loc);
    REQUIRE_FALSE(defs.empty());
    CHECK(defs[0].file.find("PaymentService.java") != std::string::npos);
}

TEST_CASE("DEF/REF duality on the checkout fixture") {
    Rig rig("checkout_java", "java");
    const auto focal = rig.focal("Order.java", "checkout");
    const auto tokens = rig.client->tokens(focal.symbol.loc);
    for (const auto& t : tokens) {
        if (keytok::is_excluded_role(t.role)) continue;
        const auto defs = rig.client->definition(t.loc);
        if (defs.empty()) continue;
        const auto refs = rig.client->references(t.loc);
        bool origin_covered = false;
        for (const auto& r : refs) {
            if (r.file == t.loc.file && r.start == t.loc.start) origin_covered = true;
        }
        for (const auto& d : defs) {
            if (core::contains(d, core::Location{d.file, t.loc.start, t.loc.end}) &&
                d.file == t.loc.file) {
                origin_covered = true;
            }
        }
        INFO("token ", t.lex);
        CHECK(origin_covered);
    }
}

TEST_CASE("retrieve_definitions: isValid definition snippet from the other file") {
    Rig rig("checkout_java", "java");
    const auto focal = rig.focal("Order.java", "checkout");
    const auto keys = rig.keys_for(focal);

    retrieval::Retriever retriever(*rig.client, rig.workspace, 2);
    const core::Token* is_valid = nullptr;
    for (const auto& t : keys.tokens) {
        if (t.lex == "isValid") is_valid = &t;
    }
    REQUIRE(is_valid != nullptr);

    const auto snippets = retriever.retrieve_definitions(*is_valid);
    REQUIRE_FALSE(snippets.empty());
    CHECK(snippets[0].origin.file.find("PaymentService.java") != std::string::npos);
    CHECK(snippets[0].text.find("public boolean isValid()") != std::string::npos);
    CHECK(snippets[0].text.find("active && balance") != std::string::npos);
}

TEST_CASE("retrieve_references: usage examples are whole enclosing methods") {
    Rig rig("checkout_java", "java");
    const auto focal = rig.focal("Order.java", "checkout");
    const auto keys = rig.keys_for(focal);

    retrieval::Retriever retriever(*rig.client, rig.workspace, 2);
    const core::Token* is_valid = nullptr;
    for (const auto& t : keys.tokens) {
        if (t.lex == "isValid") is_valid = &t;
    }
    REQUIRE(is_valid != nullptr);

    const auto refs = retriever.retrieve_references(*is_valid, focal.symbol.loc);
    REQUIRE(refs.size() == 2);  // the configured limit
    for (const auto& snippet : refs) {
        CHECK(snippet.origin.file.find("Billing.java") != std::string::npos);
        // Enclosing-symbol minimality: no strictly smaller symbol in that file
        // also contains the anchor use (exhaustive scan).
        const auto& symbols = retriever.symbols_for(snippet.origin.file);
        for (const auto* s : core::flatten(symbols)) {
            if (core::contains(snippet.origin, s->loc) && !(s->loc == snippet.origin)) {
                // any strictly smaller symbol must not contain a reference we used
                CHECK(s->loc.start > snippet.origin.start);
            }
        }
    }
    CHECK(refs[0].text.find("precheck") != std::string::npos);
    CHECK(refs[1].text.find("countValid") != std::string::npos);
}

TEST_CASE("workspace filter drops definitions outside the root") {
    // Scripted server hands back a definition in /usr/lib: must be skipped.
    testutil::TempWorkspace ws("checkout_java");
    json script;
    script["legend"] = {"keyword", "variable", "function", "method"};
    script["files"]["Order.java"]["definitions"]["0:6"] = json::array(
        {{{"uri", "file:///usr/lib/jvm/java-17/lib/src/java/lang/String.java"},
          {"range",
           {{"start", {{"line", 100}, {"character", 0}}},
            {"end", {{"line", 120}, {"character", 1}}}}}}});
    const auto script_path = fs::temp_directory_path() / "lspgen_filter_script.json";
    {
        std::ofstream out(script_path);
        out << script.dump();
    }
    lsp::ServerConfig config;
    config.language_id = "java";
    config.command = {LSPGEN_MOCK_SERVER_BIN, script_path.string()};
    config.request_timeout = std::chrono::milliseconds(5000);
    config.warmup_timeout = std::chrono::milliseconds(5000);

    core::Workspace workspace(ws.root());
    workspace.scan(syntax::adapter_extension_map());
    auto client = lsp::LspClient::start(config, workspace);
    auto* file = workspace.find(ws.root() / "Order.java");
    REQUIRE(file != nullptr);
    client->open_document(*file);

    retrieval::Retriever retriever(*client, workspace, 2);
    core::Token token;
    token.loc = core::Location{file->path(), {0, 6}, {0, 11}};
    token.lex = "String";
    token.role = core::TokenRole::Class;
    CHECK(retriever.retrieve_definitions(token).empty());
    client->shutdown();
    fs::remove(script_path);
}

TEST_CASE("name-only definition range widens to the enclosing line") {
    // Definition points at a bare identifier in a file with no symbols.
    testutil::TempWorkspace ws("checkout_java");
    const auto notes = ws.root() / "notes.java";
    {
        std::ofstream out(notes);
        out << "// scratch notes\n// more notes\nvalue = isValid\n// trailing\n";
    }
    json script;
    script["legend"] = {"keyword", "variable", "function", "method"};
    script["files"]["Order.java"]["definitions"]["0:3"] = json::array(
        {{{"uri", lsp::path_to_uri(notes)},
          {"range",
           {{"start", {{"line", 2}, {"character", 8}}},
            {"end", {{"line", 2}, {"character", 15}}}}}}});
    const auto script_path = fs::temp_directory_path() / "lspgen_nameonly_script.json";
    {
        std::ofstream out(script_path);
        out << script.dump();
    }
    lsp::ServerConfig config;
    config.language_id = "java";
    config.command = {LSPGEN_MOCK_SERVER_BIN, script_path.string()};
    config.request_timeout = std::chrono::milliseconds(5000);
    config.warmup_timeout = std::chrono::milliseconds(5000);

    core::Workspace workspace(ws.root());
    workspace.scan(syntax::adapter_extension_map());
    auto client = lsp::LspClient::start(config, workspace);
    auto* file = workspace.find(ws.root() / "Order.java");
    client->open_document(*file);

    retrieval::Retriever retriever(*client, workspace, 2);
    core::Token token;
    token.loc = core::Location{file->path(), {0, 3}, {0, 10}};
    token.lex = "isValid";
    token.role = core::TokenRole::Method;
    const auto snippets = retriever.retrieve_definitions(token);
    REQUIRE(snippets.size() == 1);
    CHECK(snippets[0].text == "value = isValid");
    client->shutdown();
    fs::remove(script_path);
}

TEST_CASE("bundle: dedup by origin and no focal-internal definitions") {
    Rig rig("checkout_java", "java");
    const auto focal = rig.focal("Order.java", "checkout");
    const auto keys = rig.keys_for(focal);

    retrieval::Retriever retriever(*rig.client, rig.workspace, 2);
    const auto bundle = retriever.build_bundle(focal, keys);
    REQUIRE_FALSE(bundle.items.empty());

    std::set<std::tuple<std::string, int, int>> origins;
    for (const auto& item : bundle.items) {
        for (const auto& s : item.definitions) {
            CHECK(rig.workspace.contains(s.origin.file));
            const bool fresh =
                origins.insert({s.origin.file, s.origin.start.line, s.origin.start.character})
                    .second;
            CHECK(fresh);
            if (s.origin.file == focal.file_path) {
                CHECK_FALSE(core::contains(focal.symbol.loc, s.origin));
            }
        }
        for (const auto& s : item.references) {
            CHECK(rig.workspace.contains(s.origin.file));
            const bool fresh =
                origins.insert({s.origin.file, s.origin.start.line, s.origin.start.character})
                    .second;
            CHECK(fresh);
        }
    }
    CHECK(bundle.total_chars > 0);
}

TEST_CASE("template inference: imports plus framework, scaffold named after focal") {
    Rig rig("black_python", "python");
    const auto focal = rig.focal("fmt_rules.py", "is_split_before_delimiter");
    const auto* adapter = syntax::find_adapter("python");
    const auto* file = rig.workspace.find(focal.file_path);
    const auto tmpl = retrieval::infer_test_template(focal, *file, *adapter, "");
    CHECK(tmpl.import_block.find("import tokens") != std::string::npos);
    CHECK(tmpl.import_block.find("import pytest") != std::string::npos);
    CHECK(tmpl.scaffold.find("Is_split_before_delimiter") != std::string::npos);
    CHECK(tmpl.scaffold.find(retrieval::TestTemplate::kPlaceholder) != std::string::npos);
    CHECK(fs::path(tmpl.target_path).filename() == "test_fmt_rules.py");

    // no-import focal file: template still carries the framework import
    const auto go_rig_path = fs::path(tmpl.target_path);
    (void)go_rig_path;
}

TEST_CASE("template naming rules for the brace languages") {
    Rig rig("checkout_java", "java");
    const auto focal = rig.focal("Order.java", "checkout");
    const auto* java = syntax::find_adapter("java");
    const auto* file = rig.workspace.find(focal.file_path);
    const auto tmpl = retrieval::infer_test_template(focal, *file, *java, "r1");
    CHECK(fs::path(tmpl.target_path).filename() == "OrderR1Test.java");
    CHECK(tmpl.import_block.find("org.junit.jupiter.api.Test") != std::string::npos);
    // the fixture file has no imports of its own: framework ones only
    std::size_t import_lines = 0;
    for (char ch : tmpl.import_block) {
        if (ch == '\n') ++import_lines;
    }
    CHECK(import_lines == 2);

    const auto* go = syntax::find_adapter("go");
    CHECK(go->test_file_name("mathx", "") == "mathx_test.go");
    CHECK(go->test_file_name("mathx", "x7") == "mathx_x7_test.go");
    CHECK(go->scaffold("ScaleAll").find("func TestScaleAll(t *testing.T)") !=
          std::string::npos);
}

TEST_CASE("prompt: empty bundle keeps focal source and template only") {
    Rig rig("checkout_java", "java");
    const auto focal = rig.focal("Order.java", "markFailure");
    const auto* adapter = syntax::find_adapter("java");
    const auto* file = rig.workspace.find(focal.file_path);
    const auto tmpl = retrieval::infer_test_template(focal, *file, *adapter, "");

    retrieval::ContextBundle empty;
    const auto prompt =
        retrieval::build_prompt(focal, empty, tmpl, *adapter, rig.workspace, std::nullopt, {});
    CHECK(prompt.user.find("## Focal method") != std::string::npos);
    CHECK(prompt.user.find("(no repository context retrieved)") != std::string::npos);
    CHECK(prompt.user.find("## Test template") != std::string::npos);
    CHECK(prompt.user.find("## Branch target") == std::string::npos);
    CHECK(prompt.system.find("Example") != std::string::npos);  // the one-shot example
}

TEST_CASE("prompt: three parts in order, branch target instruction included") {
    Rig rig("checkout_java", "java");
    const auto focal = rig.focal("Order.java", "checkout");
    const auto keys = rig.keys_for(focal);
    retrieval::Retriever retriever(*rig.client, rig.workspace, 2);
    const auto bundle = retriever.build_bundle(focal, keys);
    const auto* adapter = syntax::find_adapter("java");
    const auto* file = rig.workspace.find(focal.file_path);
    const auto tmpl = retrieval::infer_test_template(focal, *file, *adapter, "");

    const auto* cfg_adapter = syntax::find_adapter("java");
    const auto cfg = syntax::build_cfg(syntax::parse(focal, *cfg_adapter), *cfg_adapter);
    const auto spans = syntax::condition_spans(cfg);
    REQUIRE_FALSE(spans.empty());

    const auto prompt = retrieval::build_prompt(focal, bundle, tmpl, *adapter, rig.workspace,
                                                spans[0], {});
    const auto focal_pos = prompt.user.find("## Focal method");
    const auto context_pos = prompt.user.find("## Context");
    const auto template_pos = prompt.user.find("## Test template");
    const auto branch_pos = prompt.user.find("## Branch target");
    REQUIRE(focal_pos != std::string::npos);
    REQUIRE(context_pos != std::string::npos);
    REQUIRE(template_pos != std::string::npos);
    REQUIRE(branch_pos != std::string::npos);
    CHECK(focal_pos < context_pos);
    CHECK(context_pos < branch_pos);
    CHECK(branch_pos < template_pos);
    CHECK(prompt.user.find("PaymentService.java") != std::string::npos);

    // determinism: identical inputs give byte-identical prompts
    const auto again = retrieval::build_prompt(focal, bundle, tmpl, *adapter, rig.workspace,
                                               spans[0], {});
    CHECK(again.user == prompt.user);
    CHECK(again.system == prompt.system);
}

TEST_CASE("prompt truncation: references dropped before definitions") {
    Rig rig("checkout_java", "java");
    const auto focal = rig.focal("Order.java", "checkout");
    const auto keys = rig.keys_for(focal);
    retrieval::Retriever retriever(*rig.client, rig.workspace, 2);
    const auto bundle = retriever.build_bundle(focal, keys);

    bool has_defs = false;
    bool has_refs = false;
    for (const auto& item : bundle.items) {
        has_defs |= !item.definitions.empty();
        has_refs |= !item.references.empty();
    }
    REQUIRE(has_defs);
    REQUIRE(has_refs);

    const auto* adapter = syntax::find_adapter("java");
    const auto* file = rig.workspace.find(focal.file_path);
    const auto tmpl = retrieval::infer_test_template(focal, *file, *adapter, "");

    const auto full = retrieval::build_prompt(focal, bundle, tmpl, *adapter, rig.workspace,
                                              std::nullopt, {100000});
    CHECK(full.dropped_items.empty());

    retrieval::PromptOptions tight;
    // One token under the full size: something must go, and references go first.
    tight.context_budget_tokens = full.estimated_tokens - 1;
    const auto prompt =
        retrieval::build_prompt(focal, bundle, tmpl, *adapter, rig.workspace, std::nullopt, tight);
    CHECK_FALSE(prompt.dropped_items.empty());
    for (const auto& dropped : prompt.dropped_items) {
        CHECK(dropped.find("reference") != std::string::npos);
    }
    CHECK(prompt.user.find("### Definition of `isValid`") != std::string::npos);

    retrieval::PromptOptions impossible;
    impossible.context_budget_tokens = 10;
    CHECK_THROWS_AS(retrieval::build_prompt(focal, bundle, tmpl, *adapter, rig.workspace,
                                            std::nullopt, impossible),
                    retrieval::BudgetError);
}

TEST_CASE("conciseness: retrieved context is under half the dependency mass") {
    Rig rig("black_python", "python");
    const auto focal = rig.focal("fmt_rules.py", "is_split_before_delimiter");
    const auto keys = rig.keys_for(focal);
    REQUIRE_FALSE(keys.tokens.empty());

    retrieval::Retriever retriever(*rig.client, rig.workspace, 2);
    const auto bundle = retriever.build_bundle(focal, keys);
    REQUIRE_FALSE(bundle.items.empty());

    std::size_t dependency_chars = 0;
    for (const auto& name : {"nodes.py", "pytree.py", "tokens.py"}) {
        const auto* dep = rig.workspace.find(rig.temp.root() / name);
        REQUIRE(dep != nullptr);
        dependency_chars += dep->text().size();
    }
    CHECK(bundle.total_chars * 2 < dependency_chars);

    // The ground-truth cross-file origins all appear.
    std::set<std::string> origin_files;
    for (const auto& item : bundle.items) {
        for (const auto& s : item.definitions) {
            origin_files.insert(fs::path(s.origin.file).filename().string());
        }
    }
    CHECK(origin_files.contains("nodes.py"));
    CHECK(origin_files.contains("tokens.py"));
    CHECK(origin_files.contains("pytree.py"));
}
