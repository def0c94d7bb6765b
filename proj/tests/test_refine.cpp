#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "lspgen/refine/categories.hpp"
#include "lspgen/refine/llm.hpp"
#include "lspgen/refine/repair.hpp"
#include "lspgen/retrieval/retriever.hpp"
#include "support/fixtures.hpp"

using namespace lspgen;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

lsp::ServerConfig mock_config(const fs::path& script) {
    lsp::ServerConfig config;
    config.language_id = "python";
    config.command = {LSPGEN_MOCK_SERVER_BIN, script.string()};
    config.request_timeout = std::chrono::milliseconds(5000);
    config.warmup_timeout = std::chrono::milliseconds(5000);
    config.diagnostics_wait = std::chrono::milliseconds(800);
    config.diagnostics_settle = std::chrono::milliseconds(40);
    return config;
}

fs::path write_script(const json& script, const std::string& tag) {
    const auto path =
        fs::temp_directory_path() / ("lspgen_refine_" + tag + "_" + std::to_string(::getpid()) +
                                     ".json");
    std::ofstream out(path);
    out << script.dump();
    return path;
}

json error_diag(const std::string& message) {
    return {{"range",
             {{"start", {{"line", 0}, {"character", 0}}}, {"end", {{"line", 0}, {"character", 4}}}}},
            {"message", message},
            {"severity", 1}};
}

refine::LlmResponse scripted(const std::string& content, long long prompt_tokens = 100,
                             long long completion_tokens = 50) {
    refine::LlmResponse r;
    r.content = content;
    r.usage.prompt_tokens = prompt_tokens;
    r.usage.completion_tokens = completion_tokens;
    return r;
}

struct RepairRig {
    testutil::TempWorkspace temp{"checkout_java"};
    core::Workspace workspace;
    std::unique_ptr<lsp::LspClient> client;
    fs::path script_path;

    explicit RepairRig(const json& diag_script, const std::string& tag) : workspace(temp.root()) {
        json script;
        script["legend"] = {"keyword", "variable"};
        script["default_diagnostics"] = diag_script;
        script_path = write_script(script, tag);
        workspace.scan(syntax::adapter_extension_map());
        client = lsp::LspClient::start(mock_config(script_path), workspace);
    }

    ~RepairRig() {
        if (client) client->shutdown();
        std::error_code ec;
        fs::remove(script_path, ec);
    }

    refine::GenerationResult run(refine::LlmClient& llm, int budget = 5) {
        retrieval::Retriever retriever(*client, workspace, 2);
        refine::RepairOptions options;
        options.budget = budget;
        options.scratch_path = (temp.root() / "test_scratch.py").string();
        options.language_id = "python";
        const auto* adapter = syntax::find_adapter("python");
        core::FocalMethod focal;
        focal.language_id = "python";
        return refine::repair_loop("def test_a():\n    assert 1\n", focal, *client, workspace,
                                   retriever, llm, *adapter, options,
                                   refine::Usage{200, 80});
    }
};

json publish_clean() {
    // one event -> one publication with an empty set
    return json::array({json::array({json{{"version_delta", 0}, {"diagnostics", json::array()}}})});
}

json publish_error(const std::string& message) {
    return json::array({json::array(
        {json{{"version_delta", 0}, {"diagnostics", json::array({error_diag(message)})}}})});
}

}  // namespace

TEST_CASE("extract_code_block: fenced block interior, markers stripped") {
    CHECK(refine::extract_code_block("```python\nprint(1)\n```") == "print(1)\n");
    CHECK(refine::extract_code_block("prose\n```\nx = 2\n```\ntail") == "x = 2\n");
}

TEST_CASE("extract_code_block: first of two blocks wins") {
    const std::string reply =
        "Here is the test:\n```python\nfirst = 1\n```\nAnd another idea:\n```python\nsecond = "
        "2\n```\n";
    CHECK(refine::extract_code_block(reply) == "first = 1\n");
}

TEST_CASE("extract_code_block: fenceless reply is taken whole, empty rejected") {
    CHECK(refine::extract_code_block("  x = 1\n") == "x = 1");
    CHECK_THROWS_AS(refine::extract_code_block("   \n  "), refine::GenerationError);
    CHECK_THROWS_AS(refine::extract_code_block("```python\n\n```"), refine::GenerationError);
}

TEST_CASE("generate: chat call plus extraction with usage recorded") {
    refine::ScriptedLlmClient llm({scripted("prose\n```python\nx = 1\n```\nmore", 33, 44)});
    const auto out = refine::generate("sys", "user", llm);
    CHECK(out.code == "x = 1\n");
    CHECK(out.usage.prompt_tokens == 33);
    CHECK(out.usage.completion_tokens == 44);
    CHECK(llm.calls() == 1);
}

TEST_CASE("categorize: the two documented server phrasings") {
    CHECK(refine::categorize("x imported and not used", "go") ==
          refine::ErrorCategory::ImportResolution);
    CHECK(refine::categorize("parse redeclared in this block", "go") ==
          refine::ErrorCategory::Redeclaration);
}

TEST_CASE("categorize: representative per-language messages") {
    using C = refine::ErrorCategory;
    CHECK(refine::categorize("name 'frobz' is not defined", "python") == C::MemberAccess);
    CHECK(refine::categorize("'Leaf' object has no attribute 'width5'", "python") ==
          C::MemberAccess);
    CHECK(refine::categorize("invalid syntax", "python") == C::Syntax);
    CHECK(refine::categorize("unexpected indent", "python") == C::Syntax);
    CHECK(refine::categorize("The method charge(double) is undefined for the type Cart",
                             "java") == C::Unknown);  // no pattern: stays Unknown
    CHECK(refine::categorize("The constructor Card() is undefined", "java") ==
          C::ConstructorCall);
    CHECK(refine::categorize("unreported exception IOException; must be caught or declared to be "
                             "thrown",
                             "java") == C::UnhandledException);
    CHECK(refine::categorize("incompatible types: String cannot be converted to int", "java") ==
          C::TypeMismatch);
    CHECK(refine::categorize("cannot use x (type string) as type int", "go") == C::TypeMismatch);
    CHECK(refine::categorize("undefined: Frobz", "go") == C::MemberAccess);
    CHECK(refine::categorize("total garbage нет шаблона", "go") == C::Unknown);
}

TEST_CASE("categorize: user patterns run before the built-in table") {
    std::vector<refine::MessagePattern> extra{
        {"frobz", refine::ErrorCategory::ConstructorCall}};
    CHECK(refine::categorize("name 'frobz' is not defined", "python", extra) ==
          refine::ErrorCategory::ConstructorCall);
}

TEST_CASE("context_need mapping matches the documented grouping exactly") {
    using C = refine::ErrorCategory;
    using N = refine::ContextNeed;
    CHECK(refine::context_need(C::Redeclaration) == N::workspace_level);
    CHECK(refine::context_need(C::ImportResolution) == N::workspace_level);
    CHECK(refine::context_need(C::MemberAccess) == N::symbol_level);
    CHECK(refine::context_need(C::TypeMismatch) == N::symbol_level);
    CHECK(refine::context_need(C::ConstructorCall) == N::symbol_level);
    CHECK(refine::context_need(C::Syntax) == N::none);
    CHECK(refine::context_need(C::UnhandledException) == N::none);
    CHECK(refine::context_need(C::Unknown) == N::symbol_level);
}

TEST_CASE("gather_repair_context per context group") {
    // Real (mini) server over the two-file fixture.
    testutil::TempWorkspace temp("checkout_java");
    core::Workspace workspace(temp.root());
    workspace.scan(syntax::adapter_extension_map());
    lsp::ServerConfig config;
    config.language_id = "java";
    config.command = {LSPGEN_MINI_SERVER_BIN};
    config.request_timeout = std::chrono::milliseconds(10000);
    config.warmup_timeout = std::chrono::milliseconds(10000);
    config.diagnostics_wait = std::chrono::milliseconds(1500);
    auto client = lsp::LspClient::start(config, workspace);
    auto* billing = workspace.find(temp.root() / "Billing.java");
    REQUIRE(billing != nullptr);
    client->open_document(*billing);
    retrieval::Retriever retriever(*client, workspace, 2);

    // symbol-level: member-access error at the isValid call site pulls the
    // member's declaring symbol
    lsp::Diagnostic member_diag;
    member_diag.message = "isValid cannot be resolved";
    member_diag.loc = core::Location{billing->path(), {2, 20}, {2, 27}};
    const auto symbol_context = refine::gather_repair_context(
        member_diag, refine::ErrorCategory::MemberAccess, *client, workspace, retriever);
    CHECK(symbol_context.find("isValid") != std::string::npos);
    CHECK(symbol_context.find("PaymentService.java") != std::string::npos);

    // workspace-level: the file tree lists the module that should be imported
    lsp::Diagnostic import_diag;
    import_diag.message = "package paymentservice does not exist";
    import_diag.loc = core::Location{billing->path(), {0, 0}, {0, 6}};
    const auto workspace_context = refine::gather_repair_context(
        import_diag, refine::ErrorCategory::ImportResolution, *client, workspace, retriever);
    CHECK(workspace_context.find("PaymentService.java") != std::string::npos);
    CHECK(workspace_context.find("Billing") != std::string::npos);  // top-level symbols listed

    // syntax errors need no external context
    const auto none_context = refine::gather_repair_context(
        import_diag, refine::ErrorCategory::Syntax, *client, workspace, retriever);
    CHECK(none_context.empty());
    client->shutdown();
}

TEST_CASE("repair loop: clean first try means zero repair calls") {
    RepairRig rig(publish_clean(), "clean");
    refine::ScriptedLlmClient llm({scripted("```python\nunused\n```")});
    const auto result = rig.run(llm);
    CHECK(result.status == refine::GenStatus::valid);
    CHECK(result.rounds.empty());
    CHECK(llm.calls() == 0);
    CHECK(result.gen_tokens == 280);
    CHECK(result.fix_tokens == 0);
}

TEST_CASE("repair loop: one error then clean resolves in exactly one repair call") {
    json script = json::array();
    script.push_back(
        json::array({{{"version_delta", 0},
                      {"diagnostics", json::array({error_diag("name 'helper' is not defined")})}}}));
    script.push_back(json::array({{{"version_delta", 0}, {"diagnostics", json::array()}}}));
    RepairRig rig(script, "one_then_clean");
    refine::ScriptedLlmClient llm(
        {scripted("```python\ndef test_a():\n    assert helper() == 1\n```", 150, 60)});
    const auto result = rig.run(llm);
    CHECK(result.status == refine::GenStatus::valid);
    REQUIRE(result.rounds.size() == 1);
    CHECK(llm.calls() == 1);
    CHECK(result.rounds[0].index == 1);
    REQUIRE(result.rounds[0].categorized.size() == 1);
    CHECK(result.rounds[0].categorized[0].second == refine::ErrorCategory::MemberAccess);
    CHECK(result.fix_tokens == 210);
}

TEST_CASE("repair loop: persistent error burns exactly the budget then reports invalid") {
    RepairRig rig(publish_error("invalid syntax"), "always_error");
    refine::ScriptedLlmClient llm({scripted("```python\nstill broken(\n```", 10, 5)});
    const auto result = rig.run(llm, 5);
    CHECK(result.status == refine::GenStatus::invalid);
    CHECK(result.rounds.size() == 5);
    CHECK(llm.calls() == 5);
    CHECK(result.final_error_count == 1);
    // 1 + budget total LLM calls
    CHECK(result.request_usages.size() == 6);
}

TEST_CASE("repair loop: silent server yields the no_report outcome") {
    RepairRig rig(json::array({json::array()}), "silent");
    refine::ScriptedLlmClient llm({scripted("```python\nx\n```")});
    const auto result = rig.run(llm);
    CHECK(result.status == refine::GenStatus::no_report);
    CHECK(result.rounds.empty());
}

TEST_CASE("repair loop: LLM failure mid-loop keeps best code and the error") {
    struct FailingLlm : refine::LlmClient {
        refine::LlmResponse chat(const std::vector<refine::Message>&) override {
            throw refine::LlmError("endpoint on fire");
        }
    };
    RepairRig rig(publish_error("invalid syntax"), "llm_fail");
    FailingLlm llm;
    const auto result = rig.run(llm);
    CHECK(result.status == refine::GenStatus::invalid);
    CHECK(result.error.find("on fire") != std::string::npos);
    CHECK(result.final_code.find("def test_a") != std::string::npos);
}

TEST_CASE("repair loop token ledger balances") {
    json script = json::array();
    script.push_back(
        json::array({{{"version_delta", 0},
                      {"diagnostics", json::array({error_diag("unexpected token")})}}}));
    script.push_back(
        json::array({{{"version_delta", 0},
                      {"diagnostics", json::array({error_diag("unexpected token")})}}}));
    script.push_back(json::array({{{"version_delta", 0}, {"diagnostics", json::array()}}}));
    RepairRig rig(script, "ledger");
    refine::ScriptedLlmClient llm({scripted("```python\na = 1\n```", 11, 7),
                                   scripted("```python\nb = 2\n```", 13, 17)});
    const auto result = rig.run(llm);
    CHECK(result.status == refine::GenStatus::valid);
    long long total = 0;
    for (const auto& usage : result.request_usages) total += usage.total();
    CHECK(result.gen_tokens + result.fix_tokens == total);
    CHECK(result.fix_tokens == 11 + 7 + 13 + 17);
}

TEST_CASE("scratch file is deleted on success unless kept") {
    RepairRig rig(publish_clean(), "scratch");
    refine::ScriptedLlmClient llm({scripted("x")});
    retrieval::Retriever retriever(*rig.client, rig.workspace, 2);
    const auto* adapter = syntax::find_adapter("python");
    core::FocalMethod focal;
    focal.language_id = "python";

    refine::RepairOptions options;
    options.budget = 5;
    options.scratch_path = (rig.temp.root() / "test_keepme.py").string();
    options.language_id = "python";
    options.keep_scratch = true;
    auto kept = refine::repair_loop("pass\n", focal, *rig.client, rig.workspace, retriever, llm,
                                    *adapter, options, {});
    CHECK(kept.status == refine::GenStatus::valid);
    CHECK(fs::exists(options.scratch_path));

    options.scratch_path = (rig.temp.root() / "test_dropme.py").string();
    options.keep_scratch = false;
    auto dropped = refine::repair_loop("pass\n", focal, *rig.client, rig.workspace, retriever,
                                       llm, *adapter, options, {});
    CHECK(dropped.status == refine::GenStatus::valid);
    CHECK_FALSE(fs::exists(options.scratch_path));
}

TEST_CASE("http llm client: chat round-trip and usage accounting") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        ++hits;
        const json body = json::parse(req.body);
        CHECK(body["model"] == "test-model");
        CHECK(body["messages"].size() == 2);
        CHECK(req.get_header_value("Authorization") == "Bearer sekrit");
        json reply = {
            {"choices", json::array({{{"message", {{"role", "assistant"},
                                                   {"content", "```python\nok = 1\n```"}}}}})},
            {"usage", {{"prompt_tokens", 42}, {"completion_tokens", 17}}}};
        res.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread runner([&] { server.listen_after_bind(); });

    ::setenv("LSPGEN_TEST_KEY", "sekrit", 1);
    refine::LlmConfig config;
    config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    config.model = "test-model";
    config.api_key_env = "LSPGEN_TEST_KEY";
    refine::HttpLlmClient client(config);
    const auto response = client.chat({{"system", "s"}, {"user", "u"}});
    CHECK(response.content.find("ok = 1") != std::string::npos);
    CHECK(response.usage.prompt_tokens == 42);
    CHECK(response.usage.completion_tokens == 17);
    CHECK(hits == 1);

    server.stop();
    runner.join();
}

TEST_CASE("http llm client: 401 names the key variable to set") {
    httplib::Server server;
    server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
        res.status = 401;
        res.set_content("{\"error\":\"bad key\"}", "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread runner([&] { server.listen_after_bind(); });

    refine::LlmConfig config;
    config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    config.model = "m";
    config.api_key_env = "LSPGEN_MISSING_KEY_VAR";
    refine::HttpLlmClient client(config);
    try {
        client.chat({{"user", "hello"}});
        FAIL("expected AuthError");
    } catch (const refine::AuthError& e) {
        CHECK(e.env_var == "LSPGEN_MISSING_KEY_VAR");
        CHECK(std::string(e.what()).find("LSPGEN_MISSING_KEY_VAR") != std::string::npos);
    }
    server.stop();
    runner.join();
}

TEST_CASE("http llm client: transient 500s are retried") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        if (++hits < 3) {
            res.status = 500;
            res.set_content("{}", "application/json");
            return;
        }
        json reply = {{"choices", json::array({{{"message", {{"content", "fine"}}}}})},
                      {"usage", {{"prompt_tokens", 1}, {"completion_tokens", 1}}}};
        res.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread runner([&] { server.listen_after_bind(); });

    refine::LlmConfig config;
    config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    config.model = "m";
    config.max_retries = 2;
    refine::HttpLlmClient client(config);
    const auto response = client.chat({{"user", "x"}});
    CHECK(response.content == "fine");
    CHECK(hits == 3);
    server.stop();
    runner.join();
}

TEST_CASE("scripted llm from file: jsonl transcript with cycling") {
    const auto path = fs::temp_directory_path() / "lspgen_llm_script.jsonl";
    {
        std::ofstream out(path);
        out << json{{"content", "```\nfirst\n```"}, {"prompt_tokens", 5}, {"completion_tokens", 2}}
                   .dump()
            << "\n";
        out << "\"plain string reply\"\n";
    }
    auto client = refine::ScriptedLlmClient::from_file(path.string());
    CHECK(client->chat({}).content == "```\nfirst\n```");
    CHECK(client->chat({}).content == "plain string reply");
    CHECK(client->chat({}).content == "```\nfirst\n```");  // cycles
    fs::remove(path);

    refine::LlmConfig missing;
    missing.endpoint = "file:///nonexistent.jsonl";
    CHECK_THROWS_AS(refine::make_llm_client(missing), refine::LlmError);
}
