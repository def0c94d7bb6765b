#include "lspgen/harness/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "lspgen/core/error.hpp"
#include "lspgen/refine/categories.hpp"

namespace lspgen::harness {

using nlohmann::json;

namespace {

refine::ErrorCategory category_from_name(const std::string& name) {
    using C = refine::ErrorCategory;
    if (name == "Redeclaration") return C::Redeclaration;
    if (name == "ImportResolution") return C::ImportResolution;
    if (name == "MemberAccess") return C::MemberAccess;
    if (name == "TypeMismatch") return C::TypeMismatch;
    if (name == "ConstructorCall") return C::ConstructorCall;
    if (name == "Syntax") return C::Syntax;
    if (name == "UnhandledException") return C::UnhandledException;
    if (name == "Unknown") return C::Unknown;
    throw ConfigError("unknown error category in config: " + name);
}

lsp::ServerConfig parse_server(const std::string& language_id, const json& j) {
    lsp::ServerConfig server;
    server.language_id = language_id;
    if (!j.contains("command") || !j["command"].is_array() || j["command"].empty()) {
        throw ConfigError("server '" + language_id + "' needs a non-empty command array");
    }
    for (const auto& part : j["command"]) server.command.push_back(part.get<std::string>());
    server.initialization_options = j.value("initialization_options", json::object());
    server.diagnostics_wait = std::chrono::milliseconds(j.value("diagnostics_wait_ms", 2000));
    server.diagnostics_settle = std::chrono::milliseconds(j.value("diagnostics_settle_ms", 100));
    server.request_timeout = std::chrono::milliseconds(j.value("request_timeout_ms", 15000));
    server.warmup_timeout = std::chrono::milliseconds(j.value("warmup_timeout_ms", 60000));
    if (server.request_timeout.count() <= 0 || server.diagnostics_wait.count() <= 0) {
        throw ConfigError("server '" + language_id + "' timeouts must be positive");
    }
    return server;
}

}  // namespace

ToolConfig load_config(const std::filesystem::path& config_path,
                       const std::filesystem::path& workspace_hint) {
    ToolConfig config;
    config.workspace_root = workspace_hint.empty() ? "." : workspace_hint;

    std::filesystem::path path = config_path;
    if (path.empty()) {
        const auto candidate = config.workspace_root / "lspgen.json";
        if (std::filesystem::exists(candidate)) path = candidate;
    }
    if (path.empty()) return config;

    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed config " + path.string() + ": " + e.what());
    }

    try {
        if (j.contains("workspace")) {
            std::filesystem::path ws = j["workspace"].get<std::string>();
            config.workspace_root = ws.is_absolute() ? ws : path.parent_path() / ws;
        }
        if (j.contains("output_dir")) {
            config.output_dir = j["output_dir"].get<std::string>();
        }
        config.budget = j.value("budget", config.budget);
        config.context_budget_tokens = j.value("context_budget_tokens", config.context_budget_tokens);
        config.reference_limit = j.value("reference_limit", config.reference_limit);
        config.min_lines = j.value("min_lines", config.min_lines);
        config.eval_workers = j.value("eval_workers", config.eval_workers);

        const json servers = j.value("servers", json::object());
        for (const auto& [language_id, server_json] : servers.items()) {
            config.servers[language_id] = parse_server(language_id, server_json);
        }

        if (j.contains("llm")) {
            const auto& llm = j["llm"];
            config.llm.endpoint = llm.value("endpoint", std::string{});
            config.llm.model = llm.value("model", std::string{});
            config.llm.api_key_env = llm.value("api_key_env", config.llm.api_key_env);
            if (llm.contains("temperature") && !llm["temperature"].is_null()) {
                config.llm.temperature = llm["temperature"].get<double>();
            }
            if (llm.contains("top_p") && !llm["top_p"].is_null()) {
                config.llm.top_p = llm["top_p"].get<double>();
            }
            config.llm.request_timeout =
                std::chrono::milliseconds(llm.value("request_timeout_ms", 120000));
            config.llm.max_retries = llm.value("max_retries", config.llm.max_retries);
        }

        const json pattern_tables = j.value("error_patterns", json::object());
        for (const auto& [language_id, patterns] : pattern_tables.items()) {
            for (const auto& [category_name, list] : patterns.items()) {
                const auto category = category_from_name(category_name);
                for (const auto& substring : list) {
                    config.extra_patterns[language_id].push_back(
                        refine::MessagePattern{substring.get<std::string>(), category});
                }
            }
        }

        if (j.contains("coverage")) {
            CoverageConfig cov;
            const json command = j["coverage"].value("command", json::array());
            for (const auto& part : command) {
                cov.command.push_back(part.get<std::string>());
            }
            cov.summary_regex = j["coverage"].value("summary_regex", std::string{});
            if (!cov.command.empty()) config.coverage = std::move(cov);
        }
    } catch (const json::exception& e) {
        throw ConfigError("malformed config " + path.string() + ": " + e.what());
    }
    return config;
}

void apply_env_overrides(ToolConfig& config) {
    if (const char* endpoint = std::getenv("LSPGEN_LLM_ENDPOINT");
        endpoint != nullptr && *endpoint != '\0') {
        config.llm.endpoint = endpoint;
    }
    if (const char* model = std::getenv("LSPGEN_LLM_MODEL"); model != nullptr && *model != '\0') {
        config.llm.model = model;
    }
}

}  // namespace lspgen::harness
