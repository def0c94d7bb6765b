#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lspgen/lsp/client.hpp"
#include "lspgen/refine/categories.hpp"
#include "lspgen/refine/llm.hpp"

namespace lspgen::harness {

struct CoverageConfig {
    std::vector<std::string> command;  // template; {tests} and {workspace} substituted
    std::string summary_regex;         // first capture group = percentage
};

/// Everything the CLI can be told, resolved with precedence
/// flags > environment > config file > defaults.
struct ToolConfig {
    std::filesystem::path workspace_root = ".";
    std::filesystem::path output_dir = "lspgen-out";
    int budget = 5;  // repair iterations
    std::size_t context_budget_tokens = 6000;
    int reference_limit = 2;
    int min_lines = 10;
    int eval_workers = 0;  // 0 -> min(cpu count, 4)
    bool keep_scratch = false;

    std::map<std::string, lsp::ServerConfig> servers;  // language_id -> server
    refine::LlmConfig llm;
    std::map<std::string, std::vector<refine::MessagePattern>> extra_patterns;  // per language
    std::optional<CoverageConfig> coverage;
};

/// Reads the JSON config file. Unknown keys are ignored; malformed values
/// raise ConfigError. `path` empty means: use <workspace>/lspgen.json when
/// present, else defaults.
ToolConfig load_config(const std::filesystem::path& config_path,
                       const std::filesystem::path& workspace_hint);

/// Applies environment overrides (LSPGEN_LLM_ENDPOINT, and the API key
/// variable is read lazily by the client).
void apply_env_overrides(ToolConfig& config);

}  // namespace lspgen::harness
