#pragma once

#include <memory>
#include <optional>
#include <string>

#include "lspgen/core/workspace.hpp"
#include "lspgen/harness/config.hpp"
#include "lspgen/keytokens/extract.hpp"
#include "lspgen/refine/repair.hpp"
#include "lspgen/retrieval/prompt.hpp"
#include "lspgen/retrieval/retriever.hpp"
#include "lspgen/retrieval/template.hpp"

namespace lspgen::harness {

/// `--method` accepts a plain name or a 1-based "line:col" position.
struct MethodSelector {
    std::string name;
    std::optional<core::Position> position;  // 0-based once parsed

    static MethodSelector parse(const std::string& raw);
};

class SelectorError : public Error {
public:
    SelectorError(const std::string& message, std::vector<std::string> candidates = {})
        : Error(message), candidates(std::move(candidates)) {}

    std::vector<std::string> candidates;
};

/// Resolves the selector against a file's symbols to exactly one callable.
/// Zero or several matches raise SelectorError listing the candidates.
core::Symbol resolve_method(const std::vector<core::Symbol>& symbols,
                            const MethodSelector& selector, const std::string& file_path);

struct PipelineOptions {
    std::optional<core::Position> branch_target;  // 0-based
    bool skip_llm = false;                        // dump-context mode
    bool keep_scratch = false;
    std::string scratch_suffix;                   // uniqueness across runs/workers
};

struct PipelineOutcome {
    core::FocalMethod focal;
    keytok::KeyTokenSet keys;
    retrieval::ContextBundle bundle;
    retrieval::TestTemplate tmpl;
    retrieval::PromptBundle prompt;
    std::optional<refine::GenerationResult> generation;  // empty in dump mode
    std::string scratch_path;
    /// Token extraction + retrieval + prompt assembly time; diagnostics
    /// round-trips are accounted in generation->diagnose_ms.
    double stage_ms = 0;

    double overhead_ms() const {
        return stage_ms + (generation ? generation->diagnose_ms : 0.0);
    }
};

struct PipelineDeps {
    core::Workspace& workspace;
    lsp::LspClient& client;
    refine::LlmClient* llm;  // may be null only with skip_llm
    const ToolConfig& config;
};

/// The full per-method flow: tokens -> CFG -> key tokens -> context ->
/// prompt -> generate -> repair loop.
PipelineOutcome run_pipeline(PipelineDeps deps, const std::string& file_path,
                             const MethodSelector& selector, const PipelineOptions& options);

/// Owns the workspace and lazily started server handles for CLI commands.
class Session {
public:
    explicit Session(ToolConfig config);

    core::Workspace& workspace() { return workspace_; }
    const ToolConfig& config() const { return config_; }

    /// Starts (or reuses) the server for a language. Throws ConfigError when
    /// none is configured.
    lsp::LspClient& client_for(const std::string& language_id);

    refine::LlmClient& llm();
    void set_llm(std::unique_ptr<refine::LlmClient> llm);

    void shutdown_all();

private:
    ToolConfig config_;
    core::Workspace workspace_;
    std::map<std::string, std::unique_ptr<lsp::LspClient>> clients_;
    std::unique_ptr<refine::LlmClient> llm_;
    std::mutex mutex_;
};

/// Renders the dump-context report: prompt plus a structured listing of key
/// tokens and snippets with their origins. Byte-stable across runs.
std::string render_context_dump(const PipelineOutcome& outcome, const core::Workspace& workspace);

}  // namespace lspgen::harness
