#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lspgen/core/workspace.hpp"
#include "lspgen/lsp/client.hpp"
#include "lspgen/refine/categories.hpp"
#include "lspgen/refine/llm.hpp"
#include "lspgen/retrieval/retriever.hpp"
#include "lspgen/syntax/adapter.hpp"

namespace lspgen::refine {

enum class GenStatus { valid, invalid, no_report };

const char* to_string(GenStatus status);

struct RepairRound {
    int index = 0;  // 1-based
    std::vector<lsp::Diagnostic> diagnostics_before;
    std::vector<std::pair<lsp::Diagnostic, ErrorCategory>> categorized;
    std::string repair_prompt;
    std::string resulting_code;
    Usage tokens;
};

struct GenerationResult {
    std::string final_code;
    GenStatus status = GenStatus::invalid;
    std::vector<RepairRound> rounds;
    long long gen_tokens = 0;  // initial generation (prompt + completion)
    long long fix_tokens = 0;  // all repair rounds
    std::vector<Usage> request_usages;  // every request, generation first
    double wall_ms = 0;
    double diagnose_ms = 0;  // time spent waiting on the language server
    std::string error;  // set when the LLM failed mid-loop
    int final_error_count = 0;
};

struct RepairOptions {
    int budget = 5;
    std::string scratch_path;   // inside the workspace; server must see it
    std::string language_id;
    bool keep_scratch = false;
    bool write_to_disk = true;
    std::vector<MessagePattern> extra_patterns;
};

/// Text block a repair prompt carries for one diagnostic, per its category's
/// context group.
std::string gather_repair_context(const lsp::Diagnostic& diagnostic, ErrorCategory category,
                                  lsp::LspClient& client, core::Workspace& workspace,
                                  retrieval::Retriever& retriever);

/// The compile-free loop: push code, read diagnostics, categorize, gather
/// context, re-prompt; stops on a clean pass, a missing diagnostics report,
/// or after `budget` repair calls. Total LLM calls are bounded by 1 + budget
/// including the initial generation recorded in `initial_usage`.
GenerationResult repair_loop(const std::string& initial_code, const core::FocalMethod& focal,
                             lsp::LspClient& client, core::Workspace& workspace,
                             retrieval::Retriever& retriever, LlmClient& llm,
                             const syntax::LanguageAdapter& adapter, const RepairOptions& options,
                             const Usage& initial_usage = {});

}  // namespace lspgen::refine
