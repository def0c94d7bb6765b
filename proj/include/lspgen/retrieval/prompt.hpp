#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lspgen/core/error.hpp"
#include "lspgen/core/workspace.hpp"
#include "lspgen/retrieval/snippet.hpp"
#include "lspgen/retrieval/template.hpp"
#include "lspgen/syntax/adapter.hpp"

namespace lspgen::retrieval {

/// The assembled request for the LLM: a chain-of-thought preamble with one
/// worked example, and a user message holding focal source, retrieved
/// context, and the test template, in that order.
struct PromptBundle {
    std::string system;
    std::string user;
    std::size_t estimated_tokens = 0;
    std::string focal_id;                        // file:name for reports
    std::optional<core::Location> branch_target;  // set for branch-targeted runs
    std::vector<std::string> dropped_items;       // truncation audit trail
};

class BudgetError : public Error {
public:
    BudgetError(const std::string& message, std::vector<std::string> dropped)
        : Error(message), dropped(std::move(dropped)) {}

    std::vector<std::string> dropped;
};

struct PromptOptions {
    std::size_t context_budget_tokens = 6000;
};

/// Renders the three-part prompt. When the bundle overruns the budget,
/// reference snippets go first (farthest origin from the focal file first),
/// then definitions shrink to their signature; a prompt that still cannot
/// fit raises BudgetError naming what was dropped.
PromptBundle build_prompt(const core::FocalMethod& focal, const ContextBundle& bundle,
                          const TestTemplate& tmpl, const syntax::LanguageAdapter& adapter,
                          const core::Workspace& workspace,
                          const std::optional<core::Location>& branch_target = std::nullopt,
                          const PromptOptions& options = {});

}  // namespace lspgen::retrieval
