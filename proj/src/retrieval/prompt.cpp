#include "lspgen/retrieval/prompt.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

namespace lspgen::retrieval {
namespace {

namespace fs = std::filesystem;

std::string relative_to_workspace(const core::Workspace& workspace, const std::string& path) {
    std::error_code ec;
    const fs::path rel = fs::relative(path, workspace.root(), ec);
    return ec || rel.empty() ? path : rel.string();
}

// Path-component distance between the snippet's origin and the focal file;
// farther snippets are dropped first when over budget.
int path_distance(const std::string& a, const std::string& b) {
    const fs::path pa = fs::path(a).parent_path();
    const fs::path pb = fs::path(b).parent_path();
    auto ia = pa.begin();
    auto ib = pb.begin();
    while (ia != pa.end() && ib != pb.end() && *ia == *ib) {
        ++ia;
        ++ib;
    }
    return static_cast<int>(std::distance(ia, pa.end()) + std::distance(ib, pb.end()));
}

std::string first_signature_lines(const std::string& text, const std::string& comment_prefix) {
    // Signature plus any leading comment block, capped at the first line that
    // plausibly ends the declaration header.
    std::istringstream in(text);
    std::string out;
    std::string line;
    int kept = 0;
    while (std::getline(in, line) && kept < 4) {
        out += line + "\n";
        ++kept;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.rfind(comment_prefix, 0) == 0) continue;  // leading comment, keep going
        break;
    }
    return out;
}

struct RenderedItem {
    std::string header;
    std::string body;
    SnippetKind kind;
    int distance = 0;
    std::size_t index = 0;  // original order for deterministic ties

    std::size_t size() const { return header.size() + body.size(); }
};

std::size_t estimate_tokens(std::size_t chars) { return (chars + 3) / 4; }

}  // namespace

PromptBundle build_prompt(const core::FocalMethod& focal, const ContextBundle& bundle,
                          const TestTemplate& tmpl, const syntax::LanguageAdapter& adapter,
                          const core::Workspace& workspace,
                          const std::optional<core::Location>& branch_target,
                          const PromptOptions& options) {
    PromptBundle out;
    out.branch_target = branch_target;
    out.focal_id = relative_to_workspace(workspace, focal.file_path) + ":" + focal.symbol.name;

    out.system =
        "You are an expert software test engineer. Generate a complete unit-test "
        "file for the focal method the user provides. Think step by step: first "
        "identify each branch guard in the focal method and what input makes it "
        "true or false, using the provided definitions and usage examples; then "
        "write one test per branch outcome. Reply with exactly one fenced code "
        "block containing the full test file.\n\n" +
        adapter.one_shot_example;

    std::vector<RenderedItem> items;
    for (const auto& item : bundle.items) {
        for (const auto& s : item.definitions) {
            RenderedItem r;
            r.kind = SnippetKind::definition;
            r.header = "### Definition of `" + item.key_token.lex + "` (from " +
                       relative_to_workspace(workspace, s.origin.file) + ")\n";
            r.body = "```" + adapter.language_id + "\n" + s.text + "\n```\n";
            r.distance = path_distance(s.origin.file, focal.file_path);
            r.index = items.size();
            items.push_back(std::move(r));
        }
        for (const auto& s : item.references) {
            RenderedItem r;
            r.kind = SnippetKind::reference_example;
            r.header = "### Usage example for `" + item.key_token.lex + "` (from " +
                       relative_to_workspace(workspace, s.origin.file) + ")\n";
            r.body = "```" + adapter.language_id + "\n" + s.text + "\n```\n";
            r.distance = path_distance(s.origin.file, focal.file_path);
            r.index = items.size();
            items.push_back(std::move(r));
        }
    }

    const std::string focal_section = "## Focal method (" +
                                      relative_to_workspace(workspace, focal.file_path) +
                                      ")\n```" + adapter.language_id + "\n" + focal.source +
                                      "\n```\n";
    std::string branch_section;
    if (branch_target) {
        branch_section =
            "## Branch target\nGenerate tests specifically exercising the branch guarded at line " +
            std::to_string(branch_target->start.line + 1) + ", column " +
            std::to_string(branch_target->start.character + 1) +
            ". Cover both the true and the false outcome of that guard.\n";
    }
    const std::string template_section =
        "## Test template\nComplete this file; replace " + std::string(TestTemplate::kPlaceholder) +
        " with the tests.\nWrite the result to " + relative_to_workspace(workspace, tmpl.target_path) +
        ".\n```" + adapter.language_id + "\n" + tmpl.render() + "\n```\n";

    const auto assemble = [&](const std::vector<RenderedItem>& kept) {
        std::string user = focal_section;
        user += "## Context\n";
        if (kept.empty()) user += "(no repository context retrieved)\n";
        std::vector<const RenderedItem*> ordered;
        ordered.reserve(kept.size());
        for (const auto& r : kept) ordered.push_back(&r);
        std::sort(ordered.begin(), ordered.end(),
                  [](const RenderedItem* a, const RenderedItem* b) { return a->index < b->index; });
        for (const auto* r : ordered) user += r->header + r->body;
        user += branch_section;
        user += template_section;
        return user;
    };

    const std::size_t budget = options.context_budget_tokens;
    std::vector<RenderedItem> kept = items;
    std::string user = assemble(kept);

    // Truncation pass 1: drop reference snippets, farthest origin first.
    while (estimate_tokens(user.size() + out.system.size()) > budget) {
        auto victim = kept.end();
        for (auto it = kept.begin(); it != kept.end(); ++it) {
            if (it->kind != SnippetKind::reference_example) continue;
            if (victim == kept.end() || it->distance > victim->distance ||
                (it->distance == victim->distance && it->index > victim->index)) {
                victim = it;
            }
        }
        if (victim == kept.end()) break;
        out.dropped_items.push_back("reference: " + victim->header);
        kept.erase(victim);
        user = assemble(kept);
    }

    // Truncation pass 2: shrink definitions to signature + leading comment.
    if (estimate_tokens(user.size() + out.system.size()) > budget) {
        for (auto& r : kept) {
            if (r.kind != SnippetKind::definition) continue;
            const std::string::size_type open = r.body.find('\n');
            if (open == std::string::npos) continue;
            const std::string inner = r.body.substr(open + 1, r.body.rfind("```") - open - 1);
            r.body = r.body.substr(0, open + 1) +
                     first_signature_lines(inner, adapter.comment_prefix) + "```\n";
            out.dropped_items.push_back("truncated definition: " + r.header);
            user = assemble(kept);
            if (estimate_tokens(user.size() + out.system.size()) <= budget) break;
        }
    }

    if (estimate_tokens(user.size() + out.system.size()) > budget) {
        throw BudgetError("prompt exceeds the context budget of " + std::to_string(budget) +
                              " tokens even after truncation",
                          out.dropped_items);
    }

    out.user = std::move(user);
    out.estimated_tokens = estimate_tokens(out.user.size() + out.system.size());
    return out;
}

}  // namespace lspgen::retrieval
