#include "lspgen/harness/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <sstream>

#include "lspgen/core/log.hpp"
#include "lspgen/syntax/cfg.hpp"
#include "lspgen/syntax/parser.hpp"

namespace lspgen::harness {

namespace fs = std::filesystem;

MethodSelector MethodSelector::parse(const std::string& raw) {
    MethodSelector selector;
    const auto colon = raw.find(':');
    if (colon != std::string::npos) {
        int line = 0;
        int col = 0;
        const auto* begin = raw.data();
        const auto* mid = raw.data() + colon;
        const auto* end = raw.data() + raw.size();
        const auto r1 = std::from_chars(begin, mid, line);
        const auto r2 = std::from_chars(mid + 1, end, col);
        if (r1.ec == std::errc{} && r2.ec == std::errc{} && r1.ptr == mid && r2.ptr == end &&
            line >= 1 && col >= 1) {
            selector.position = core::Position{line - 1, col - 1};
            return selector;
        }
    }
    selector.name = raw;
    return selector;
}

core::Symbol resolve_method(const std::vector<core::Symbol>& symbols,
                            const MethodSelector& selector, const std::string& file_path) {
    const auto flat = core::flatten(symbols);

    if (selector.position) {
        const core::Symbol* best = nullptr;
        for (const auto* s : flat) {
            if (!s->is_callable()) continue;
            if (!core::contains(s->loc, file_path, *selector.position)) continue;
            if (best == nullptr || core::contains(best->loc, s->loc)) best = s;
        }
        if (best == nullptr) {
            throw SelectorError("no function or method at " + file_path + ":" +
                                std::to_string(selector.position->line + 1) + ":" +
                                std::to_string(selector.position->character + 1));
        }
        return *best;
    }

    std::vector<const core::Symbol*> matches;
    for (const auto* s : flat) {
        if (s->is_callable() && s->name == selector.name) matches.push_back(s);
    }
    if (matches.empty()) {
        throw SelectorError("method '" + selector.name + "' not found in " + file_path);
    }
    if (matches.size() > 1) {
        std::vector<std::string> candidates;
        for (const auto* m : matches) {
            candidates.push_back(m->name + " at " + core::to_string(m->loc));
        }
        throw SelectorError("method '" + selector.name + "' is ambiguous in " + file_path,
                            std::move(candidates));
    }
    return *matches.front();
}

PipelineOutcome run_pipeline(PipelineDeps deps, const std::string& file_path,
                             const MethodSelector& selector, const PipelineOptions& options) {
    const std::string canonical = deps.workspace.canonical_key(file_path);
    core::SourceFile* file = deps.workspace.find_or_load(canonical);
    if (file == nullptr) {
        throw SelectorError("file not in workspace: " + file_path);
    }
    const syntax::LanguageAdapter* adapter = syntax::find_adapter(file->language_id());
    if (adapter == nullptr) adapter = syntax::adapter_for_path(canonical);
    if (adapter == nullptr) {
        throw ConfigError("no language adapter for " + canonical +
                          "; supported: python, java, go");
    }

    if (!deps.client.document_open(canonical)) deps.client.open_document(*file);
    const auto symbols = deps.client.symbols(canonical);
    const core::Symbol method = resolve_method(symbols, selector, canonical);

    PipelineOutcome outcome;
    outcome.focal = core::make_focal_method(*file, method);
    if (outcome.focal.language_id.empty()) outcome.focal.language_id = adapter->language_id;

    const auto stage_t0 = std::chrono::steady_clock::now();

    const auto tokens = deps.client.tokens(method.loc);
    const auto tree = syntax::parse(outcome.focal, *adapter);
    const auto cfg = syntax::build_cfg(tree, *adapter);

    std::optional<core::Location> only_span;
    if (options.branch_target) {
        for (const auto& span : syntax::condition_spans(cfg)) {
            const bool hit = core::contains(span, canonical, *options.branch_target) ||
                             span.start.line == options.branch_target->line;
            if (hit) {
                only_span = span;
                break;
            }
        }
        if (!only_span) {
            throw SelectorError("no branch guard at line " +
                                std::to_string(options.branch_target->line + 1));
        }
    }

    outcome.keys = keytok::extract_key_tokens(outcome.focal, tokens, cfg, only_span);

    retrieval::Retriever retriever(deps.client, deps.workspace, deps.config.reference_limit);
    outcome.bundle = retriever.build_bundle(outcome.focal, outcome.keys);

    outcome.tmpl = retrieval::infer_test_template(outcome.focal, *file, *adapter,
                                                  options.scratch_suffix);
    retrieval::PromptOptions prompt_options;
    prompt_options.context_budget_tokens = deps.config.context_budget_tokens;
    std::optional<core::Location> branch_span = only_span;
    outcome.prompt = retrieval::build_prompt(outcome.focal, outcome.bundle, outcome.tmpl,
                                             *adapter, deps.workspace, branch_span,
                                             prompt_options);
    outcome.stage_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - stage_t0)
                           .count();
    outcome.scratch_path = outcome.tmpl.target_path;

    if (options.skip_llm) return outcome;
    if (deps.llm == nullptr) throw ConfigError("no LLM client configured");

    const refine::GeneratedCode first =
        refine::generate(outcome.prompt.system, outcome.prompt.user, *deps.llm);

    refine::RepairOptions repair_options;
    repair_options.budget = deps.config.budget;
    repair_options.scratch_path = outcome.scratch_path;
    repair_options.language_id = adapter->language_id;
    repair_options.keep_scratch = options.keep_scratch;
    auto extra = deps.config.extra_patterns.find(adapter->language_id);
    if (extra != deps.config.extra_patterns.end()) {
        repair_options.extra_patterns = extra->second;
    }

    outcome.generation =
        refine::repair_loop(first.code, outcome.focal, deps.client, deps.workspace, retriever,
                            *deps.llm, *adapter, repair_options, first.usage);
    return outcome;
}

Session::Session(ToolConfig config)
    : config_(std::move(config)), workspace_(config_.workspace_root) {
    workspace_.scan(syntax::adapter_extension_map());
}

lsp::LspClient& Session::client_for(const std::string& language_id) {
    std::lock_guard lock(mutex_);
    auto it = clients_.find(language_id);
    if (it != clients_.end()) return *it->second;
    auto cfg = config_.servers.find(language_id);
    if (cfg == config_.servers.end()) {
        throw ConfigError("no language server configured for '" + language_id +
                          "' (add it under servers in the config file)");
    }
    auto client = lsp::LspClient::start(cfg->second, workspace_);
    auto [pos, ok] = clients_.emplace(language_id, std::move(client));
    (void)ok;
    return *pos->second;
}

refine::LlmClient& Session::llm() {
    std::lock_guard lock(mutex_);
    if (!llm_) llm_ = refine::make_llm_client(config_.llm);
    return *llm_;
}

void Session::set_llm(std::unique_ptr<refine::LlmClient> llm) {
    std::lock_guard lock(mutex_);
    llm_ = std::move(llm);
}

void Session::shutdown_all() {
    std::lock_guard lock(mutex_);
    for (auto& [language_id, client] : clients_) {
        (void)language_id;
        try {
            client->shutdown();
        } catch (const std::exception& e) {
            log::warn(std::string("shutdown: ") + e.what());
        }
    }
    clients_.clear();
}

std::string render_context_dump(const PipelineOutcome& outcome,
                                const core::Workspace& workspace) {
    std::ostringstream out;
    const auto rel = [&](const std::string& path) {
        std::error_code ec;
        const auto r = fs::relative(path, workspace.root(), ec);
        return ec || r.empty() ? path : r.string();
    };

    out << "focal: " << rel(outcome.focal.file_path) << ":" << outcome.focal.symbol.name << "\n";
    out << "key tokens (" << outcome.keys.tokens.size() << "):\n";
    for (const auto& t : outcome.keys.tokens) {
        out << "  - " << t.lex << " [" << core::to_string(t.role) << "] at "
            << core::to_string(t.loc.start) << "\n";
    }
    out << "context items (" << outcome.bundle.items.size() << "):\n";
    for (const auto& item : outcome.bundle.items) {
        for (const auto& s : item.definitions) {
            out << "  - definition of " << item.key_token.lex << " from " << rel(s.origin.file)
                << " (" << s.text.size() << " chars)\n";
        }
        for (const auto& s : item.references) {
            out << "  - usage of " << item.key_token.lex << " from " << rel(s.origin.file) << " ("
                << s.text.size() << " chars)\n";
        }
    }
    out << "context chars: " << outcome.bundle.total_chars << "\n";
    out << "estimated prompt tokens: " << outcome.prompt.estimated_tokens << "\n";
    out << "\n===== system =====\n" << outcome.prompt.system;
    out << "\n===== user =====\n" << outcome.prompt.user;
    return out.str();
}

}  // namespace lspgen::harness
