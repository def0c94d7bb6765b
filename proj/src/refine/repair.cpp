#include "lspgen/refine/repair.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "lspgen/core/log.hpp"
#include "lspgen/keytokens/extract.hpp"

namespace lspgen::refine {
namespace {

namespace fs = std::filesystem;

void write_file(const std::string& path, const std::string& text) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

std::string render_file_tree(const fs::path& root, int max_depth) {
    std::string out;
    const std::function<void(const fs::path&, int)> walk = [&](const fs::path& dir, int depth) {
        if (depth > max_depth) return;
        std::vector<fs::directory_entry> entries;
        std::error_code ec;
        for (const auto& e : fs::directory_iterator(dir, ec)) entries.push_back(e);
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.path() < b.path(); });
        for (const auto& e : entries) {
            const std::string name = e.path().filename().string();
            if (!name.empty() && name.front() == '.') continue;
            if (name == "build" || name == "node_modules" || name == "__pycache__") continue;
            out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + name;
            if (e.is_directory()) {
                out += "/\n";
                walk(e.path(), depth + 1);
            } else {
                out += "\n";
            }
        }
    };
    walk(root, 0);
    return out;
}

std::string describe_symbols(const std::vector<core::Symbol>& symbols) {
    std::string out;
    for (const auto& s : symbols) {
        out += "- " + std::string(core::to_string(s.kind)) + " " + s.name + "\n";
    }
    return out;
}

}  // namespace

const char* to_string(GenStatus status) {
    switch (status) {
        case GenStatus::valid: return "valid";
        case GenStatus::invalid: return "invalid";
        case GenStatus::no_report: return "no_report";
    }
    return "invalid";
}

std::string gather_repair_context(const lsp::Diagnostic& diagnostic, ErrorCategory category,
                                  lsp::LspClient& client, core::Workspace& workspace,
                                  retrieval::Retriever& retriever) {
    const ContextNeed need = context_need(category);
    if (need == ContextNeed::none) return {};

    try {
        if (need == ContextNeed::workspace_level) {
            std::string out = "Workspace file structure:\n";
            out += render_file_tree(workspace.root(), 3);
            const auto& symbols = retriever.symbols_for(diagnostic.loc.file);
            if (!symbols.empty()) {
                out += "Top-level symbols in " + fs::path(diagnostic.loc.file).filename().string() +
                       ":\n" + describe_symbols(symbols);
            }
            return out;
        }

        // Symbol-level: definitions and usage examples for the tokens at the
        // error location (its full lines).
        std::vector<core::Token> tokens;
        try {
            auto all = client.tokens(core::Location{diagnostic.loc.file,
                                                    {diagnostic.loc.start.line, 0},
                                                    {diagnostic.loc.end.line + 1, 0}});
            tokens = std::move(all);
        } catch (const std::exception& e) {
            log::warn(std::string("TOK for repair context failed: ") + e.what());
        }

        std::string out;
        int queried = 0;
        std::set<std::string> seen;
        for (const auto& token : tokens) {
            if (queried >= 3) break;
            if (keytok::is_excluded_role(token.role)) continue;
            if (!seen.insert(token.lex).second) continue;
            auto defs = retriever.retrieve_definitions(token);
            auto refs = retriever.retrieve_references(token, diagnostic.loc, 1);
            if (defs.empty() && refs.empty()) continue;
            ++queried;
            for (const auto& s : defs) {
                out += "Definition of `" + token.lex + "` (" + s.origin.file + "):\n" + s.text +
                       "\n";
            }
            for (const auto& s : refs) {
                out += "Usage of `" + token.lex + "` (" + s.origin.file + "):\n" + s.text + "\n";
            }
        }
        return out;
    } catch (const std::exception& e) {
        log::warn(std::string("repair context gathering degraded: ") + e.what());
        return {};
    }
}

namespace {

std::string build_repair_prompt(
    const std::string& code,
    const std::vector<std::pair<lsp::Diagnostic, ErrorCategory>>& categorized,
    const std::vector<std::string>& contexts, const syntax::LanguageAdapter& adapter) {
    std::ostringstream out;
    out << "The following " << adapter.language_id
        << " test file has diagnostics that must be fixed.\n\n```" << adapter.language_id << "\n"
        << code << "\n```\n\nDiagnostics:\n";
    for (std::size_t i = 0; i < categorized.size(); ++i) {
        const auto& [diag, category] = categorized[i];
        out << (i + 1) << ". line " << (diag.loc.start.line + 1) << ": " << diag.message << " ["
            << to_string(category) << "]\n";
        if (i < contexts.size() && !contexts[i].empty()) {
            out << "Context:\n" << contexts[i] << "\n";
        }
    }
    out << "\nReturn the complete corrected file as one fenced code block. Keep the tests' "
           "intent; fix only what the diagnostics require.\n";
    return out.str();
}

}  // namespace

GenerationResult repair_loop(const std::string& initial_code,
                             const core::FocalMethod& /*focal*/,
                             lsp::LspClient& client, core::Workspace& workspace,
                             retrieval::Retriever& retriever, LlmClient& llm,
                             const syntax::LanguageAdapter& adapter, const RepairOptions& options,
                             const Usage& initial_usage) {
    const auto t0 = std::chrono::steady_clock::now();
    GenerationResult result;
    result.gen_tokens = initial_usage.total();
    result.request_usages.push_back(initial_usage);
    result.final_code = initial_code;

    std::string code = initial_code;
    int repair_calls = 0;

    for (;;) {
        if (options.write_to_disk) write_file(options.scratch_path, code);
        lsp::DiagnosticReport report;
        const auto diag_t0 = std::chrono::steady_clock::now();
        try {
            report = client.update_and_diagnose(options.scratch_path, code, options.language_id);
        } catch (const std::exception& e) {
            result.status = GenStatus::no_report;
            result.error = std::string("diagnose failed: ") + e.what();
            break;
        }
        result.diagnose_ms += std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - diag_t0)
                                  .count();
        if (!report.reported) {
            result.status = GenStatus::no_report;
            break;
        }
        std::vector<lsp::Diagnostic> errors;
        for (const auto& d : report.items) {
            if (d.severity == lsp::Diagnostic::Severity::error) errors.push_back(d);
        }
        result.final_error_count = static_cast<int>(errors.size());
        if (errors.empty()) {
            result.status = GenStatus::valid;
            break;
        }
        if (repair_calls >= options.budget) {
            result.status = GenStatus::invalid;
            break;
        }

        RepairRound round;
        round.index = repair_calls + 1;
        round.diagnostics_before = report.items;
        std::vector<std::string> contexts;
        for (const auto& diag : errors) {
            const ErrorCategory category =
                categorize(diag.message, options.language_id, options.extra_patterns);
            round.categorized.emplace_back(diag, category);
            contexts.push_back(
                gather_repair_context(diag, category, client, workspace, retriever));
        }
        round.repair_prompt = build_repair_prompt(code, round.categorized, contexts, adapter);

        LlmResponse response;
        try {
            response = llm.chat({{"system",
                                  "You fix code so that it produces zero diagnostics. Reply with "
                                  "one fenced code block holding the entire corrected file."},
                                 {"user", round.repair_prompt}});
        } catch (const std::exception& e) {
            result.status = GenStatus::invalid;
            result.error = e.what();
            result.rounds.push_back(std::move(round));
            break;
        }
        ++repair_calls;
        round.tokens = response.usage;
        result.fix_tokens += response.usage.total();
        result.request_usages.push_back(response.usage);
        try {
            code = extract_code_block(response.content);
        } catch (const GenerationError& e) {
            result.status = GenStatus::invalid;
            result.error = e.what();
            result.rounds.push_back(std::move(round));
            break;
        }
        round.resulting_code = code;
        result.final_code = code;
        result.rounds.push_back(std::move(round));
    }

    if (result.status == GenStatus::valid && !options.keep_scratch && options.write_to_disk) {
        std::error_code ec;
        fs::remove(options.scratch_path, ec);
    }
    result.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return result;
}

}  // namespace lspgen::refine
