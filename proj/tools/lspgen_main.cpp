#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lspgen/core/error.hpp"
#include "lspgen/harness/config.hpp"
#include "lspgen/harness/coverage.hpp"
#include "lspgen/harness/eval.hpp"
#include "lspgen/harness/pipeline.hpp"
#include "lspgen/syntax/adapter.hpp"

namespace fs = std::filesystem;
using namespace lspgen;

namespace {

// Exit codes: distinct failures stay distinguishable in scripts.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSelectorError = 3;
constexpr int kGenerationError = 4;
constexpr int kNothingToDo = 5;

struct CommonFlags {
    std::string config_path;
    std::string workspace;
    std::string out_path;
    int budget = -1;
    bool keep = false;
};

harness::ToolConfig make_config(const CommonFlags& flags) {
    harness::ToolConfig config =
        harness::load_config(flags.config_path, flags.workspace.empty() ? "." : flags.workspace);
    harness::apply_env_overrides(config);
    if (!flags.workspace.empty()) config.workspace_root = flags.workspace;
    if (flags.budget >= 0) config.budget = flags.budget;
    if (flags.keep) config.keep_scratch = true;
    return config;
}

std::string unique_suffix() {
    const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now().time_since_epoch())
                         .count();
    return "g" + std::to_string(::getpid() % 10000) + std::to_string(now % 100000);
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

int run_generate(const CommonFlags& flags, const std::string& file, const std::string& method,
                 const std::string& branch) {
    harness::ToolConfig config = make_config(flags);
    harness::Session session(config);

    const auto* adapter = syntax::adapter_for_path(file);
    if (adapter == nullptr) {
        std::cerr << "unsupported language for " << file << " (no adapter)\n";
        return kConfigError;
    }

    harness::PipelineOptions options;
    options.keep_scratch = config.keep_scratch;
    options.scratch_suffix = unique_suffix();
    if (!branch.empty()) {
        const auto selector = harness::MethodSelector::parse(branch);
        if (!selector.position) {
            std::cerr << "--branch expects line:col (1-based)\n";
            return kConfigError;
        }
        options.branch_target = selector.position;
    }

    lsp::LspClient& client = session.client_for(adapter->language_id);
    harness::PipelineDeps deps{session.workspace(), client, &session.llm(), session.config()};
    harness::PipelineOutcome outcome =
        harness::run_pipeline(deps, file, harness::MethodSelector::parse(method), options);
    session.shutdown_all();

    if (!outcome.generation) {
        std::cerr << "pipeline produced no generation result\n";
        return kGenerationError;
    }
    const auto& gen = *outcome.generation;

    const fs::path out_file =
        flags.out_path.empty()
            ? config.output_dir / fs::path(adapter->test_file_name(
                                      fs::path(file).stem().string(), ""))
            : fs::path(flags.out_path);
    write_text(out_file, gen.final_code);

    std::cout << "focal:   " << outcome.prompt.focal_id << "\n"
              << "status:  " << refine::to_string(gen.status) << "\n"
              << "rounds:  " << gen.rounds.size() << "\n"
              << "tokens:  GEN " << gen.gen_tokens << " + FIX " << gen.fix_tokens << "\n"
              << "test:    " << out_file.string() << "\n";
    if (!gen.error.empty()) std::cout << "error:   " << gen.error << "\n";
    return gen.status == refine::GenStatus::valid ? kOk : kGenerationError;
}

int run_dump_context(const CommonFlags& flags, const std::string& file,
                     const std::string& method, const std::string& branch) {
    harness::ToolConfig config = make_config(flags);
    harness::Session session(config);

    const auto* adapter = syntax::adapter_for_path(file);
    if (adapter == nullptr) {
        std::cerr << "unsupported language for " << file << " (no adapter)\n";
        return kConfigError;
    }

    harness::PipelineOptions options;
    options.skip_llm = true;
    if (!branch.empty()) {
        const auto selector = harness::MethodSelector::parse(branch);
        options.branch_target = selector.position;
    }

    lsp::LspClient& client = session.client_for(adapter->language_id);
    harness::PipelineDeps deps{session.workspace(), client, nullptr, session.config()};
    harness::PipelineOutcome outcome =
        harness::run_pipeline(deps, file, harness::MethodSelector::parse(method), options);
    const std::string dump = harness::render_context_dump(outcome, session.workspace());
    session.shutdown_all();

    if (flags.out_path.empty()) {
        std::cout << dump;
    } else {
        write_text(flags.out_path, dump);
        std::cout << "context dump written to " << flags.out_path << "\n";
    }
    return kOk;
}

int run_eval(const CommonFlags& flags, int min_lines, int repeats) {
    harness::ToolConfig config = make_config(flags);
    if (min_lines >= 0) config.min_lines = min_lines;
    harness::Session session(config);

    harness::EvalOptions options;
    options.min_lines = config.min_lines;
    options.repeats = repeats;
    options.workers = config.eval_workers;

    harness::EvalReport report = harness::run_eval(session, options);

    if (report.eligible_methods > 0 && session.config().coverage) {
        std::vector<std::string> tests;
        for (const auto& row : report.rows) {
            if (!row.test_path.empty()) tests.push_back(row.test_path);
        }
        const auto coverage = harness::run_external_coverage(
            *session.config().coverage, tests, session.workspace().root().string());
        report.line_coverage = coverage.percent;
        report.coverage_error = coverage.error;
    }
    session.shutdown_all();

    std::cout << harness::render_table(report);
    const fs::path out_file = flags.out_path.empty()
                                  ? config.output_dir / "eval_report.jsonl"
                                  : fs::path(flags.out_path);
    write_text(out_file, harness::render_jsonl(report));
    std::cout << "report: " << out_file.string() << "\n";

    if (report.eligible_methods == 0) {
        std::cout << "no methods exceed " << options.min_lines << " lines; nothing to do\n";
        return kNothingToDo;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LSP-guided unit test generation"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand

    CommonFlags flags;
    app.add_option("--config", flags.config_path, "Path to the JSON config file");
    app.add_option("--workspace", flags.workspace, "Workspace root (overrides config)");
    app.add_option("--out", flags.out_path, "Output file path");
    app.add_option("--budget", flags.budget, "Repair-iteration budget");
    app.add_flag("--keep", flags.keep, "Keep scratch test files in the workspace");

    std::string file;
    std::string method;
    std::string branch;
    auto* generate = app.add_subcommand("generate", "Generate a unit test for one focal method");
    generate->add_option("--file", file, "Source file containing the focal method")->required();
    generate->add_option("--method", method, "Method name or 1-based line:col")->required();
    generate->add_option("--branch", branch, "Target one branch guard (1-based line:col)");

    auto* dump = app.add_subcommand("dump-context", "Render the prompt and context, no LLM call");
    dump->add_option("--file", file, "Source file containing the focal method")->required();
    dump->add_option("--method", method, "Method name or 1-based line:col")->required();
    dump->add_option("--branch", branch, "Target one branch guard (1-based line:col)");

    int min_lines = -1;
    int repeats = 1;
    auto* eval = app.add_subcommand("eval", "Generate tests for every eligible method");
    eval->add_option("--min-lines", min_lines, "Only methods longer than this many lines");
    eval->add_option("--repeats", repeats, "Repeat each method this many times");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return run_generate(flags, file, method, branch);
        if (dump->parsed()) return run_dump_context(flags, file, method, branch);
        if (eval->parsed()) return run_eval(flags, min_lines, repeats);
    } catch (const harness::SelectorError& e) {
        std::cerr << "selector error: " << e.what() << "\n";
        for (const auto& c : e.candidates) std::cerr << "  candidate: " << c << "\n";
        return kSelectorError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGenerationError;
    }
    return kOk;
}
