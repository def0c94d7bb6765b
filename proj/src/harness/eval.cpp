#include "lspgen/harness/eval.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lspgen/core/log.hpp"
#include "lspgen/syntax/adapter.hpp"

namespace lspgen::harness {

namespace fs = std::filesystem;
using nlohmann::json;

double compute_valid_rate(int valid, int attempts) {
    if (attempts <= 0) return 0.0;
    return static_cast<double>(valid) / static_cast<double>(attempts);
}

namespace {

struct Target {
    std::string file_path;
    std::string language_id;
    std::string method_name;
    core::Position position;  // inside the method, for unambiguous selection
    std::string method_id;
};

int span_lines(const core::Location& loc) {
    return loc.end.line - loc.start.line + 1;
}

std::string sanitize(const std::string& id) {
    std::string out;
    for (char ch : id) {
        out.push_back(std::isalnum(static_cast<unsigned char>(ch)) != 0 ? ch : '_');
    }
    return out;
}

std::vector<Target> enumerate_targets(Session& session, int min_lines) {
    std::vector<Target> targets;
    const auto& workspace = session.workspace();
    for (const auto& [path, file] : workspace.files()) {
        const auto* adapter = syntax::find_adapter(file.language_id());
        if (adapter == nullptr) continue;
        if (!session.config().servers.contains(adapter->language_id)) continue;
        lsp::LspClient& client = session.client_for(adapter->language_id);
        if (!client.document_open(path)) client.open_document(file);
        std::vector<core::Symbol> symbols;
        try {
            symbols = client.symbols(path);
        } catch (const std::exception& e) {
            log::warn("SYM failed for " + path + ": " + e.what());
            continue;
        }
        std::error_code ec;
        const auto rel = fs::relative(path, workspace.root(), ec);
        const std::string rel_path = ec || rel.empty() ? path : rel.string();
        for (const auto* s : core::flatten(symbols)) {
            if (!s->is_callable()) continue;
            if (span_lines(s->loc) <= min_lines) continue;
            Target t;
            t.file_path = path;
            t.language_id = adapter->language_id;
            t.method_name = s->name;
            t.position = s->loc.start;
            t.method_id = rel_path + ":" + s->name;
            targets.push_back(std::move(t));
        }
    }
    std::sort(targets.begin(), targets.end(),
              [](const Target& a, const Target& b) { return a.method_id < b.method_id; });
    return targets;
}

}  // namespace

EvalReport run_eval(Session& session, const EvalOptions& options) {
    EvalReport report;
    report.repeats = std::max(1, options.repeats);

    const std::vector<Target> targets = enumerate_targets(session, options.min_lines);
    report.eligible_methods = static_cast<int>(targets.size());
    if (targets.empty()) return report;

    struct Job {
        const Target* target;
        int repeat;
    };
    std::vector<Job> jobs;
    for (const auto& t : targets) {
        for (int r = 1; r <= report.repeats; ++r) jobs.push_back(Job{&t, r});
    }

    int worker_count = options.workers;
    if (worker_count <= 0) {
        worker_count = static_cast<int>(std::min<unsigned>(
            std::max(1u, std::thread::hardware_concurrency()), 4u));
    }
    worker_count = std::min<int>(worker_count, static_cast<int>(jobs.size()));

    std::atomic<std::size_t> next{0};
    std::mutex collect_mutex;
    std::vector<EvalRow> rows;

    const auto worker = [&](int worker_index) {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size()) return;
            const Job& job = jobs[k];
            EvalRow row;
            row.method_id = job.target->method_id;
            row.repeat = job.repeat;
            try {
                lsp::LspClient& client = session.client_for(job.target->language_id);
                MethodSelector selector;
                selector.position = core::Position{job.target->position.line,
                                                   job.target->position.character};
                PipelineOptions pipeline_options;
                pipeline_options.keep_scratch = session.config().keep_scratch;
                pipeline_options.scratch_suffix =
                    "e" + std::to_string(k) + "w" + std::to_string(worker_index);
                PipelineDeps deps{session.workspace(), client, &session.llm(),
                                  session.config()};
                PipelineOutcome outcome =
                    run_pipeline(deps, job.target->file_path, selector, pipeline_options);
                if (outcome.generation) {
                    row.status = refine::to_string(outcome.generation->status);
                    row.rounds = static_cast<int>(outcome.generation->rounds.size());
                    row.gen_tokens = outcome.generation->gen_tokens;
                    row.fix_tokens = outcome.generation->fix_tokens;
                    row.wall_ms = outcome.generation->wall_ms + outcome.stage_ms;
                    row.error = outcome.generation->error;
                    if (outcome.generation->status == refine::GenStatus::valid) {
                        const auto* adapter = syntax::find_adapter(job.target->language_id);
                        const std::string ext =
                            adapter != nullptr ? adapter->extensions.front() : ".txt";
                        const fs::path out_path =
                            session.config().output_dir / "gen" /
                            (sanitize(row.method_id) + "_r" + std::to_string(row.repeat) + ext);
                        std::error_code ec;
                        fs::create_directories(out_path.parent_path(), ec);
                        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
                        out << outcome.generation->final_code;
                        row.test_path = out_path.string();
                    }
                } else {
                    row.status = "error";
                    row.error = "pipeline returned no generation result";
                }
                row.overhead_ms = outcome.overhead_ms();
            } catch (const std::exception& e) {
                row.status = "error";
                row.error = e.what();
            }
            std::lock_guard lock(collect_mutex);
            rows.push_back(std::move(row));
        }
    };

    std::vector<std::thread> pool;
    for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();

    std::sort(rows.begin(), rows.end(), [](const EvalRow& a, const EvalRow& b) {
        if (a.method_id != b.method_id) return a.method_id < b.method_id;
        return a.repeat < b.repeat;
    });
    report.rows = std::move(rows);

    int valid = 0;
    for (const auto& row : report.rows) {
        if (row.status == "valid") ++valid;
    }
    report.valid_rate = compute_valid_rate(valid, static_cast<int>(report.rows.size()));
    return report;
}

std::string render_table(const EvalReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(48) << "method" << std::setw(8) << "repeat" << std::setw(10)
        << "status" << std::setw(8) << "rounds" << std::setw(10) << "gen_tok" << std::setw(10)
        << "fix_tok" << std::setw(12) << "wall_ms" << "\n";
    out << std::string(106, '-') << "\n";
    for (const auto& row : report.rows) {
        out << std::left << std::setw(48) << row.method_id << std::setw(8) << row.repeat
            << std::setw(10) << row.status << std::setw(8) << row.rounds << std::setw(10)
            << row.gen_tokens << std::setw(10) << row.fix_tokens << std::setw(12)
            << std::fixed << std::setprecision(1) << row.wall_ms << "\n";
    }
    out << std::string(106, '-') << "\n";
    out << "eligible methods: " << report.eligible_methods << ", repeats: " << report.repeats
        << ", attempts: " << report.rows.size() << "\n";
    out << "valid rate: " << std::fixed << std::setprecision(4) << report.valid_rate << "\n";
    if (report.line_coverage) {
        out << "line coverage: " << std::setprecision(2) << *report.line_coverage << "%\n";
    } else if (!report.coverage_error.empty()) {
        out << "line coverage: unavailable (" << report.coverage_error << ")\n";
    }
    return out.str();
}

std::string render_jsonl(const EvalReport& report) {
    std::ostringstream out;
    for (const auto& row : report.rows) {
        json j;
        j["method"] = row.method_id;
        j["repeat"] = row.repeat;
        j["status"] = row.status;
        j["rounds"] = row.rounds;
        j["gen_tokens"] = row.gen_tokens;
        j["fix_tokens"] = row.fix_tokens;
        j["wall_ms"] = row.wall_ms;
        j["overhead_ms"] = row.overhead_ms;
        if (!row.error.empty()) j["error"] = row.error;
        if (!row.test_path.empty()) j["test_path"] = row.test_path;
        out << j.dump() << "\n";
    }
    json aggregate;
    aggregate["aggregate"] = true;
    aggregate["eligible_methods"] = report.eligible_methods;
    aggregate["repeats"] = report.repeats;
    aggregate["attempts"] = report.rows.size();
    aggregate["valid_rate"] = report.valid_rate;
    if (report.line_coverage) {
        aggregate["line_coverage"] = *report.line_coverage;
    } else if (!report.coverage_error.empty()) {
        aggregate["coverage_error"] = report.coverage_error;
    }
    out << aggregate.dump() << "\n";
    return out.str();
}

}  // namespace lspgen::harness
