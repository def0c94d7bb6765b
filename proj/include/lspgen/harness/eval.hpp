#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lspgen/harness/pipeline.hpp"

namespace lspgen::harness {

struct EvalRow {
    std::string method_id;  // relative-path:name
    int repeat = 1;         // 1-based
    std::string status;     // valid | invalid | no_report | error
    int rounds = 0;
    long long gen_tokens = 0;
    long long fix_tokens = 0;
    double wall_ms = 0;
    double overhead_ms = 0;
    std::string error;
    std::string test_path;  // written under output_dir for valid results
};

struct EvalReport {
    std::vector<EvalRow> rows;
    int eligible_methods = 0;
    int repeats = 1;
    double valid_rate = 0;
    std::optional<double> line_coverage;
    std::string coverage_error;
};

/// valid results over total attempts; 0 when there were no attempts.
double compute_valid_rate(int valid, int attempts);

struct EvalOptions {
    int min_lines = 10;
    int repeats = 1;
    int workers = 0;  // 0 -> min(hardware, 4)
};

/// Enumerates every function/method longer than min_lines across the
/// workspace's supported files and runs the generation pipeline on each,
/// `repeats` times. The project never needs to compile for this to finish.
EvalReport run_eval(Session& session, const EvalOptions& options);

std::string render_table(const EvalReport& report);

/// Line-delimited JSON: one row object per line, then one aggregate record.
std::string render_jsonl(const EvalReport& report);

}  // namespace lspgen::harness
