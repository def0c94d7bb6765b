#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lspgen/harness/config.hpp"

namespace lspgen::harness {

struct CoverageResult {
    std::optional<double> percent;
    std::string raw_output;
    std::string error;  // set when the runner failed or output was unparseable
};

/// Runs the external coverage command ({tests} and {workspace} substituted)
/// and parses its summary with the configured regex; the first capture group
/// is the percentage. Never throws: failures leave coverage unavailable.
CoverageResult run_external_coverage(const CoverageConfig& config,
                                     const std::vector<std::string>& test_paths,
                                     const std::string& workspace_root);

}  // namespace lspgen::harness
