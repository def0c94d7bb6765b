#include "lspgen/harness/coverage.hpp"

#include <array>
#include <cstdio>
#include <regex>
#include <sstream>

namespace lspgen::harness {
namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out.push_back(c);
        }
    }
    out += "'";
    return out;
}

}  // namespace

CoverageResult run_external_coverage(const CoverageConfig& config,
                                     const std::vector<std::string>& test_paths,
                                     const std::string& workspace_root) {
    CoverageResult result;
    if (config.command.empty()) {
        result.error = "coverage runner not configured";
        return result;
    }

    std::string tests_joined;
    for (const auto& p : test_paths) {
        if (!tests_joined.empty()) tests_joined += " ";
        tests_joined += p;
    }

    std::ostringstream cmd;
    for (std::size_t i = 0; i < config.command.size(); ++i) {
        std::string part = config.command[i];
        if (part == "{tests}") {
            part = tests_joined;  // already space-separated paths
            cmd << (i ? " " : "") << part;
            continue;
        }
        std::size_t pos;
        while ((pos = part.find("{workspace}")) != std::string::npos) {
            part.replace(pos, 11, workspace_root);
        }
        cmd << (i ? " " : "") << shell_quote(part);
    }
    cmd << " 2>&1";

    FILE* pipe = ::popen(cmd.str().c_str(), "r");
    if (pipe == nullptr) {
        result.error = "cannot start coverage runner";
        return result;
    }
    std::array<char, 4096> buffer{};
    while (std::fgets(buffer.data(), static_cast<int>(buffer.size()), pipe) != nullptr) {
        result.raw_output += buffer.data();
    }
    const int status = ::pclose(pipe);
    if (status != 0) {
        result.error = "coverage runner exited with status " + std::to_string(status);
        return result;
    }

    if (config.summary_regex.empty()) {
        result.error = "no summary_regex configured";
        return result;
    }
    try {
        const std::regex re(config.summary_regex);
        std::smatch match;
        if (std::regex_search(result.raw_output, match, re) && match.size() >= 2) {
            result.percent = std::stod(match[1].str());
        } else {
            result.error = "coverage summary did not match the configured pattern";
        }
    } catch (const std::exception& e) {
        result.error = std::string("bad summary_regex: ") + e.what();
    }
    return result;
}

}  // namespace lspgen::harness
