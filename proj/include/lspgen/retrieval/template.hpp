#pragma once

#include <string>

#include "lspgen/core/workspace.hpp"
#include "lspgen/syntax/adapter.hpp"

namespace lspgen::retrieval {

/// Skeleton of the test file to generate: the focal file's own imports plus
/// the framework's, and a scaffold with exactly one placeholder.
struct TestTemplate {
    std::string import_block;
    std::string scaffold;  // contains kPlaceholder exactly once
    std::string target_path;

    static constexpr const char* kPlaceholder = "{{TEST_BODY}}";

    std::string render() const;
};

TestTemplate infer_test_template(const core::FocalMethod& focal,
                                 const core::SourceFile& focal_file,
                                 const syntax::LanguageAdapter& adapter,
                                 const std::string& scratch_suffix = {});

}  // namespace lspgen::retrieval
