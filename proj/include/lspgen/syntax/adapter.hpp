#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "lspgen/syntax/lexer.hpp"

namespace lspgen::syntax {

enum class BlockStyle { braces, indentation };

/// Classification table: which construct keywords of the grammar open
/// branches, loops, switches, and so on. The parser translates matches into
/// the shared node-kind vocabulary.
struct ConstructTable {
    std::unordered_set<std::string> if_like;        // if, elif
    std::unordered_set<std::string> loop_like;      // while, for, do
    std::unordered_set<std::string> switch_like;    // switch, select, match
    std::unordered_set<std::string> case_like;      // case
    std::unordered_set<std::string> default_like;   // default
    std::unordered_set<std::string> return_like;    // return
    std::unordered_set<std::string> raise_like;     // throw, raise
    std::unordered_set<std::string> break_like;     // break
    std::unordered_set<std::string> continue_like;  // continue
    std::unordered_set<std::string> try_like;       // try
    std::unordered_set<std::string> handler_like;   // catch, except
    std::unordered_set<std::string> finally_like;   // finally
    std::unordered_set<std::string> with_like;      // with, defer, synchronized
};

/// Everything the pipeline needs to know about one language: lexical tables,
/// construct classification, and test-file conventions.
struct LanguageAdapter {
    std::string language_id;
    std::vector<std::string> extensions;
    BlockStyle block_style = BlockStyle::braces;
    LexicalSpec lexical;
    ConstructTable constructs;
    bool exception_edges = false;   // CFG edges into handler clauses
    bool c_style_ternary = false;   // cond ? a : b
    bool python_ternary = false;    // a if cond else b

    std::string comment_prefix;        // "//" or "#"
    std::string framework_imports;     // test framework import block
    std::string scaffold_template;     // contains {{FOCAL}} and {{TEST_BODY}}
    std::string test_name_template;    // e.g. "test_{{STEM}}{{SUFFIX}}.py"
    std::string one_shot_example;      // worked request/answer pair for prompts

    /// Conventional test file name for a focal file stem; `suffix`
    /// disambiguates scratch files across runs (may be empty).
    std::string test_file_name(const std::string& stem, const std::string& suffix) const;

    /// Test-class/function skeleton named after the focal method, with
    /// exactly one {{TEST_BODY}} placeholder left in place.
    std::string scaffold(const std::string& focal_name) const;
};

const LanguageAdapter* find_adapter(const std::string& language_id);
const LanguageAdapter* adapter_for_path(const std::filesystem::path& path);
const std::vector<LanguageAdapter>& all_adapters();

/// extension -> language_id for every registered adapter.
std::map<std::string, std::string> adapter_extension_map();

}  // namespace lspgen::syntax
