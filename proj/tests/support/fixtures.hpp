#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lspgen/core/source_file.hpp"
#include "lspgen/core/workspace.hpp"
#include "lspgen/syntax/adapter.hpp"
#include "lspgen/syntax/lexer.hpp"
#include "lspgen/syntax/outline.hpp"

namespace testutil {

inline std::filesystem::path fixture_dir() { return LSPGEN_FIXTURE_DIR; }

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline lspgen::core::SourceFile load_fixture(const std::string& relative) {
    const auto path = fixture_dir() / relative;
    const auto* adapter = lspgen::syntax::adapter_for_path(path);
    return lspgen::core::SourceFile(path.string(), read_file(path),
                                    adapter != nullptr ? adapter->language_id : "");
}

/// Every function/method of the file, as focal methods.
inline std::vector<lspgen::core::FocalMethod> fixture_methods(
    const lspgen::core::SourceFile& file, const lspgen::syntax::LanguageAdapter& adapter) {
    std::vector<lspgen::core::FocalMethod> out;
    const auto symbols = lspgen::syntax::file_outline(file, adapter);
    for (const auto* s : lspgen::core::flatten(symbols)) {
        if (s->is_callable()) out.push_back(lspgen::core::make_focal_method(file, *s));
    }
    return out;
}

/// TOK(loc_m) as the bundled server would serve it: full-file lex filtered
/// to the method span.
inline std::vector<lspgen::core::Token> method_tokens(
    const lspgen::core::SourceFile& file, const lspgen::core::FocalMethod& focal,
    const lspgen::syntax::LanguageAdapter& adapter) {
    const auto imports = lspgen::syntax::imported_module_names(file, adapter);
    const auto lexed = lspgen::syntax::lex(file.text(), adapter.lexical, imports);
    const auto all = lspgen::syntax::to_semantic_tokens(lexed, file);
    std::vector<lspgen::core::Token> out;
    for (const auto& t : all) {
        if (lspgen::core::contains(focal.symbol.loc, t.loc)) out.push_back(t);
    }
    return out;
}

/// Temporary copy of a fixture workspace directory (tests may write into it).
class TempWorkspace {
public:
    explicit TempWorkspace(const std::string& fixture_subdir) {
        namespace fs = std::filesystem;
        root_ = fs::temp_directory_path() /
                ("lspgen_test_" + fixture_subdir + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter()++));
        fs::create_directories(root_);
        fs::copy(fixture_dir() / fixture_subdir, root_, fs::copy_options::recursive);
    }

    ~TempWorkspace() {
        std::error_code ec;
        std::filesystem::remove_all(root_, ec);
    }

    const std::filesystem::path& root() const { return root_; }

private:
    static int& counter() {
        static int n = 0;
        return n;
    }
    std::filesystem::path root_;
};

}  // namespace testutil
