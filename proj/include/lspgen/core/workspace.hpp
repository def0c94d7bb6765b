#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "lspgen/core/source_file.hpp"
#include "lspgen/core/symbol.hpp"

namespace lspgen::core {

/// The developer's project: a root directory and the source files under it.
/// Files are keyed by canonical absolute path so `contains` is decidable
/// for any path a server may hand back.
class Workspace {
public:
    explicit Workspace(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    /// Registers a file (reads it from disk unless text is supplied).
    SourceFile& add_file(const std::filesystem::path& path,
                         std::optional<std::string> text = std::nullopt,
                         std::string language_id = {});

    /// Scans `root` for files whose extension maps to a known language id
    /// via `ext_to_language`. Hidden directories and common build output
    /// directories are skipped.
    void scan(const std::map<std::string, std::string>& ext_to_language);

    /// True iff `path` (after normalization) lies under the workspace root.
    bool contains(const std::filesystem::path& path) const;

    SourceFile* find(const std::filesystem::path& path);
    const SourceFile* find(const std::filesystem::path& path) const;

    /// Loads the file on demand if it is under root but not yet registered.
    SourceFile* find_or_load(const std::filesystem::path& path);

    const std::map<std::string, SourceFile>& files() const { return files_; }

    std::string canonical_key(const std::filesystem::path& path) const;

private:
    SourceFile& add_file_locked(const std::filesystem::path& path,
                                std::optional<std::string> text, std::string language_id);

    std::filesystem::path root_;
    // Guards the map structure; SourceFile nodes stay put once inserted, so
    // returned pointers survive later insertions.
    mutable std::shared_mutex mutex_;
    std::map<std::string, SourceFile> files_;  // canonical path -> file
};

/// The method under test. `source` is the exact slice of the file covered
/// by `symbol.loc`.
struct FocalMethod {
    Symbol symbol;
    std::string file_path;  // canonical path of the containing file
    std::string source;
    std::string language_id;
};

FocalMethod make_focal_method(const SourceFile& file, const Symbol& symbol);

}  // namespace lspgen::core
