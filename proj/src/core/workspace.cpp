#include "lspgen/core/workspace.hpp"

#include <fstream>
#include <sstream>

#include "lspgen/core/error.hpp"

namespace lspgen::core {

namespace fs = std::filesystem;

namespace {

std::string read_whole_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool skip_directory(const fs::path& dir) {
    const std::string name = dir.filename().string();
    if (!name.empty() && name.front() == '.') return true;
    return name == "build" || name == "target" || name == "node_modules" ||
           name == "__pycache__" || name == "venv";
}

}  // namespace

Workspace::Workspace(fs::path root) {
    std::error_code ec;
    auto canonical = fs::weakly_canonical(fs::absolute(root), ec);
    root_ = ec ? fs::absolute(root).lexically_normal() : canonical;
    // A trailing slash would add an empty component and break prefix checks.
    if (root_.filename().empty() && root_.has_parent_path()) root_ = root_.parent_path();
}

std::string Workspace::canonical_key(const fs::path& path) const {
    fs::path p = path.is_absolute() ? path : root_ / path;
    std::error_code ec;
    auto canonical = fs::weakly_canonical(p, ec);
    return (ec ? p.lexically_normal() : canonical).string();
}

SourceFile& Workspace::add_file(const fs::path& path, std::optional<std::string> text,
                                std::string language_id) {
    std::unique_lock lock(mutex_);
    return add_file_locked(path, std::move(text), std::move(language_id));
}

SourceFile& Workspace::add_file_locked(const fs::path& path, std::optional<std::string> text,
                                       std::string language_id) {
    const std::string key = canonical_key(path);
    std::string content = text ? std::move(*text) : read_whole_file(key);
    auto [it, inserted] = files_.insert_or_assign(
        key, SourceFile(key, std::move(content), std::move(language_id)));
    (void)inserted;
    return it->second;
}

void Workspace::scan(const std::map<std::string, std::string>& ext_to_language) {
    if (!fs::exists(root_)) throw Error("workspace root does not exist: " + root_.string());
    std::vector<fs::path> found;
    auto options = fs::directory_options::skip_permission_denied;
    for (auto it = fs::recursive_directory_iterator(root_, options);
         it != fs::recursive_directory_iterator(); ++it) {
        if (it->is_directory()) {
            if (skip_directory(it->path())) it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file()) continue;
        auto ext = it->path().extension().string();
        auto lang = ext_to_language.find(ext);
        if (lang != ext_to_language.end()) found.push_back(it->path());
    }
    std::unique_lock lock(mutex_);
    for (const auto& p : found) {
        auto lang = ext_to_language.at(p.extension().string());
        if (!files_.contains(canonical_key(p))) add_file_locked(p, std::nullopt, lang);
    }
}

bool Workspace::contains(const fs::path& path) const {
    const fs::path p = canonical_key(path);
    auto root_it = root_.begin();
    auto path_it = p.begin();
    for (; root_it != root_.end(); ++root_it, ++path_it) {
        if (path_it == p.end() || *path_it != *root_it) return false;
    }
    return true;
}

SourceFile* Workspace::find(const fs::path& path) {
    std::shared_lock lock(mutex_);
    auto it = files_.find(canonical_key(path));
    return it == files_.end() ? nullptr : &it->second;
}

const SourceFile* Workspace::find(const fs::path& path) const {
    std::shared_lock lock(mutex_);
    auto it = files_.find(canonical_key(path));
    return it == files_.end() ? nullptr : &it->second;
}

SourceFile* Workspace::find_or_load(const fs::path& path) {
    if (auto* existing = find(path)) return existing;
    if (!contains(path)) return nullptr;
    std::error_code ec;
    if (!fs::exists(canonical_key(path), ec) || ec) return nullptr;
    return &add_file(path);
}

FocalMethod make_focal_method(const SourceFile& file, const Symbol& symbol) {
    FocalMethod focal;
    focal.symbol = symbol;
    focal.file_path = file.path();
    focal.source = file.slice(symbol.loc);
    focal.language_id = file.language_id();
    return focal;
}

}  // namespace lspgen::core
