#pragma once

#include <filesystem>
#include <string>

namespace lspgen::lsp {

/// file:// URI for an absolute path, percent-encoding reserved bytes.
std::string path_to_uri(const std::filesystem::path& path);

/// Filesystem path from a file:// URI. Throws ProtocolError on other schemes.
std::filesystem::path uri_to_path(const std::string& uri);

}  // namespace lspgen::lsp
