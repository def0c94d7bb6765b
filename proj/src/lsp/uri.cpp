#include "lspgen/lsp/uri.hpp"

#include <cctype>

#include "lspgen/lsp/protocol_error.hpp"

namespace lspgen::lsp {
namespace {

bool unreserved(unsigned char c) {
    return std::isalnum(c) != 0 || c == '-' || c == '.' || c == '_' || c == '~' || c == '/';
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return 10 + c - 'a';
    if (c >= 'A' && c <= 'F') return 10 + c - 'A';
    return -1;
}

}  // namespace

std::string path_to_uri(const std::filesystem::path& path) {
    const std::string p = path.lexically_normal().string();
    std::string out = "file://";
    static const char* hex = "0123456789ABCDEF";
    for (unsigned char c : p) {
        if (unreserved(c)) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::filesystem::path uri_to_path(const std::string& uri) {
    constexpr std::string_view kScheme = "file://";
    if (uri.rfind(kScheme, 0) != 0) {
        throw ProtocolError("unsupported URI scheme: " + uri, uri);
    }
    std::string decoded;
    decoded.reserve(uri.size());
    for (std::size_t i = kScheme.size(); i < uri.size(); ++i) {
        if (uri[i] == '%' && i + 2 < uri.size()) {
            const int hi = hex_value(uri[i + 1]);
            const int lo = hex_value(uri[i + 2]);
            if (hi >= 0 && lo >= 0) {
                decoded.push_back(static_cast<char>((hi << 4) | lo));
                i += 2;
                continue;
            }
        }
        decoded.push_back(uri[i]);
    }
    // "file://host/path" is not produced by the servers we target; treat a
    // non-empty authority as part of the error message rather than guessing.
    if (!decoded.empty() && decoded.front() != '/') {
        throw ProtocolError("file URI with authority is unsupported: " + uri, uri);
    }
    return std::filesystem::path(decoded);
}

}  // namespace lspgen::lsp
