#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace lspgen::lsp {

/// Renders one base-protocol frame: "Content-Length: N\r\n\r\n" followed by
/// exactly N payload bytes. Servers reject anything looser.
std::string frame_message(std::string_view payload);

/// Incremental frame parser. Feed arbitrary byte chunks (split or merged
/// frames are fine) and pull complete payloads out.
class FrameReader {
public:
    void feed(std::string_view bytes);

    /// Next complete payload, if one is buffered.
    std::optional<std::string> next();

    /// Bytes currently buffered (diagnostics only).
    std::size_t buffered() const { return buffer_.size(); }

private:
    std::string buffer_;
};

}  // namespace lspgen::lsp
