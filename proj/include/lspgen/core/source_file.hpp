#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lspgen/core/location.hpp"

namespace lspgen::core {

/// One document: UTF-8 text plus a line index that converts between byte
/// offsets and LSP positions (0-based line, UTF-16 code-unit column).
class SourceFile {
public:
    SourceFile() = default;
    SourceFile(std::string path, std::string text, std::string language_id = {});

    const std::string& path() const { return path_; }
    const std::string& text() const { return text_; }
    const std::string& language_id() const { return language_id_; }
    int version() const { return version_; }

    /// Full-document replacement; bumps the version.
    void set_text(std::string text);

    std::size_t line_count() const { return line_starts_.size(); }

    /// Byte offset of the first character of `line`.
    std::size_t line_start_offset(int line) const;

    /// Text of one line without its trailing newline.
    std::string line_text(int line) const;

    /// Byte offset for an LSP position. Throws RangeError when the position
    /// lies outside the text. The virtual position (line_count(), 0) maps to
    /// text.size() since some servers report document ends that way.
    std::size_t offset_at(Position pos) const;

    /// Inverse of offset_at. `offset` may equal text.size().
    Position position_at(std::size_t offset) const;

    /// Text covered by `loc`, which must refer to this file and be in range.
    std::string slice(const Location& loc) const;

    /// Whole-document location.
    Location full_range() const;

private:
    void rebuild_index();

    std::string path_;
    std::string text_;
    std::string language_id_;
    int version_ = 1;
    std::vector<std::size_t> line_starts_;
};

/// UTF-16 code units occupied by the UTF-8 bytes [begin, end).
std::size_t utf16_length(const char* begin, const char* end);
std::size_t utf16_length(const std::string& text);

}  // namespace lspgen::core
