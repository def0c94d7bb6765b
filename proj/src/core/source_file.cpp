#include "lspgen/core/source_file.hpp"

#include <algorithm>

#include "lspgen/core/error.hpp"

namespace lspgen::core {
namespace {

// Length in bytes of the UTF-8 sequence starting at *p, clamped to `avail`.
// Malformed lead bytes are treated as single-byte characters.
std::size_t utf8_seq_len(unsigned char lead, std::size_t avail) {
    std::size_t n = 1;
    if (lead >= 0xF0) {
        n = 4;
    } else if (lead >= 0xE0) {
        n = 3;
    } else if (lead >= 0xC0) {
        n = 2;
    }
    return std::min(n, avail);
}

}  // namespace

std::size_t utf16_length(const char* begin, const char* end) {
    std::size_t units = 0;
    const char* p = begin;
    while (p < end) {
        const auto lead = static_cast<unsigned char>(*p);
        const std::size_t n = utf8_seq_len(lead, static_cast<std::size_t>(end - p));
        units += (n == 4) ? 2 : 1;  // astral plane needs a surrogate pair
        p += n;
    }
    return units;
}

std::size_t utf16_length(const std::string& text) {
    return utf16_length(text.data(), text.data() + text.size());
}

SourceFile::SourceFile(std::string path, std::string text, std::string language_id)
    : path_(std::move(path)), text_(std::move(text)), language_id_(std::move(language_id)) {
    rebuild_index();
}

void SourceFile::set_text(std::string text) {
    text_ = std::move(text);
    ++version_;
    rebuild_index();
}

void SourceFile::rebuild_index() {
    line_starts_.clear();
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
        if (text_[i] == '\n') line_starts_.push_back(i + 1);
    }
}

std::size_t SourceFile::line_start_offset(int line) const {
    if (line < 0 || static_cast<std::size_t>(line) >= line_starts_.size()) {
        throw RangeError("line " + std::to_string(line) + " out of range in " + path_, line, 0);
    }
    return line_starts_[static_cast<std::size_t>(line)];
}

std::string SourceFile::line_text(int line) const {
    const std::size_t begin = line_start_offset(line);
    std::size_t end = text_.size();
    if (static_cast<std::size_t>(line) + 1 < line_starts_.size()) {
        end = line_starts_[static_cast<std::size_t>(line) + 1] - 1;  // drop '\n'
    }
    return text_.substr(begin, end - begin);
}

std::size_t SourceFile::offset_at(Position pos) const {
    if (pos.line < 0 || pos.character < 0) {
        throw RangeError("negative position in " + path_, pos.line, pos.character);
    }
    if (static_cast<std::size_t>(pos.line) == line_starts_.size() && pos.character == 0) {
        return text_.size();
    }
    const std::size_t begin = line_start_offset(pos.line);
    std::size_t line_end = text_.size();
    if (static_cast<std::size_t>(pos.line) + 1 < line_starts_.size()) {
        line_end = line_starts_[static_cast<std::size_t>(pos.line) + 1] - 1;
    }

    std::size_t units = 0;
    std::size_t off = begin;
    while (units < static_cast<std::size_t>(pos.character)) {
        if (off >= line_end) {
            throw RangeError("column past end of line in " + path_, pos.line, pos.character);
        }
        const auto lead = static_cast<unsigned char>(text_[off]);
        const std::size_t n = utf8_seq_len(lead, line_end - off);
        units += (n == 4) ? 2 : 1;
        off += n;
    }
    if (units != static_cast<std::size_t>(pos.character)) {
        // Column landed inside a surrogate pair; report it as out of range.
        throw RangeError("column splits a surrogate pair in " + path_, pos.line, pos.character);
    }
    return off;
}

Position SourceFile::position_at(std::size_t offset) const {
    if (offset > text_.size()) {
        throw RangeError("offset " + std::to_string(offset) + " past end of " + path_, -1, -1);
    }
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    const auto line = static_cast<int>(std::distance(line_starts_.begin(), it)) - 1;
    const std::size_t begin = line_starts_[static_cast<std::size_t>(line)];
    const std::size_t units = utf16_length(text_.data() + begin, text_.data() + offset);
    return Position{line, static_cast<int>(units)};
}

std::string SourceFile::slice(const Location& loc) const {
    if (!loc.file.empty() && loc.file != path_) {
        throw LocationError("slice of '" + loc.file + "' requested from '" + path_ + "'");
    }
    if (loc.end < loc.start) {
        throw RangeError("inverted range in " + path_, loc.end.line, loc.end.character);
    }
    const std::size_t a = offset_at(loc.start);
    const std::size_t b = offset_at(loc.end);
    return text_.substr(a, b - a);
}

Location SourceFile::full_range() const {
    return Location{path_, Position{0, 0}, position_at(text_.size())};
}

}  // namespace lspgen::core
