#pragma once

#include <compare>
#include <string>

namespace lspgen::core {

/// A point in a document: 0-based line, 0-based UTF-16 code-unit column.
/// This matches the LSP default position encoding; conversion to and from
/// byte offsets happens in SourceFile.
struct Position {
    int line = 0;
    int character = 0;

    auto operator<=>(const Position&) const = default;
};

/// A half-open-agnostic [start, end] range within one file. `file` is the
/// path as the producer reported it (workspace-relative or absolute).
struct Location {
    std::string file;
    Position start;
    Position end;

    bool operator==(const Location&) const = default;

    bool empty() const { return start == end; }
};

/// True iff `inner` lies within `outer`. Both must refer to the same file;
/// a mismatch is a caller bug and raises LocationError rather than
/// answering false.
bool contains(const Location& outer, const Location& inner);

/// Containment test for a single point (end-exclusive), same file rule as above.
bool contains(const Location& outer, const std::string& file, Position p);

/// True iff the two ranges share at least one position (same file required).
bool overlaps(const Location& a, const Location& b);

std::string to_string(Position p);
std::string to_string(const Location& loc);

}  // namespace lspgen::core
