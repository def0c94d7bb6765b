#include "lspgen/core/location.hpp"

#include "lspgen/core/error.hpp"

namespace lspgen::core {
namespace {

void require_same_file(const std::string& a, const std::string& b) {
    if (a != b) {
        throw LocationError("location arithmetic across files: '" + a + "' vs '" + b + "'");
    }
}

}  // namespace

bool contains(const Location& outer, const Location& inner) {
    require_same_file(outer.file, inner.file);
    return inner.start >= outer.start && inner.end <= outer.end;
}

bool contains(const Location& outer, const std::string& file, Position p) {
    require_same_file(outer.file, file);
    return p >= outer.start && p < outer.end;
}

bool overlaps(const Location& a, const Location& b) {
    require_same_file(a.file, b.file);
    // Ranges are end-exclusive on the wire; touching ranges share nothing.
    return a.start < b.end && b.start < a.end;
}

std::string to_string(Position p) {
    return std::to_string(p.line) + ":" + std::to_string(p.character);
}

std::string to_string(const Location& loc) {
    return loc.file + ":" + to_string(loc.start) + "-" + to_string(loc.end);
}

}  // namespace lspgen::core
