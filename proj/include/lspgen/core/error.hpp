#pragma once

#include <stdexcept>
#include <string>

namespace lspgen {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Location arithmetic on mismatched files or malformed ranges.
class LocationError : public Error {
public:
    using Error::Error;
};

/// A position or range that falls outside the file's text.
class RangeError : public Error {
public:
    RangeError(const std::string& message, int line, int character)
        : Error(message), line(line), character(character) {}

    int line;
    int character;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace lspgen
