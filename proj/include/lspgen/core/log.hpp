#pragma once

#include <functional>
#include <string>

namespace lspgen::log {

enum class Level { debug, info, warn, error };

using Sink = std::function<void(Level, const std::string&)>;

/// Replaces the process-wide log sink. The default writes to stderr.
void set_sink(Sink sink);

void emit(Level level, const std::string& message);

inline void debug(const std::string& m) { emit(Level::debug, m); }
inline void info(const std::string& m) { emit(Level::info, m); }
inline void warn(const std::string& m) { emit(Level::warn, m); }
inline void error(const std::string& m) { emit(Level::error, m); }

}  // namespace lspgen::log
