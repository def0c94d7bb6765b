#include "lspgen/core/log.hpp"

#include <iostream>
#include <mutex>

namespace lspgen::log {
namespace {

std::mutex g_mutex;

Sink& sink_slot() {
    static Sink sink = [](Level level, const std::string& message) {
        const char* tag = "info";
        switch (level) {
            case Level::debug: tag = "debug"; break;
            case Level::info: tag = "info"; break;
            case Level::warn: tag = "warn"; break;
            case Level::error: tag = "error"; break;
        }
        std::cerr << "[lspgen:" << tag << "] " << message << "\n";
    };
    return sink;
}

}  // namespace

void set_sink(Sink sink) {
    std::lock_guard lock(g_mutex);
    sink_slot() = std::move(sink);
}

void emit(Level level, const std::string& message) {
    std::lock_guard lock(g_mutex);
    if (auto& sink = sink_slot()) sink(level, message);
}

}  // namespace lspgen::log
