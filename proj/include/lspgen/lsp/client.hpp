#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lspgen/core/source_file.hpp"
#include "lspgen/core/symbol.hpp"
#include "lspgen/core/token.hpp"
#include "lspgen/core/workspace.hpp"
#include "lspgen/lsp/framing.hpp"
#include "lspgen/lsp/process.hpp"

namespace lspgen::lsp {

struct ServerConfig {
    std::string language_id;
    std::vector<std::string> command;
    nlohmann::json initialization_options = nlohmann::json::object();
    std::chrono::milliseconds diagnostics_wait{2000};
    std::chrono::milliseconds diagnostics_settle{100};
    std::chrono::milliseconds request_timeout{15000};
    std::chrono::milliseconds warmup_timeout{60000};
};

struct Diagnostic {
    enum class Severity { error = 1, warning = 2, info = 3, hint = 4 };

    std::string message;
    core::Location loc;
    Severity severity = Severity::error;
};

/// Outcome of one diagnose pass. `reported == false` means the wait window
/// expired without the server publishing for the current version — which is
/// not the same thing as an empty diagnostic set.
struct DiagnosticReport {
    bool reported = false;
    std::vector<Diagnostic> items;

    bool has_errors() const {
        for (const auto& d : items) {
            if (d.severity == Diagnostic::Severity::error) return true;
        }
        return false;
    }
};

enum class ShutdownResult { clean, degraded };

/// One supervised language-server connection over stdio. Thread-safe: a
/// single writer serializes outgoing frames and a single reader dispatches
/// responses; multiple requests may be in flight.
class LspClient {
public:
    enum class State { starting, ready, shutting_down, dead };

    /// Spawns the server and completes the initialize/initialized handshake.
    /// Verifies the four providers this pipeline needs (SYM, TOK, DEF, REF)
    /// and throws CapabilityError naming the first missing one.
    static std::unique_ptr<LspClient> start(ServerConfig config, const core::Workspace& workspace);

    ~LspClient();

    LspClient(const LspClient&) = delete;
    LspClient& operator=(const LspClient&) = delete;

    State state() const { return state_.load(); }
    const ServerConfig& config() const { return config_; }
    const std::vector<std::string>& token_legend() const { return token_legend_; }

    /// didOpen with full text; re-opening an open path becomes a full-text
    /// didChange with a bumped version.
    void open_document(const core::SourceFile& file);

    bool document_open(const std::string& path) const;
    int document_version(const std::string& path) const;

    /// SYM: top-level symbols of the file with children attached.
    std::vector<core::Symbol> symbols(const std::string& path);

    /// TOK: ordered tokens whose spans fall inside `range`.
    std::vector<core::Token> tokens(const core::Location& range);

    /// DEF: definition locations for the token at `loc`'s start.
    std::vector<core::Location> definition(const core::Location& loc);

    /// REF: reference locations (declaration included) for the token at
    /// `loc`'s start.
    std::vector<core::Location> references(const core::Location& loc);

    /// Pushes new full text (didOpen if the path is new) and waits up to the
    /// configured window for diagnostics matching the new version.
    DiagnosticReport update_and_diagnose(const std::string& path, const std::string& new_text,
                                         const std::string& language_id = {});

    /// shutdown request + exit notification; escalates to SIGKILL after the
    /// request timeout. Idempotent.
    ShutdownResult shutdown();

    /// Raw request escape hatch (used by tests).
    nlohmann::json request(const std::string& method, nlohmann::json params);

    void notify(const std::string& method, nlohmann::json params);

private:
    LspClient() = default;

    void start_reader();
    void reader_loop();
    void handle_payload(const std::string& payload);
    void handle_publish_diagnostics(const nlohmann::json& params);
    void send_json(const nlohmann::json& message);
    void fail_all_pending(const std::string& reason);
    void check_capabilities(const nlohmann::json& capabilities);

    core::SourceFile* open_file(const std::string& path);

    ServerConfig config_;
    Process process_;
    std::thread reader_;
    std::atomic<State> state_{State::starting};

    std::mutex write_mutex_;
    std::atomic<std::int64_t> next_id_{1};
    std::atomic<bool> warmed_up_{false};

    struct Pending {
        std::promise<nlohmann::json> promise;
    };
    std::mutex pending_mutex_;
    std::map<std::int64_t, Pending> pending_;

    mutable std::mutex docs_mutex_;
    std::map<std::string, core::SourceFile> open_docs_;  // canonical path -> latest text

    struct Publication {
        std::int64_t version = -1;  // -1 when the server omitted it
        std::uint64_t seq = 0;
        std::vector<Diagnostic> items;
    };
    std::mutex diag_mutex_;
    std::condition_variable diag_cv_;
    std::uint64_t diag_seq_ = 0;
    std::map<std::string, Publication> latest_diags_;  // canonical path -> last publication

    std::vector<std::string> token_legend_;
};

}  // namespace lspgen::lsp
