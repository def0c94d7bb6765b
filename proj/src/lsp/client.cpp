#include "lspgen/lsp/client.hpp"

#include <unistd.h>

#include <algorithm>

#include "lspgen/core/error.hpp"
#include "lspgen/core/log.hpp"
#include "lspgen/lsp/protocol_error.hpp"
#include "lspgen/lsp/semantic_tokens.hpp"
#include "lspgen/lsp/uri.hpp"

namespace lspgen::lsp {

using nlohmann::json;

namespace {

core::Position parse_position(const json& j) {
    return core::Position{j.at("line").get<int>(), j.at("character").get<int>()};
}

core::Location parse_range(const json& range, const std::string& file) {
    return core::Location{file, parse_position(range.at("start")), parse_position(range.at("end"))};
}

core::Location parse_location(const json& j) {
    const auto path = uri_to_path(j.at("uri").get<std::string>());
    return parse_range(j.at("range"), path.string());
}

json position_json(core::Position p) {
    return json{{"line", p.line}, {"character", p.character}};
}

core::Symbol parse_document_symbol(const json& item, const std::string& file) {
    core::Symbol s;
    s.name = item.at("name").get<std::string>();
    s.kind = core::symbol_kind_from_lsp(item.value("kind", 0));
    s.loc = parse_range(item.at("range"), file);
    if (item.contains("children")) {
        for (const auto& child : item.at("children")) {
            s.children.push_back(parse_document_symbol(child, file));
        }
    }
    return s;
}

// Flat SymbolInformation lists carry no hierarchy; rebuild it by span
// containment so Definition-3-style children are always available.
std::vector<core::Symbol> nest_flat_symbols(std::vector<core::Symbol> flat) {
    std::stable_sort(flat.begin(), flat.end(), [](const core::Symbol& a, const core::Symbol& b) {
        if (a.loc.start != b.loc.start) return a.loc.start < b.loc.start;
        return b.loc.end < a.loc.end;  // wider span first
    });
    std::vector<core::Symbol> roots;
    std::vector<core::Symbol*> stack;
    for (auto& s : flat) {
        while (!stack.empty() && !core::contains(stack.back()->loc, s.loc)) stack.pop_back();
        core::Symbol* placed = nullptr;
        if (stack.empty()) {
            roots.push_back(std::move(s));
            placed = &roots.back();
        } else {
            stack.back()->children.push_back(std::move(s));
            placed = &stack.back()->children.back();
        }
        stack.push_back(placed);
    }
    return roots;
}

}  // namespace

std::unique_ptr<LspClient> LspClient::start(ServerConfig config, const core::Workspace& workspace) {
    if (config.command.empty()) throw ConfigError("server launch command is empty");
    if (config.request_timeout.count() <= 0 || config.diagnostics_wait.count() <= 0) {
        throw ConfigError("server timeouts must be positive");
    }

    auto client = std::unique_ptr<LspClient>(new LspClient());
    client->config_ = std::move(config);
    client->process_ = Process::spawn(client->config_.command);
    client->start_reader();

    const std::string root_uri = path_to_uri(workspace.root());
    json init_params = {
        {"processId", static_cast<int>(::getpid())},
        {"rootUri", root_uri},
        {"workspaceFolders",
         json::array({{{"uri", root_uri}, {"name", workspace.root().filename().string()}}})},
        {"initializationOptions", client->config_.initialization_options},
        {"capabilities",
         {{"textDocument",
           {{"documentSymbol", {{"hierarchicalDocumentSymbolSupport", true}}},
            {"semanticTokens",
             {{"requests", {{"full", true}}},
              {"formats", json::array({"relative"})},
              {"tokenModifiers", json::array()},
              {"tokenTypes", json::array()}}},
            {"publishDiagnostics", {{"versionSupport", true}}}}}}},
    };

    json init_result;
    try {
        init_result = client->request("initialize", std::move(init_params));
    } catch (const TimeoutError&) {
        client->process_.kill_now();
        client->state_.store(State::dead);
        throw TimeoutError("initialize handshake timed out for '" + client->config_.command[0] +
                           "'");
    }
    client->check_capabilities(init_result.value("capabilities", json::object()));
    client->notify("initialized", json::object());
    client->state_.store(State::ready);
    return client;
}

LspClient::~LspClient() {
    if (state_.load() != State::dead) {
        try {
            shutdown();
        } catch (...) {
        }
    }
    process_.kill_now();
    if (reader_.joinable()) reader_.join();
}

void LspClient::start_reader() {
    reader_ = std::thread([this] { reader_loop(); });
}

void LspClient::reader_loop() {
    FrameReader frames;
    for (;;) {
        const std::string chunk = process_.read_some();
        if (chunk.empty()) break;  // EOF: server went away
        frames.feed(chunk);
        try {
            while (auto payload = frames.next()) handle_payload(*payload);
        } catch (const std::exception& e) {
            log::error(std::string("dropping connection after framing error: ") + e.what());
            break;
        }
    }
    state_.store(State::dead);
    fail_all_pending("server connection closed");
    diag_cv_.notify_all();
}

void LspClient::handle_payload(const std::string& payload) {
    json message;
    try {
        message = json::parse(payload);
    } catch (const json::exception& e) {
        log::warn(std::string("undecodable frame dropped: ") + e.what());
        return;
    }

    const bool has_id = message.contains("id") && !message.at("id").is_null();
    const bool has_method = message.contains("method");

    if (has_id && !has_method) {  // response to one of our requests
        const auto id = message.at("id").get<std::int64_t>();
        Pending pending;
        {
            std::lock_guard lock(pending_mutex_);
            auto it = pending_.find(id);
            if (it == pending_.end()) {
                log::warn("response for unknown request id " + std::to_string(id) + " dropped");
                return;
            }
            pending = std::move(it->second);
            pending_.erase(it);
        }
        if (message.contains("error")) {
            const auto& err = message.at("error");
            pending.promise.set_exception(std::make_exception_ptr(ProtocolError(
                "server error " + std::to_string(err.value("code", 0)) + ": " +
                    err.value("message", std::string("unknown")),
                payload)));
        } else {
            pending.promise.set_value(message.value("result", json()));
        }
        return;
    }

    if (has_method && has_id) {  // server-to-client request: keep it unblocked
        const auto& method = message.at("method").get_ref<const std::string&>();
        json result;
        if (method == "workspace/configuration") {
            const auto n = message.contains("params") && message["params"].contains("items")
                               ? message["params"]["items"].size()
                               : 0;
            result = json::array();
            for (std::size_t i = 0; i < n; ++i) result.push_back(nullptr);
        }
        send_json({{"jsonrpc", "2.0"}, {"id", message.at("id")}, {"result", result}});
        return;
    }

    if (has_method) {  // notification
        const auto& method = message.at("method").get_ref<const std::string&>();
        if (method == "textDocument/publishDiagnostics") {
            handle_publish_diagnostics(message.value("params", json::object()));
        }
        return;
    }
}

void LspClient::handle_publish_diagnostics(const json& params) {
    Publication pub;
    std::string path;
    try {
        path = uri_to_path(params.at("uri").get<std::string>()).string();
        pub.version = params.value("version", static_cast<std::int64_t>(-1));
        const json items = params.value("diagnostics", json::array());
        for (const auto& d : items) {
            Diagnostic diag;
            diag.message = d.value("message", std::string{});
            diag.loc = parse_range(d.at("range"), path);
            diag.severity = static_cast<Diagnostic::Severity>(d.value("severity", 1));
            pub.items.push_back(std::move(diag));
        }
    } catch (const std::exception& e) {
        log::warn(std::string("malformed publishDiagnostics dropped: ") + e.what());
        return;
    }
    {
        std::lock_guard lock(diag_mutex_);
        pub.seq = ++diag_seq_;
        latest_diags_[path] = std::move(pub);
    }
    diag_cv_.notify_all();
}

void LspClient::send_json(const json& message) {
    const std::string framed = frame_message(message.dump());
    std::lock_guard lock(write_mutex_);
    if (!process_.write_all(framed)) {
        throw ProtocolError("write to server failed (process gone)");
    }
}

nlohmann::json LspClient::request(const std::string& method, json params) {
    const auto state = state_.load();
    if (state == State::dead || state == State::shutting_down) {
        throw StateError("request '" + method + "' on a " +
                         (state == State::dead ? std::string("dead") : std::string("closing")) +
                         " connection");
    }
    const std::int64_t id = next_id_.fetch_add(1);
    std::future<json> future;
    {
        std::lock_guard lock(pending_mutex_);
        future = pending_[id].promise.get_future();
    }
    send_json({{"jsonrpc", "2.0"}, {"id", id}, {"method", method}, {"params", std::move(params)}});
    const auto timeout = warmed_up_.load() ? config_.request_timeout : config_.warmup_timeout;
    if (future.wait_for(timeout) != std::future_status::ready) {
        bool removed_by_us = false;
        {
            std::lock_guard lock(pending_mutex_);
            removed_by_us = pending_.erase(id) == 1;
        }
        if (removed_by_us) {
            throw TimeoutError("request '" + method + "' timed out after " +
                               std::to_string(timeout.count()) + " ms");
        }
        // The reader extracted the entry concurrently; its value lands now.
    }
    return future.get();
}

void LspClient::notify(const std::string& method, json params) {
    send_json({{"jsonrpc", "2.0"}, {"method", method}, {"params", std::move(params)}});
}

void LspClient::fail_all_pending(const std::string& reason) {
    std::map<std::int64_t, Pending> orphans;
    {
        std::lock_guard lock(pending_mutex_);
        orphans.swap(pending_);
    }
    for (auto& [id, pending] : orphans) {
        (void)id;
        pending.promise.set_exception(std::make_exception_ptr(ProtocolError(reason)));
    }
}

void LspClient::check_capabilities(const json& capabilities) {
    const auto missing = [&](const char* key) {
        return !capabilities.contains(key) || capabilities.at(key).is_null() ||
               (capabilities.at(key).is_boolean() && !capabilities.at(key).get<bool>());
    };
    if (missing("documentSymbolProvider")) {
        throw CapabilityError("server does not provide document symbols (SYM)", "SYM");
    }
    if (missing("semanticTokensProvider")) {
        throw CapabilityError("server does not provide semantic tokens (TOK)", "TOK");
    }
    if (missing("definitionProvider")) {
        throw CapabilityError("server does not provide definitions (DEF)", "DEF");
    }
    if (missing("referencesProvider")) {
        throw CapabilityError("server does not provide references (REF)", "REF");
    }
    const auto& tokens = capabilities.at("semanticTokensProvider");
    if (tokens.is_object() && tokens.contains("legend")) {
        const json types = tokens.at("legend").value("tokenTypes", json::array());
        for (const auto& t : types) {
            token_legend_.push_back(t.get<std::string>());
        }
    }
    if (token_legend_.empty()) {
        throw CapabilityError("semantic tokens legend is empty (TOK)", "TOK");
    }
}

core::SourceFile* LspClient::open_file(const std::string& path) {
    auto it = open_docs_.find(path);
    return it == open_docs_.end() ? nullptr : &it->second;
}

void LspClient::open_document(const core::SourceFile& file) {
    if (state_.load() != State::ready) throw StateError("open_document on a non-ready connection");
    std::unique_lock lock(docs_mutex_);
    if (auto* doc = open_file(file.path())) {
        doc->set_text(file.text());
        const int version = doc->version();
        lock.unlock();
        notify("textDocument/didChange",
               {{"textDocument", {{"uri", path_to_uri(file.path())}, {"version", version}}},
                {"contentChanges", json::array({{{"text", file.text()}}})}});
        return;
    }
    open_docs_.emplace(file.path(),
                       core::SourceFile(file.path(), file.text(), file.language_id()));
    lock.unlock();
    notify("textDocument/didOpen", {{"textDocument",
                                     {{"uri", path_to_uri(file.path())},
                                      {"languageId", file.language_id()},
                                      {"version", 1},
                                      {"text", file.text()}}}});
}

bool LspClient::document_open(const std::string& path) const {
    std::lock_guard lock(docs_mutex_);
    return open_docs_.contains(path);
}

int LspClient::document_version(const std::string& path) const {
    std::lock_guard lock(docs_mutex_);
    auto it = open_docs_.find(path);
    return it == open_docs_.end() ? 0 : it->second.version();
}

std::vector<core::Symbol> LspClient::symbols(const std::string& path) {
    if (!document_open(path)) throw StateError("symbols() before open_document: " + path);
    json result = request("textDocument/documentSymbol",
                          {{"textDocument", {{"uri", path_to_uri(path)}}}});
    warmed_up_.store(true);
    if (result.is_null()) return {};
    try {
        std::vector<core::Symbol> roots;
        if (result.is_array() && !result.empty() && result.front().contains("location")) {
            std::vector<core::Symbol> flat;
            for (const auto& item : result) {
                core::Symbol s;
                s.name = item.at("name").get<std::string>();
                s.kind = core::symbol_kind_from_lsp(item.value("kind", 0));
                s.loc = parse_location(item.at("location"));
                flat.push_back(std::move(s));
            }
            roots = nest_flat_symbols(std::move(flat));
        } else {
            for (const auto& item : result) {
                roots.push_back(parse_document_symbol(item, path));
            }
        }
        core::normalize_children(roots);
        return roots;
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed documentSymbol response: ") + e.what(),
                            result.dump());
    }
}

std::vector<core::Token> LspClient::tokens(const core::Location& range) {
    if (!document_open(range.file)) throw StateError("tokens() before open_document: " + range.file);
    json result = request("textDocument/semanticTokens/full",
                          {{"textDocument", {{"uri", path_to_uri(range.file)}}}});
    warmed_up_.store(true);
    if (result.is_null()) return {};

    std::vector<std::int64_t> data;
    try {
        data = result.value("data", std::vector<std::int64_t>{});
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed semanticTokens response: ") + e.what(),
                            result.dump());
    }
    const auto raw = decode_semantic_tokens(data);

    std::vector<core::Token> out;
    {
        std::lock_guard lock(docs_mutex_);
        auto it = open_docs_.find(range.file);
        if (it == open_docs_.end()) throw StateError("document closed mid-request: " + range.file);
        auto all = resolve_semantic_tokens(raw, it->second, token_legend_);
        out.reserve(all.size());
        for (auto& t : all) {
            if (core::contains(range, t.loc)) out.push_back(std::move(t));
        }
    }
    return out;
}

namespace {

std::vector<core::Location> parse_definition_result(const json& result) {
    std::vector<core::Location> out;
    if (result.is_null()) return out;
    const auto parse_one = [&](const json& item) {
        if (item.contains("targetUri")) {  // LocationLink
            const auto path = uri_to_path(item.at("targetUri").get<std::string>());
            out.push_back(parse_range(item.at("targetRange"), path.string()));
        } else {
            out.push_back(parse_location(item));
        }
    };
    if (result.is_array()) {
        for (const auto& item : result) parse_one(item);
    } else {
        parse_one(result);
    }
    return out;
}

}  // namespace

std::vector<core::Location> LspClient::definition(const core::Location& loc) {
    if (!document_open(loc.file)) throw StateError("definition() before open_document: " + loc.file);
    json result = request("textDocument/definition",
                          {{"textDocument", {{"uri", path_to_uri(loc.file)}}},
                           {"position", position_json(loc.start)}});
    warmed_up_.store(true);
    try {
        return parse_definition_result(result);
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed definition response: ") + e.what(),
                            result.dump());
    }
}

std::vector<core::Location> LspClient::references(const core::Location& loc) {
    if (!document_open(loc.file)) throw StateError("references() before open_document: " + loc.file);
    json result = request("textDocument/references",
                          {{"textDocument", {{"uri", path_to_uri(loc.file)}}},
                           {"position", position_json(loc.start)},
                           {"context", {{"includeDeclaration", true}}}});
    warmed_up_.store(true);
    try {
        return parse_definition_result(result);
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed references response: ") + e.what(),
                            result.dump());
    }
}

DiagnosticReport LspClient::update_and_diagnose(const std::string& path,
                                                const std::string& new_text,
                                                const std::string& language_id) {
    if (state_.load() != State::ready) {
        throw StateError("update_and_diagnose on a non-ready connection");
    }

    std::uint64_t marker = 0;
    {
        std::lock_guard lock(diag_mutex_);
        marker = diag_seq_;
    }

    int version = 0;
    {
        std::unique_lock lock(docs_mutex_);
        if (auto* doc = open_file(path)) {
            doc->set_text(new_text);
            version = doc->version();
            lock.unlock();
            notify("textDocument/didChange",
                   {{"textDocument", {{"uri", path_to_uri(path)}, {"version", version}}},
                    {"contentChanges", json::array({{{"text", new_text}}})}});
        } else {
            open_docs_.emplace(path, core::SourceFile(path, new_text, language_id));
            version = 1;
            lock.unlock();
            notify("textDocument/didOpen", {{"textDocument",
                                             {{"uri", path_to_uri(path)},
                                              {"languageId", language_id},
                                              {"version", 1},
                                              {"text", new_text}}}});
        }
    }

    const auto deadline = std::chrono::steady_clock::now() + config_.diagnostics_wait;
    std::unique_lock lock(diag_mutex_);
    const auto matching = [&]() -> const Publication* {
        auto it = latest_diags_.find(path);
        if (it == latest_diags_.end()) return nullptr;
        const Publication& pub = it->second;
        if (pub.seq <= marker) return nullptr;  // stale: published before our change
        if (pub.version >= 0 && pub.version != version) return nullptr;
        return &pub;
    };

    const Publication* match = nullptr;
    while (!(match = matching())) {
        if (state_.load() == State::dead) return DiagnosticReport{false, {}};
        if (diag_cv_.wait_until(lock, deadline) == std::cv_status::timeout) {
            if ((match = matching())) break;
            return DiagnosticReport{false, {}};
        }
    }

    // Let immediately following re-publications (clear-then-report servers)
    // supersede the first match.
    for (;;) {
        const std::uint64_t seen = match->seq;
        const auto settle_deadline =
            std::chrono::steady_clock::now() + config_.diagnostics_settle;
        diag_cv_.wait_until(lock, settle_deadline, [&] {
            const Publication* now = matching();
            return now != nullptr && now->seq != seen;
        });
        const Publication* now = matching();
        if (now == nullptr || now->seq == seen) break;
        match = now;
    }
    return DiagnosticReport{true, match->items};
}

ShutdownResult LspClient::shutdown() {
    State expected = State::ready;
    if (state_.load() == State::dead) return ShutdownResult::clean;
    if (!state_.compare_exchange_strong(expected, State::shutting_down)) {
        if (expected == State::dead) return ShutdownResult::clean;
        // starting or already shutting down: fall through to the hard path
    }

    ShutdownResult result = ShutdownResult::clean;
    const std::int64_t id = next_id_.fetch_add(1);
    std::future<json> future;
    {
        std::lock_guard lock(pending_mutex_);
        future = pending_[id].promise.get_future();
    }
    bool sent = true;
    try {
        send_json({{"jsonrpc", "2.0"}, {"id", id}, {"method", "shutdown"}, {"params", nullptr}});
    } catch (const std::exception&) {
        sent = false;
    }
    if (sent && future.wait_for(config_.request_timeout) != std::future_status::ready) {
        result = ShutdownResult::degraded;
    }
    {
        std::lock_guard lock(pending_mutex_);
        pending_.erase(id);
    }
    try {
        send_json({{"jsonrpc", "2.0"}, {"method", "exit"}, {"params", nullptr}});
    } catch (const std::exception&) {
    }
    process_.close_stdin();

    if (!process_.wait_exit(std::chrono::milliseconds(2000))) {
        process_.kill_now();
        process_.wait_exit(std::chrono::milliseconds(2000));
        result = ShutdownResult::degraded;
    }
    state_.store(State::dead);
    fail_all_pending("connection shut down");
    if (reader_.joinable()) reader_.join();
    return result;
}

}  // namespace lspgen::lsp
