// Scripted language server: replays canned capabilities, symbols, tokens,
// definitions, references, and diagnostics from a JSON script. Used by the
// client unit tests and the repair-loop acceptance checks, where behavior
// must be exact and repeatable.
//
// Usage: mock-lsp-server <script.json>

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "lspgen/lsp/framing.hpp"
#include "lspgen/lsp/uri.hpp"

using json = nlohmann::json;
using namespace lspgen;

namespace {

struct DocState {
    int version = 0;
    int event_count = 0;  // didOpen + didChange
};

struct Mock {
    json script;
    std::map<std::string, DocState> docs;
    int did_open = 0;
    int did_change = 0;

    const json* file_entry(const std::string& path) const {
        if (!script.contains("files")) return nullptr;
        for (const auto& [key, value] : script["files"].items()) {
            if (path.size() >= key.size() &&
                path.compare(path.size() - key.size(), key.size(), key) == 0) {
                return &value;
            }
        }
        return nullptr;
    }

    const json* diagnostics_script(const std::string& path) const {
        if (script.contains("diagnostics")) {
            for (const auto& [key, value] : script["diagnostics"].items()) {
                if (path.size() >= key.size() &&
                    path.compare(path.size() - key.size(), key.size(), key) == 0) {
                    return &value;
                }
            }
        }
        if (script.contains("default_diagnostics")) return &script["default_diagnostics"];
        return nullptr;
    }
};

void send(const json& message) {
    const std::string framed = lsp::frame_message(message.dump());
    std::fwrite(framed.data(), 1, framed.size(), stdout);
    std::fflush(stdout);
}

std::string position_key(const json& position) {
    return std::to_string(position.value("line", -1)) + ":" +
           std::to_string(position.value("character", -1));
}

}  // namespace

int main(int argc, char** argv) {
    Mock mock;
    if (argc > 1) {
        std::ifstream in(argv[1]);
        if (!in) {
            std::fprintf(stderr, "mock-lsp-server: cannot read script %s\n", argv[1]);
            return 2;
        }
        in >> mock.script;
    } else {
        mock.script = json::object();
    }

    const bool ignore_shutdown = mock.script.value("ignore_shutdown", false);

    lsp::FrameReader reader;
    for (;;) {
        json message;
        {
            std::optional<std::string> payload;
            while (!(payload = reader.next())) {
                char buffer[8192];
                const ssize_t n = ::read(0, buffer, sizeof buffer);
                if (n <= 0) return 0;
                reader.feed(std::string_view(buffer, static_cast<std::size_t>(n)));
            }
            message = json::parse(*payload, nullptr, false);
            if (message.is_discarded()) continue;
        }

        const std::string method = message.value("method", std::string{});
        const json params = message.value("params", json::object());
        const bool is_request = message.contains("id");
        const auto reply = [&](json result) {
            send({{"jsonrpc", "2.0"}, {"id", message["id"]}, {"result", std::move(result)}});
        };

        if (method == "initialize") {
            if (mock.script.value("no_init_response", false)) continue;  // hang the handshake
            if (mock.script.value("stray_response_on_init", false)) {
                // A response no one asked for: clients must drop it, not die.
                send({{"jsonrpc", "2.0"}, {"id", 999999}, {"result", "stray"}});
            }
            const json caps_wanted = mock.script.value("capabilities", json::object());
            const auto enabled = [&](const char* key) { return caps_wanted.value(key, true); };
            json caps;
            caps["textDocumentSync"] = 1;
            if (enabled("documentSymbol")) caps["documentSymbolProvider"] = true;
            if (enabled("semanticTokens")) {
                caps["semanticTokensProvider"] = {
                    {"legend",
                     {{"tokenTypes", mock.script.value("legend", json::array({"keyword"}))},
                      {"tokenModifiers", json::array()}}},
                    {"full", true}};
            }
            if (enabled("definition")) caps["definitionProvider"] = true;
            if (enabled("references")) caps["referencesProvider"] = true;
            reply({{"capabilities", caps}, {"serverInfo", {{"name", "mock-lsp-server"}}}});
            continue;
        }
        if (method == "initialized") continue;
        if (method == "shutdown") {
            if (!ignore_shutdown) reply(nullptr);
            continue;
        }
        if (method == "exit") {
            if (!ignore_shutdown) return 0;
            continue;  // hang: forces the client's kill path
        }

        if (method == "textDocument/didOpen" || method == "textDocument/didChange") {
            const auto& doc = params.at("textDocument");
            const std::string path = lsp::uri_to_path(doc.at("uri").get<std::string>()).string();
            DocState& state = mock.docs[path];
            state.version = doc.value("version", state.version + 1);
            if (method == "textDocument/didOpen") {
                ++mock.did_open;
            } else {
                ++mock.did_change;
            }
            const json* script = mock.diagnostics_script(path);
            const int event = state.event_count++;
            if (script != nullptr && script->is_array() && !script->empty()) {
                const auto& publications =
                    (*script)[std::min<std::size_t>(static_cast<std::size_t>(event),
                                                    script->size() - 1)];
                for (const auto& pub : publications) {
                    if (!pub.is_object()) continue;
                    json out_params;
                    out_params["uri"] = doc.at("uri");
                    out_params["diagnostics"] = pub.value("diagnostics", json::array());
                    if (pub.contains("version")) {
                        out_params["version"] = pub["version"];
                    } else if (pub.contains("version_delta")) {
                        out_params["version"] =
                            state.version + pub["version_delta"].get<int>();
                    }
                    send({{"jsonrpc", "2.0"},
                          {"method", "textDocument/publishDiagnostics"},
                          {"params", out_params}});
                }
            }
            continue;
        }

        if (!is_request) continue;

        if (method == "mock/stats") {
            reply({{"didOpen", mock.did_open}, {"didChange", mock.did_change}});
            continue;
        }

        const auto doc_path = [&]() -> std::string {
            if (params.contains("textDocument")) {
                return lsp::uri_to_path(params["textDocument"].value("uri", std::string{}))
                    .string();
            }
            return {};
        };

        if (method == "textDocument/documentSymbol") {
            const json* entry = mock.file_entry(doc_path());
            reply(entry != nullptr ? entry->value("symbols", json::array()) : json::array());
            continue;
        }
        if (method == "textDocument/semanticTokens/full") {
            const json* entry = mock.file_entry(doc_path());
            reply({{"data", entry != nullptr ? entry->value("tokens", json::array())
                                             : json::array()}});
            continue;
        }
        if (method == "textDocument/definition" || method == "textDocument/references") {
            const json* entry = mock.file_entry(doc_path());
            const char* table = method == "textDocument/definition" ? "definitions" : "references";
            json result = json::array();
            if (entry != nullptr && entry->contains(table)) {
                const auto key = position_key(params.value("position", json::object()));
                if ((*entry)[table].contains(key)) result = (*entry)[table][key];
            }
            reply(result);
            continue;
        }

        send({{"jsonrpc", "2.0"},
              {"id", message["id"]},
              {"error", {{"code", -32601}, {"message", "unscripted method: " + method}}}});
    }
}
