// mini-lsp-server: a small stdio language server for Python, Java, and Go
// fixtures. It performs genuine (if shallow) analysis — file outlines,
// semantic tokens, cross-file name resolution, and push diagnostics — so the
// pipeline can run end to end without external servers. ServerConfig can
// point at any production server instead.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lspgen/core/source_file.hpp"
#include "lspgen/core/symbol.hpp"
#include "lspgen/core/token.hpp"
#include "lspgen/lsp/framing.hpp"
#include "lspgen/lsp/semantic_tokens.hpp"
#include "lspgen/lsp/uri.hpp"
#include "lspgen/syntax/adapter.hpp"
#include "lspgen/syntax/lexer.hpp"
#include "lspgen/syntax/outline.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lspgen;

namespace {

const std::vector<std::string> kLegend = {
    "keyword", "identifier", "variable", "parameter", "function", "method", "property",
    "class",   "namespace",  "string",   "number",    "comment",  "regexp", "operator",
    "other",
};

int legend_index(core::TokenRole role) {
    const std::string name = core::token_role_to_lsp_type(role);
    for (std::size_t i = 0; i < kLegend.size(); ++i) {
        if (kLegend[i] == name) return static_cast<int>(i);
    }
    return static_cast<int>(kLegend.size() - 1);
}

const std::set<std::string>& builtins(const std::string& language_id) {
    static const std::set<std::string> python = {
        "print",     "len",       "range",     "int",        "str",        "float",
        "bool",      "list",      "dict",      "set",        "tuple",      "isinstance",
        "enumerate", "zip",       "abs",       "min",        "max",        "sum",
        "sorted",    "reversed",  "repr",      "hash",       "id",         "type",
        "super",     "object",    "Exception", "ValueError", "TypeError",  "KeyError",
        "IndexError", "RuntimeError", "StopIteration", "AttributeError",
        "NotImplementedError", "open", "getattr", "setattr", "hasattr",    "callable",
        "iter",      "next",      "format",    "any",        "all",        "round",
        "map",       "filter",    "frozenset", "bytes",      "bytearray",  "divmod",
        "staticmethod", "classmethod", "property", "vars",   "dir",        "issubclass",
        "chr",       "ord",       "pow",       "slice",      "complex",
    };
    static const std::set<std::string> go = {
        "len",   "cap",   "make",    "new",   "append", "copy",  "delete", "panic",
        "recover", "print", "println", "close", "complex", "real", "imag",  "error",
        "string", "int",  "int8",    "int16", "int32",  "int64", "uint",   "uint8",
        "uint16", "uint32", "uint64", "uintptr", "float32", "float64", "bool", "byte",
        "rune",  "any",   "min",     "max",   "clear",
    };
    static const std::set<std::string> none;
    if (language_id == "python") return python;
    if (language_id == "go") return go;
    return none;
}

struct FileEntry {
    core::SourceFile file;
    const syntax::LanguageAdapter* adapter = nullptr;
    std::vector<core::Symbol> symbols;
    std::vector<core::Token> tokens;
    std::unordered_set<std::string> imports;
    int version = 0;
};

struct Server {
    fs::path root;
    std::map<std::string, FileEntry> files;  // path -> entry
    bool saw_shutdown = false;

    void index_file(const std::string& path, std::string text, int version) {
        const auto* adapter = syntax::adapter_for_path(path);
        if (adapter == nullptr) return;
        FileEntry entry;
        entry.file = core::SourceFile(path, std::move(text), adapter->language_id);
        entry.adapter = adapter;
        entry.version = version;
        entry.imports = syntax::imported_module_names(entry.file, *adapter);
        const auto lexed = syntax::lex(entry.file.text(), adapter->lexical, entry.imports);
        entry.tokens = syntax::to_semantic_tokens(lexed, entry.file);
        entry.symbols = syntax::file_outline(entry.file, *adapter);
        files[path] = std::move(entry);
    }

    void scan_workspace() {
        if (root.empty() || !fs::exists(root)) return;
        const auto extensions = syntax::adapter_extension_map();
        auto options = fs::directory_options::skip_permission_denied;
        for (auto it = fs::recursive_directory_iterator(root, options);
             it != fs::recursive_directory_iterator(); ++it) {
            if (it->is_directory()) {
                const std::string name = it->path().filename().string();
                if ((!name.empty() && name.front() == '.') || name == "build" ||
                    name == "node_modules" || name == "__pycache__") {
                    it.disable_recursion_pending();
                }
                continue;
            }
            if (!it->is_regular_file()) continue;
            if (!extensions.contains(it->path().extension().string())) continue;
            std::FILE* f = std::fopen(it->path().c_str(), "rb");
            if (f == nullptr) continue;
            std::string text;
            char buffer[8192];
            std::size_t n;
            while ((n = std::fread(buffer, 1, sizeof buffer, f)) > 0) text.append(buffer, n);
            std::fclose(f);
            index_file(fs::weakly_canonical(it->path()).string(), std::move(text), 0);
        }
    }

    // All symbols (recursively) named `name`, with their defining file.
    std::vector<std::pair<const core::Symbol*, const FileEntry*>> find_named(
        const std::string& name) const {
        std::vector<std::pair<const core::Symbol*, const FileEntry*>> out;
        for (const auto& [path, entry] : files) {
            for (const auto* s : core::flatten(entry.symbols)) {
                if (s->name == name) out.emplace_back(s, &entry);
            }
        }
        return out;
    }

    std::set<std::string> known_names() const {
        std::set<std::string> names;
        for (const auto& [path, entry] : files) {
            for (const auto* s : core::flatten(entry.symbols)) names.insert(s->name);
        }
        return names;
    }

    json diagnostics_for(const FileEntry& entry) const {
        json items = json::array();
        const auto push = [&](const core::Location& loc, const std::string& message,
                              int severity) {
            items.push_back({{"range",
                              {{"start",
                                {{"line", loc.start.line}, {"character", loc.start.character}}},
                               {"end",
                                {{"line", loc.end.line}, {"character", loc.end.character}}}}},
                             {"message", message},
                             {"severity", severity},
                             {"source", "mini-lsp"}});
        };

        // Bracket balance.
        std::vector<std::pair<char, core::Location>> stack;
        const auto lexed = syntax::lex(entry.file.text(), entry.adapter->lexical);
        for (const auto& t : lexed) {
            if (t.kind != syntax::LexKind::Punct) continue;
            const char c = t.text.empty() ? '\0' : t.text[0];
            const auto loc = core::Location{entry.file.path(), entry.file.position_at(t.begin),
                                            entry.file.position_at(t.end)};
            if (c == '(' || c == '[' || c == '{') {
                stack.emplace_back(c, loc);
            } else if (c == ')' || c == ']' || c == '}') {
                const char open = c == ')' ? '(' : c == ']' ? '[' : '{';
                if (stack.empty() || stack.back().first != open) {
                    push(loc, std::string("syntax error: unmatched '") + c + "'", 1);
                    return json{{"items", items}};  // cascade would be noise
                }
                stack.pop_back();
            }
        }
        if (!stack.empty()) {
            push(stack.back().second,
                 std::string("syntax error: unclosed '") + stack.back().first + "'", 1);
            return json{{"items", items}};
        }

        // Same-file duplicate callable definitions.
        std::map<std::string, int> counts;
        for (const auto* s : core::flatten(entry.symbols)) {
            if (s->is_callable()) counts[s->name] += 1;
        }
        for (const auto* s : core::flatten(entry.symbols)) {
            if (!s->is_callable() || counts[s->name] < 2) continue;
            counts[s->name] = 0;  // report once
            if (entry.adapter->language_id == "go") {
                push(s->loc, s->name + " redeclared in this block", 1);
            } else if (entry.adapter->language_id == "python") {
                push(s->loc, "redefinition of '" + s->name + "'", 1);
            } else {
                push(s->loc, "Duplicate method " + s->name, 1);
            }
        }

        // Undefined call-like names (python/go only; java resolution is too
        // shallow here to judge).
        if (entry.adapter->language_id != "java") {
            const auto known = known_names();
            std::set<std::string> reported;
            for (const auto& t : entry.tokens) {
                if (t.role != core::TokenRole::Function) continue;  // call-like, not dotted
                if (builtins(entry.adapter->language_id).contains(t.lex)) continue;
                if (entry.imports.contains(t.lex)) continue;
                if (known.contains(t.lex)) continue;
                if (!reported.insert(t.lex).second) continue;
                if (entry.adapter->language_id == "go") {
                    push(t.loc, "undefined: " + t.lex, 1);
                } else {
                    push(t.loc, "name '" + t.lex + "' is not defined", 1);
                }
            }
        }

        // Go: imported and not used.
        if (entry.adapter->language_id == "go") {
            for (const auto& module : entry.imports) {
                bool used = false;
                for (const auto& t : entry.tokens) {
                    if (t.role == core::TokenRole::String || t.role == core::TokenRole::Comment) {
                        continue;
                    }
                    if (t.lex == module) {
                        used = true;
                        break;
                    }
                }
                // The import line itself mentions the module only inside the
                // quoted path, which lexes as a string, so usage means a real
                // reference elsewhere.
                if (!used) {
                    push(core::Location{entry.file.path(), {0, 0}, {0, 1}},
                         "imported and not used: \"" + module + "\"", 1);
                }
            }
        }
        return json{{"items", items}};
    }
};

json range_json(const core::Location& loc) {
    return {{"start", {{"line", loc.start.line}, {"character", loc.start.character}}},
            {"end", {{"line", loc.end.line}, {"character", loc.end.character}}}};
}

json symbol_json(const core::Symbol& s) {
    json j;
    j["name"] = s.name;
    j["kind"] = core::symbol_kind_to_lsp(s.kind);
    j["range"] = range_json(s.loc);
    j["selectionRange"] = range_json(s.loc);
    j["children"] = json::array();
    for (const auto& c : s.children) j["children"].push_back(symbol_json(c));
    return j;
}

class Stdio {
public:
    void send(const json& message) {
        const std::string framed = lsp::frame_message(message.dump());
        std::fwrite(framed.data(), 1, framed.size(), stdout);
        std::fflush(stdout);
    }

    std::optional<json> receive() {
        for (;;) {
            if (auto payload = reader_.next()) return json::parse(*payload, nullptr, false);
            char buffer[8192];
            const ssize_t n = ::read(0, buffer, sizeof buffer);
            if (n <= 0) return std::nullopt;
            reader_.feed(std::string_view(buffer, static_cast<std::size_t>(n)));
        }
    }

private:
    lsp::FrameReader reader_;
};

const core::Token* token_at(const FileEntry& entry, const core::Position& pos) {
    for (const auto& t : entry.tokens) {
        if (t.loc.start.line != pos.line) continue;
        if (pos.character >= t.loc.start.character && pos.character < t.loc.end.character) {
            return &t;
        }
    }
    return nullptr;
}

bool searchable(const core::Token& t) {
    switch (t.role) {
        case core::TokenRole::Variable:
        case core::TokenRole::Parameter:
        case core::TokenRole::Function:
        case core::TokenRole::Method:
        case core::TokenRole::Property:
        case core::TokenRole::Class:
        case core::TokenRole::Namespace:
        case core::TokenRole::Identifier:
            return true;
        default:
            return false;
    }
}

}  // namespace

int main() {
    Server server;
    Stdio io;

    for (;;) {
        auto message = io.receive();
        if (!message) break;
        if (message->is_discarded()) continue;
        const std::string method = message->value("method", std::string{});
        const json params = message->value("params", json::object());
        const bool is_request = message->contains("id");

        const auto reply = [&](json result) {
            io.send({{"jsonrpc", "2.0"}, {"id", (*message)["id"]}, {"result", std::move(result)}});
        };

        if (method == "initialize") {
            if (params.contains("rootUri") && params["rootUri"].is_string()) {
                server.root = lsp::uri_to_path(params["rootUri"].get<std::string>());
            }
            server.scan_workspace();
            reply({{"capabilities",
                    {{"textDocumentSync", 1},
                     {"documentSymbolProvider", true},
                     {"definitionProvider", true},
                     {"referencesProvider", true},
                     {"semanticTokensProvider",
                      {{"legend", {{"tokenTypes", kLegend}, {"tokenModifiers", json::array()}}},
                       {"full", true}}}}},
                   {"serverInfo", {{"name", "mini-lsp-server"}}}});
            continue;
        }
        if (method == "initialized") continue;
        if (method == "shutdown") {
            server.saw_shutdown = true;
            reply(nullptr);
            continue;
        }
        if (method == "exit") break;

        if (method == "textDocument/didOpen" || method == "textDocument/didChange") {
            const auto& doc = params.at("textDocument");
            const std::string path = lsp::uri_to_path(doc.at("uri").get<std::string>()).string();
            const int version = doc.value("version", 0);
            std::string text;
            if (method == "textDocument/didOpen") {
                text = doc.value("text", std::string{});
            } else {
                const auto& changes = params.at("contentChanges");
                if (!changes.empty()) text = changes.at(0).value("text", std::string{});
            }
            server.index_file(path, std::move(text), version);
            const auto it = server.files.find(path);
            if (it != server.files.end()) {
                json diags = server.diagnostics_for(it->second);
                io.send({{"jsonrpc", "2.0"},
                         {"method", "textDocument/publishDiagnostics"},
                         {"params",
                          {{"uri", lsp::path_to_uri(path)},
                           {"version", version},
                           {"diagnostics", diags["items"]}}}});
            }
            continue;
        }

        if (!is_request) continue;

        if (method == "textDocument/documentSymbol") {
            const std::string path =
                lsp::uri_to_path(params.at("textDocument").at("uri").get<std::string>()).string();
            const auto it = server.files.find(path);
            json result = json::array();
            if (it != server.files.end()) {
                for (const auto& s : it->second.symbols) result.push_back(symbol_json(s));
            }
            reply(result);
            continue;
        }

        if (method == "textDocument/semanticTokens/full") {
            const std::string path =
                lsp::uri_to_path(params.at("textDocument").at("uri").get<std::string>()).string();
            const auto it = server.files.find(path);
            json result;
            std::vector<lsp::RawSemanticToken> raw;
            if (it != server.files.end()) {
                for (const auto& t : it->second.tokens) {
                    lsp::RawSemanticToken r;
                    r.line = static_cast<std::uint32_t>(t.loc.start.line);
                    r.start = static_cast<std::uint32_t>(t.loc.start.character);
                    r.length =
                        static_cast<std::uint32_t>(t.loc.end.character - t.loc.start.character);
                    r.type_index = static_cast<std::uint32_t>(legend_index(t.role));
                    r.modifiers = 0;
                    raw.push_back(r);
                }
            }
            result["data"] = lsp::encode_semantic_tokens(raw);
            reply(result);
            continue;
        }

        if (method == "textDocument/definition" || method == "textDocument/references") {
            const std::string path =
                lsp::uri_to_path(params.at("textDocument").at("uri").get<std::string>()).string();
            const core::Position pos{params.at("position").at("line").get<int>(),
                                     params.at("position").at("character").get<int>()};
            const auto it = server.files.find(path);
            if (it == server.files.end()) {
                reply(json::array());
                continue;
            }
            const core::Token* token = token_at(it->second, pos);
            if (token == nullptr || !searchable(*token)) {
                reply(json::array());
                continue;
            }
            const auto definitions = server.find_named(token->lex);
            if (method == "textDocument/definition") {
                json result = json::array();
                // Same-file definitions first: the nearest plausible target.
                for (const auto& [symbol, entry] : definitions) {
                    if (entry->file.path() != path) continue;
                    result.push_back({{"uri", lsp::path_to_uri(symbol->loc.file)},
                                      {"range", range_json(symbol->loc)}});
                }
                for (const auto& [symbol, entry] : definitions) {
                    if (entry->file.path() == path) continue;
                    result.push_back({{"uri", lsp::path_to_uri(symbol->loc.file)},
                                      {"range", range_json(symbol->loc)}});
                }
                reply(result);
                continue;
            }
            // references: every token in the workspace sharing the lexeme,
            // provided it resolves at all.
            json result = json::array();
            if (!definitions.empty()) {
                for (const auto& [file_path, entry] : server.files) {
                    for (const auto& t : entry.tokens) {
                        if (!searchable(t)) continue;
                        if (t.lex != token->lex) continue;
                        result.push_back({{"uri", lsp::path_to_uri(file_path)},
                                          {"range", range_json(t.loc)}});
                    }
                }
            }
            reply(result);
            continue;
        }

        io.send({{"jsonrpc", "2.0"},
                 {"id", (*message)["id"]},
                 {"error", {{"code", -32601}, {"message", "method not found: " + method}}}});
    }
    return 0;
}
