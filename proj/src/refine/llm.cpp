#include "lspgen/refine/llm.hpp"

#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "lspgen/core/log.hpp"

namespace lspgen::refine {

using nlohmann::json;

namespace {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw LlmError("malformed endpoint URL: " + url);
    const auto path_begin = url.find('/', scheme_end + 3);
    if (path_begin == std::string::npos) return {url, "/"};
    return {url.substr(0, path_begin), url.substr(path_begin)};
}

}  // namespace

HttpLlmClient::HttpLlmClient(LlmConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) throw LlmError("LLM endpoint is not configured");
    split_url(config_.endpoint);  // validate early
}

LlmResponse HttpLlmClient::chat(const std::vector<Message>& messages) {
    const SplitUrl url = split_url(config_.endpoint);

    json body;
    body["model"] = config_.model;
    body["messages"] = json::array();
    for (const auto& m : messages) {
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }
    if (config_.temperature) body["temperature"] = *config_.temperature;
    if (config_.top_p) body["top_p"] = *config_.top_p;

    httplib::Headers headers;
    const char* key = config_.api_key_env.empty() ? nullptr : std::getenv(config_.api_key_env.c_str());
    if (key != nullptr && *key != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        httplib::Client client(url.base);
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(
            config_.request_timeout));
        client.set_connection_timeout(std::chrono::seconds(10));

        auto res = client.Post(url.path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            log::warn("LLM request attempt " + std::to_string(attempt + 1) + " failed: " +
                      last_error);
            continue;
        }
        if (res->status == 401 || res->status == 403) {
            throw AuthError("LLM endpoint rejected credentials (HTTP " +
                                std::to_string(res->status) + "); set " + config_.api_key_env,
                            config_.api_key_env);
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
            continue;
        }
        try {
            const json reply = json::parse(res->body);
            LlmResponse out;
            out.content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
            if (reply.contains("usage")) {
                out.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
                out.usage.completion_tokens = reply["usage"].value("completion_tokens", 0);
            }
            return out;
        } catch (const json::exception& e) {
            throw LlmError(std::string("unparseable LLM response: ") + e.what());
        }
    }
    throw LlmError("LLM request failed after " + std::to_string(config_.max_retries + 1) +
                   " attempts: " + last_error);
}

ScriptedLlmClient::ScriptedLlmClient(std::vector<LlmResponse> responses)
    : responses_(std::move(responses)) {
    if (responses_.empty()) throw LlmError("scripted LLM needs at least one response");
}

std::unique_ptr<ScriptedLlmClient> ScriptedLlmClient::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LlmError("cannot read LLM script: " + path);
    std::vector<LlmResponse> responses;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        LlmResponse r;
        try {
            const json j = json::parse(line);
            if (j.is_string()) {
                r.content = j.get<std::string>();
            } else {
                r.content = j.value("content", std::string{});
                r.usage.prompt_tokens = j.value("prompt_tokens", 0);
                r.usage.completion_tokens = j.value("completion_tokens", 0);
            }
        } catch (const json::exception&) {
            r.content = line;  // plain text line
        }
        responses.push_back(std::move(r));
    }
    return std::make_unique<ScriptedLlmClient>(std::move(responses));
}

LlmResponse ScriptedLlmClient::chat(const std::vector<Message>&) {
    std::lock_guard lock(mutex_);
    const LlmResponse& r = responses_[static_cast<std::size_t>(calls_) % responses_.size()];
    ++calls_;
    return r;
}

std::unique_ptr<LlmClient> make_llm_client(const LlmConfig& config) {
    if (config.endpoint.rfind("file://", 0) == 0) {
        return ScriptedLlmClient::from_file(config.endpoint.substr(7));
    }
    return std::make_unique<HttpLlmClient>(config);
}

GeneratedCode generate(const std::string& system, const std::string& user, LlmClient& llm) {
    const LlmResponse response = llm.chat({{"system", system}, {"user", user}});
    return GeneratedCode{extract_code_block(response.content), response.usage};
}

std::string extract_code_block(const std::string& response) {
    const auto open = response.find("```");
    if (open == std::string::npos) {
        std::string trimmed = response;
        const auto begin = trimmed.find_first_not_of(" \t\r\n");
        const auto end = trimmed.find_last_not_of(" \t\r\n");
        if (begin == std::string::npos) throw GenerationError("empty LLM response");
        trimmed = trimmed.substr(begin, end - begin + 1);
        return trimmed;
    }
    auto body_begin = response.find('\n', open);
    if (body_begin == std::string::npos) throw GenerationError("unterminated code fence");
    ++body_begin;
    const auto close = response.find("```", body_begin);
    const std::string code = response.substr(
        body_begin, close == std::string::npos ? std::string::npos : close - body_begin);
    if (code.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw GenerationError("model returned an empty code block");
    }
    return code;
}

}  // namespace lspgen::refine
