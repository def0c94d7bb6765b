#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lspgen/core/error.hpp"

namespace lspgen::refine {

struct LlmConfig {
    std::string endpoint;  // chat-completions URL; file:// points at a scripted transcript
    std::string model;
    std::string api_key_env = "LSPGEN_API_KEY";
    std::optional<double> temperature;  // unset -> provider default
    std::optional<double> top_p;
    std::chrono::milliseconds request_timeout{120000};
    int max_retries = 2;
};

struct Message {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

struct Usage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;

    long long total() const { return prompt_tokens + completion_tokens; }
};

struct LlmResponse {
    std::string content;
    Usage usage;
};

class LlmError : public Error {
public:
    using Error::Error;
};

/// Authentication failure; names the environment variable to set.
class AuthError : public LlmError {
public:
    AuthError(const std::string& message, std::string env_var)
        : LlmError(message), env_var(std::move(env_var)) {}

    std::string env_var;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual LlmResponse chat(const std::vector<Message>& messages) = 0;
};

/// Talks to a chat-completions HTTP endpoint with bearer-token auth read
/// from the configured environment variable. Transport errors retry up to
/// the configured limit.
class HttpLlmClient : public LlmClient {
public:
    explicit HttpLlmClient(LlmConfig config);
    LlmResponse chat(const std::vector<Message>& messages) override;

private:
    LlmConfig config_;
};

/// Deterministic stand-in: replays a fixed response sequence, cycling when
/// exhausted. Also reads file:// transcript scripts (one JSON object or
/// bare string per line).
class ScriptedLlmClient : public LlmClient {
public:
    explicit ScriptedLlmClient(std::vector<LlmResponse> responses);
    static std::unique_ptr<ScriptedLlmClient> from_file(const std::string& path);

    LlmResponse chat(const std::vector<Message>& messages) override;
    int calls() const { return calls_; }

private:
    std::mutex mutex_;
    std::vector<LlmResponse> responses_;
    int calls_ = 0;
};

/// Picks the client implementation from the endpoint scheme.
std::unique_ptr<LlmClient> make_llm_client(const LlmConfig& config);

/// First fenced code block of a model reply (fence markers stripped); the
/// whole reply when no fence is present. Empty extraction is an error.
std::string extract_code_block(const std::string& response);

struct GeneratedCode {
    std::string code;
    Usage usage;
};

/// One generation call: sends the prompt as a chat completion, extracts the
/// code, and records token usage.
GeneratedCode generate(const std::string& system, const std::string& user, LlmClient& llm);

}  // namespace lspgen::refine
