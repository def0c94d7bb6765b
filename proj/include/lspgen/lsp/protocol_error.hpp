#pragma once

#include <string>

#include "lspgen/core/error.hpp"

namespace lspgen::lsp {

/// A malformed or unexpected payload from the server. Keeps the raw payload
/// for postmortems.
class ProtocolError : public Error {
public:
    ProtocolError(const std::string& message, std::string raw_payload = {})
        : Error(message), raw_payload(std::move(raw_payload)) {}

    std::string raw_payload;
};

class SpawnError : public Error {
public:
    using Error::Error;
};

class TimeoutError : public Error {
public:
    using Error::Error;
};

/// Server lacks a capability the pipeline needs; names the provider
/// (SYM, TOK, DEF, REF) that cannot be served.
class CapabilityError : public Error {
public:
    CapabilityError(const std::string& message, std::string provider)
        : Error(message), provider(std::move(provider)) {}

    std::string provider;
};

/// Operation attempted in the wrong connection state.
class StateError : public Error {
public:
    using Error::Error;
};

}  // namespace lspgen::lsp
