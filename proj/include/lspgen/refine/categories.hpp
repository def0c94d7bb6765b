#pragma once

#include <string>
#include <vector>

#include "lspgen/lsp/client.hpp"

namespace lspgen::refine {

enum class ErrorCategory {
    Redeclaration,
    ImportResolution,
    MemberAccess,
    TypeMismatch,
    ConstructorCall,
    Syntax,
    UnhandledException,
    Unknown,
};

/// What a repair prompt needs to carry for an error of this kind.
enum class ContextNeed { workspace_level, symbol_level, none };

const char* to_string(ErrorCategory category);
const char* to_string(ContextNeed need);

/// Category -> context grouping. Redeclaration and import problems need the
/// workspace view; member/type/constructor problems need the symbol's own
/// context; syntax and unhandled-exception errors need none. Unknown gets
/// symbol-level context, the broadly useful default.
ContextNeed context_need(ErrorCategory category);

/// One user-extensible matching rule: case-insensitive substring.
struct MessagePattern {
    std::string substring;
    ErrorCategory category;
};

/// Built-in ordered pattern table for a language (first match wins).
const std::vector<MessagePattern>& builtin_patterns(const std::string& language_id);

/// Categorizes a diagnostic message. `extra` patterns run before the
/// built-in table so user configuration can override it.
ErrorCategory categorize(const std::string& message, const std::string& language_id,
                         const std::vector<MessagePattern>& extra = {});

inline ErrorCategory categorize(const lsp::Diagnostic& diagnostic,
                                const std::string& language_id,
                                const std::vector<MessagePattern>& extra = {}) {
    return categorize(diagnostic.message, language_id, extra);
}

}  // namespace lspgen::refine
