#include "lspgen/refine/categories.hpp"

#include <algorithm>
#include <cctype>

namespace lspgen::refine {
namespace {

std::string lowered(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<MessagePattern> common_patterns() {
    using C = ErrorCategory;
    return {
        // Order matters: more specific phrasings come before generic ones.
        {"imported and not used", C::ImportResolution},
        {"redeclared in this block", C::Redeclaration},
        {"unreported exception", C::UnhandledException},
        {"must be caught or declared", C::UnhandledException},
        {"unhandled exception", C::UnhandledException},
        {"no matching constructor", C::ConstructorCall},
        {"constructor", C::ConstructorCall},
        {"unexpected keyword argument", C::ConstructorCall},
        {"takes no arguments", C::ConstructorCall},
        {"cannot instantiate", C::ConstructorCall},
        {"incompatible types", C::TypeMismatch},
        {"type mismatch", C::TypeMismatch},
        {"cannot convert", C::TypeMismatch},
        {"is not assignable", C::TypeMismatch},
        {"cannot use", C::TypeMismatch},
        {"expected type", C::TypeMismatch},
        {"bad operand type", C::TypeMismatch},
        {"duplicate", C::Redeclaration},
        {"already declared", C::Redeclaration},
        {"already defined", C::Redeclaration},
        {"redeclared", C::Redeclaration},
        {"redefinition", C::Redeclaration},
        {"multiple definition", C::Redeclaration},
        {"shadows declaration", C::Redeclaration},
        {"no module named", C::ImportResolution},
        {"cannot find module", C::ImportResolution},
        {"cannot find package", C::ImportResolution},
        {"does not exist on package", C::ImportResolution},
        {"package does not exist", C::ImportResolution},
        {"could not import", C::ImportResolution},
        {"unresolved import", C::ImportResolution},
        {"unused import", C::ImportResolution},
        {"import error", C::ImportResolution},
        {"has no attribute", C::MemberAccess},
        {"has no field or method", C::MemberAccess},
        {"is not a member", C::MemberAccess},
        {"cannot be resolved or is not a field", C::MemberAccess},
        {"cannot be resolved to a variable", C::MemberAccess},
        {"cannot be resolved", C::MemberAccess},
        {"is not defined", C::MemberAccess},
        {"undefined:", C::MemberAccess},
        {"undefined variable", C::MemberAccess},
        {"undefined name", C::MemberAccess},
        {"undeclared name", C::MemberAccess},
        {"unknown method", C::MemberAccess},
        {"invalid syntax", C::Syntax},
        {"syntax error", C::Syntax},
        {"unexpected token", C::Syntax},
        {"unexpected indent", C::Syntax},
        {"unexpected eof", C::Syntax},
        {"expected ", C::Syntax},
        {"unterminated", C::Syntax},
        {"unbalanced", C::Syntax},
        {"unmatched", C::Syntax},
        {"missing ';'", C::Syntax},
        {"illegal character", C::Syntax},
    };
}

std::vector<MessagePattern> language_patterns(const std::string& language_id) {
    using C = ErrorCategory;
    if (language_id == "python") {
        return {
            {"name '", C::MemberAccess},  // "name 'x' is not defined" comes through either way
            {"positional argument", C::ConstructorCall},
            {"unindent does not match", C::Syntax},
        };
    }
    if (language_id == "java") {
        return {
            {"class, interface, or enum expected", C::Syntax},
            {"incompatible bounds", C::TypeMismatch},
            {"method does not override", C::MemberAccess},
        };
    }
    if (language_id == "go") {
        return {
            {"missing return", C::Syntax},
            {"not enough arguments", C::TypeMismatch},
            {"too many arguments", C::TypeMismatch},
        };
    }
    return {};
}

}  // namespace

const char* to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Redeclaration: return "Redeclaration";
        case ErrorCategory::ImportResolution: return "ImportResolution";
        case ErrorCategory::MemberAccess: return "MemberAccess";
        case ErrorCategory::TypeMismatch: return "TypeMismatch";
        case ErrorCategory::ConstructorCall: return "ConstructorCall";
        case ErrorCategory::Syntax: return "Syntax";
        case ErrorCategory::UnhandledException: return "UnhandledException";
        case ErrorCategory::Unknown: return "Unknown";
    }
    return "Unknown";
}

const char* to_string(ContextNeed need) {
    switch (need) {
        case ContextNeed::workspace_level: return "workspace";
        case ContextNeed::symbol_level: return "symbol";
        case ContextNeed::none: return "none";
    }
    return "none";
}

ContextNeed context_need(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Redeclaration:
        case ErrorCategory::ImportResolution:
            return ContextNeed::workspace_level;
        case ErrorCategory::MemberAccess:
        case ErrorCategory::TypeMismatch:
        case ErrorCategory::ConstructorCall:
        case ErrorCategory::Unknown:
            return ContextNeed::symbol_level;
        case ErrorCategory::Syntax:
        case ErrorCategory::UnhandledException:
            return ContextNeed::none;
    }
    return ContextNeed::symbol_level;
}

const std::vector<MessagePattern>& builtin_patterns(const std::string& language_id) {
    static const auto build = [](const std::string& lang) {
        auto table = language_patterns(lang);
        auto common = common_patterns();
        table.insert(table.end(), common.begin(), common.end());
        for (auto& p : table) p.substring = lowered(p.substring);
        return table;
    };
    static const std::vector<MessagePattern> python = build("python");
    static const std::vector<MessagePattern> java = build("java");
    static const std::vector<MessagePattern> go = build("go");
    static const std::vector<MessagePattern> generic = build("");
    if (language_id == "python") return python;
    if (language_id == "java") return java;
    if (language_id == "go") return go;
    return generic;
}

ErrorCategory categorize(const std::string& message, const std::string& language_id,
                         const std::vector<MessagePattern>& extra) {
    const std::string haystack = lowered(message);
    for (const auto& p : extra) {
        if (haystack.find(lowered(p.substring)) != std::string::npos) return p.category;
    }
    for (const auto& p : builtin_patterns(language_id)) {
        if (haystack.find(p.substring) != std::string::npos) return p.category;
    }
    return ErrorCategory::Unknown;
}

}  // namespace lspgen::refine
