#pragma once

#include "lspgen/core/workspace.hpp"
#include "lspgen/syntax/adapter.hpp"
#include "lspgen/syntax/syntax_tree.hpp"

namespace lspgen::syntax {

/// Parses the focal method's source into a concrete-syntax tree. Positions
/// are workspace-absolute (offset by the method's start) so tokens from the
/// server map onto nodes via plain containment. Parse trouble yields
/// `error` nodes, never a failure: incomplete code must still parse.
SyntaxNode parse(const core::FocalMethod& focal, const LanguageAdapter& adapter);

/// Same engine over a standalone source string; positions are file-relative.
SyntaxNode parse_source(const std::string& source, const std::string& path,
                        const LanguageAdapter& adapter);

}  // namespace lspgen::syntax
