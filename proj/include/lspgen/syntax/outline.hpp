#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "lspgen/core/source_file.hpp"
#include "lspgen/core/symbol.hpp"
#include "lspgen/syntax/adapter.hpp"

namespace lspgen::syntax {

/// Top-level symbols of a file with children attached (classes own their
/// methods, and so on). This is the analysis the bundled language server
/// serves as SYM.
std::vector<core::Symbol> file_outline(const core::SourceFile& file,
                                       const LanguageAdapter& adapter);

/// The file's leading import/package block, verbatim, for test templates.
std::string extract_import_block(const core::SourceFile& file, const LanguageAdapter& adapter);

/// Names the file's imports bind (module/package identifiers), which the
/// lexer classifies as Namespace tokens.
std::unordered_set<std::string> imported_module_names(const core::SourceFile& file,
                                                      const LanguageAdapter& adapter);

}  // namespace lspgen::syntax
