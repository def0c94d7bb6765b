#include "lspgen/retrieval/template.hpp"

#include <filesystem>

#include "lspgen/syntax/outline.hpp"

namespace lspgen::retrieval {

namespace fs = std::filesystem;

std::string TestTemplate::render() const {
    std::string out = import_block;
    if (!out.empty() && out.back() != '\n') out += "\n";
    if (!out.empty()) out += "\n";
    out += scaffold;
    return out;
}

TestTemplate infer_test_template(const core::FocalMethod& focal,
                                 const core::SourceFile& focal_file,
                                 const syntax::LanguageAdapter& adapter,
                                 const std::string& scratch_suffix) {
    TestTemplate tmpl;
    std::string imports = syntax::extract_import_block(focal_file, adapter);
    const std::string framework = adapter.framework_imports;
    // Keep the focal file's package/module context, then the framework's
    // imports, skipping any line already present.
    std::string merged = imports;
    std::size_t pos = 0;
    while (pos < framework.size()) {
        std::size_t eol = framework.find('\n', pos);
        if (eol == std::string::npos) eol = framework.size();
        const std::string line = framework.substr(pos, eol - pos);
        if (!line.empty() && merged.find(line) == std::string::npos) merged += line + "\n";
        pos = eol + 1;
    }
    tmpl.import_block = merged;
    tmpl.scaffold = adapter.scaffold(focal.symbol.name);

    const fs::path focal_path(focal.file_path);
    const std::string file_name =
        adapter.test_file_name(focal_path.stem().string(), scratch_suffix);
    tmpl.target_path = (focal_path.parent_path() / file_name).string();
    return tmpl;
}

}  // namespace lspgen::retrieval
