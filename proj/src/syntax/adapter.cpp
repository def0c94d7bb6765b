#include "lspgen/syntax/adapter.hpp"

#include <algorithm>

namespace lspgen::syntax {
namespace {

std::string replace_all(std::string text, const std::string& what, const std::string& with) {
    std::size_t pos = 0;
    while ((pos = text.find(what, pos)) != std::string::npos) {
        text.replace(pos, what.size(), with);
        pos += with.size();
    }
    return text;
}

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

LanguageAdapter make_python() {
    LanguageAdapter a;
    a.language_id = "python";
    a.extensions = {".py"};
    a.block_style = BlockStyle::indentation;
    a.python_ternary = true;
    a.comment_prefix = "#";

    a.lexical.line_comments = {"#"};
    a.lexical.triple_quoted_strings = true;
    a.lexical.single_quote_is_string = true;
    a.lexical.keywords = {
        "False", "None",   "True",  "and",    "as",     "assert", "async",  "await",
        "break", "class",  "continue", "def", "del",    "elif",   "else",   "except",
        "finally", "for",  "from",  "global", "if",     "import", "in",     "is",
        "lambda", "match", "case",  "nonlocal", "not",  "or",     "pass",   "raise",
        "return", "try",   "while", "with",   "yield",
    };
    a.lexical.function_decl_keywords = {"def"};
    a.lexical.class_decl_keywords = {"class"};

    a.constructs.if_like = {"if", "elif"};
    a.constructs.loop_like = {"while", "for"};
    a.constructs.switch_like = {"match"};
    a.constructs.case_like = {"case"};
    a.constructs.return_like = {"return"};
    a.constructs.raise_like = {"raise", "assert"};
    a.constructs.break_like = {"break"};
    a.constructs.continue_like = {"continue"};
    a.constructs.try_like = {"try"};
    a.constructs.handler_like = {"except"};
    a.constructs.finally_like = {"finally"};
    a.constructs.with_like = {"with"};
    a.exception_edges = true;

    a.framework_imports = "import pytest\n";
    a.test_name_template = "test_{{STEM}}{{SUFFIX}}.py";
    a.scaffold_template =
        "class Test{{FOCAL_CAP}}:\n"
        "    {{TEST_BODY}}\n";
    a.one_shot_example =
        "Example request:\n"
        "Focal method:\n"
        "```python\n"
        "def clamp(value, low, high):\n"
        "    if value < low:\n"
        "        return low\n"
        "    if value > high:\n"
        "        return high\n"
        "    return value\n"
        "```\n"
        "Example answer (reason about each branch, then write the tests):\n"
        "The guards are `value < low` and `value > high`; tests must drive both\n"
        "sides of each guard: a value below `low`, a value above `high`, and a\n"
        "value inside the range.\n"
        "```python\n"
        "import pytest\n"
        "\n"
        "from sample import clamp\n"
        "\n"
        "class TestClamp:\n"
        "    def test_below_low_returns_low(self):\n"
        "        assert clamp(1, 5, 10) == 5\n"
        "\n"
        "    def test_above_high_returns_high(self):\n"
        "        assert clamp(99, 5, 10) == 10\n"
        "\n"
        "    def test_in_range_returns_value(self):\n"
        "        assert clamp(7, 5, 10) == 7\n"
        "```\n";
    return a;
}

LanguageAdapter make_java() {
    LanguageAdapter a;
    a.language_id = "java";
    a.extensions = {".java"};
    a.block_style = BlockStyle::braces;
    a.c_style_ternary = true;
    a.comment_prefix = "//";

    a.lexical.line_comments = {"//"};
    a.lexical.block_comments = {{"/*", "*/"}};
    a.lexical.keywords = {
        "abstract", "assert",  "boolean",   "break",    "byte",    "case",       "catch",
        "char",     "class",   "const",     "continue", "default", "do",         "double",
        "else",     "enum",    "extends",   "final",    "finally", "float",      "for",
        "goto",     "if",      "implements", "import",  "instanceof", "int",     "interface",
        "long",     "native",  "new",       "package",  "private", "protected",  "public",
        "record",   "return",  "short",     "static",   "strictfp", "super",     "switch",
        "synchronized", "this", "throw",    "throws",   "transient", "try",      "var",
        "void",     "volatile", "while",    "true",     "false",   "null",
    };
    a.lexical.function_decl_keywords = {};
    a.lexical.class_decl_keywords = {"class", "interface", "enum", "record"};

    a.constructs.if_like = {"if"};
    a.constructs.loop_like = {"while", "for", "do"};
    a.constructs.switch_like = {"switch"};
    a.constructs.case_like = {"case"};
    a.constructs.default_like = {"default"};
    a.constructs.return_like = {"return"};
    a.constructs.raise_like = {"throw"};
    a.constructs.break_like = {"break"};
    a.constructs.continue_like = {"continue"};
    a.constructs.try_like = {"try"};
    a.constructs.handler_like = {"catch"};
    a.constructs.finally_like = {"finally"};
    a.constructs.with_like = {"synchronized"};
    a.exception_edges = true;

    a.framework_imports =
        "import org.junit.jupiter.api.Test;\n"
        "import static org.junit.jupiter.api.Assertions.*;\n";
    a.test_name_template = "{{STEM_CAP}}{{SUFFIX_CAP}}Test.java";
    a.scaffold_template =
        "public class {{FOCAL_CAP}}Test {\n"
        "    {{TEST_BODY}}\n"
        "}\n";
    a.one_shot_example =
        "Example request:\n"
        "Focal method:\n"
        "```java\n"
        "public int clamp(int value, int low, int high) {\n"
        "    if (value < low) { return low; }\n"
        "    if (value > high) { return high; }\n"
        "    return value;\n"
        "}\n"
        "```\n"
        "Example answer (reason about each branch, then write the tests):\n"
        "The guards are `value < low` and `value > high`; one test per branch\n"
        "outcome keeps every path covered.\n"
        "```java\n"
        "import org.junit.jupiter.api.Test;\n"
        "import static org.junit.jupiter.api.Assertions.*;\n"
        "\n"
        "public class ClampTest {\n"
        "    @Test\n"
        "    void belowLowReturnsLow() { assertEquals(5, new Sample().clamp(1, 5, 10)); }\n"
        "    @Test\n"
        "    void aboveHighReturnsHigh() { assertEquals(10, new Sample().clamp(99, 5, 10)); }\n"
        "    @Test\n"
        "    void inRangeReturnsValue() { assertEquals(7, new Sample().clamp(7, 5, 10)); }\n"
        "}\n"
        "```\n";
    return a;
}

LanguageAdapter make_go() {
    LanguageAdapter a;
    a.language_id = "go";
    a.extensions = {".go"};
    a.block_style = BlockStyle::braces;
    a.comment_prefix = "//";

    a.lexical.line_comments = {"//"};
    a.lexical.block_comments = {{"/*", "*/"}};
    a.lexical.backtick_strings = true;
    a.lexical.keywords = {
        "break",  "case",   "chan",   "const", "continue", "default", "defer",
        "else",   "fallthrough", "for", "func", "go",      "goto",    "if",
        "import", "interface", "map", "package", "range",  "return",  "select",
        "struct", "switch", "type",   "var",
    };
    a.lexical.function_decl_keywords = {"func"};
    a.lexical.class_decl_keywords = {"type"};

    a.constructs.if_like = {"if"};
    a.constructs.loop_like = {"for"};
    a.constructs.switch_like = {"switch", "select"};
    a.constructs.case_like = {"case"};
    a.constructs.default_like = {"default"};
    a.constructs.return_like = {"return"};
    a.constructs.raise_like = {};  // panic() lexes as a call, not a keyword
    a.constructs.break_like = {"break"};
    a.constructs.continue_like = {"continue"};
    a.constructs.with_like = {"defer", "go"};

    a.framework_imports = "import \"testing\"\n";
    a.test_name_template = "{{STEM}}{{SUFFIX}}_test.go";
    a.scaffold_template =
        "func Test{{FOCAL_CAP}}(t *testing.T) {\n"
        "    {{TEST_BODY}}\n"
        "}\n";
    a.one_shot_example =
        "Example request:\n"
        "Focal method:\n"
        "```go\n"
        "func Clamp(value, low, high int) int {\n"
        "    if value < low {\n"
        "        return low\n"
        "    }\n"
        "    if value > high {\n"
        "        return high\n"
        "    }\n"
        "    return value\n"
        "}\n"
        "```\n"
        "Example answer (reason about each branch, then write the tests):\n"
        "The guards are `value < low` and `value > high`; table-driven cases\n"
        "exercise both sides of each guard.\n"
        "```go\n"
        "package sample\n"
        "\n"
        "import \"testing\"\n"
        "\n"
        "func TestClamp(t *testing.T) {\n"
        "    cases := []struct{ in, want int }{{1, 5}, {99, 10}, {7, 7}}\n"
        "    for _, c := range cases {\n"
        "        if got := Clamp(c.in, 5, 10); got != c.want {\n"
        "            t.Errorf(\"Clamp(%d) = %d, want %d\", c.in, got, c.want)\n"
        "        }\n"
        "    }\n"
        "}\n"
        "```\n";
    return a;
}

}  // namespace

std::string LanguageAdapter::test_file_name(const std::string& stem,
                                            const std::string& suffix) const {
    std::string name = test_name_template;
    name = replace_all(name, "{{STEM_CAP}}", capitalize(stem));
    name = replace_all(name, "{{STEM}}", stem);
    name = replace_all(name, "{{SUFFIX_CAP}}", capitalize(suffix));
    name = replace_all(name, "{{SUFFIX}}", suffix.empty() ? "" : "_" + suffix);
    return name;
}

std::string LanguageAdapter::scaffold(const std::string& focal_name) const {
    std::string body = scaffold_template;
    body = replace_all(body, "{{FOCAL_CAP}}", capitalize(focal_name));
    body = replace_all(body, "{{FOCAL}}", focal_name);
    return body;
}

const std::vector<LanguageAdapter>& all_adapters() {
    static const std::vector<LanguageAdapter> adapters = {make_python(), make_java(), make_go()};
    return adapters;
}

const LanguageAdapter* find_adapter(const std::string& language_id) {
    for (const auto& a : all_adapters()) {
        if (a.language_id == language_id) return &a;
    }
    return nullptr;
}

const LanguageAdapter* adapter_for_path(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    for (const auto& a : all_adapters()) {
        if (std::find(a.extensions.begin(), a.extensions.end(), ext) != a.extensions.end()) {
            return &a;
        }
    }
    return nullptr;
}

std::map<std::string, std::string> adapter_extension_map() {
    std::map<std::string, std::string> out;
    for (const auto& a : all_adapters()) {
        for (const auto& ext : a.extensions) out[ext] = a.language_id;
    }
    return out;
}

}  // namespace lspgen::syntax
