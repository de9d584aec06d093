#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smellwatt {

enum class Flavor { JavaLike, PythonLike };

std::string_view to_string(Flavor flavor) noexcept;
/// Accepts "java", "java-like", "python", "python-like".
std::optional<Flavor> parse_flavor(std::string_view text) noexcept;

enum class TokenKind { Identifier, Number, String, Punct, Newline };

struct Token {
    TokenKind kind = TokenKind::Punct;
    std::string text;
    int line = 0;
    int end_line = 0;  // differs from line only for multi-line string literals
    int col = 0;
};

/// Tokens of a source file. Comments are dropped. Python sources get a
/// Newline token at the end of every logical line.
std::vector<Token> tokenize(std::string_view source, Flavor flavor);

struct LineSpan {
    int start = 0;
    int end = 0;
    bool operator==(const LineSpan&) const = default;
};

/// Half-open index range into SourceUnit::tokens.
struct TokenRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    [[nodiscard]] bool empty() const noexcept { return begin >= end; }
};

struct Parameter {
    std::string name;
    std::string type;
};

struct MethodEntity {
    std::string name;
    std::string owner;  // qualified class name within the unit; empty for free functions
    std::vector<Parameter> params;
    LineSpan span;
    TokenRange body;
    std::size_t name_token = 0;
    bool has_body = false;
    bool is_constructor = false;
    bool is_private = false;
    bool is_public = false;
    bool is_static = false;
    bool is_abstract = false;
    std::vector<std::string> annotations;  // without the leading '@'
};

struct FieldEntity {
    std::string name;
    std::string type;  // empty when the language does not declare one
    int line = 0;
    std::size_t name_token = 0;
    bool is_private = false;
    bool is_public = false;
    bool is_static = false;
    bool is_final = false;
};

enum class TypeKind { Class, Interface, Enum, Record };

struct ClassEntity {
    std::string name;         // qualified within the unit, e.g. Outer.Inner
    std::string simple_name;
    TypeKind type_kind = TypeKind::Class;
    std::vector<std::string> bases;  // simple names: extends first, then implements
    std::size_t extends_count = 0;   // leading entries of `bases` that are superclasses
    bool is_abstract = false;
    LineSpan span;
    TokenRange tokens;
    std::vector<MethodEntity> methods;
    std::vector<FieldEntity> fields;
};

struct ImportEntity {
    std::string target;              // dotted name, relative imports already resolved
    std::vector<std::string> names;  // python "from X import a, b"
    bool wildcard = false;
    bool is_static = false;
    int line = 0;
};

struct SourceUnit {
    std::string path;  // relative to the root it was found under
    std::string package_or_module;
    bool is_package_init = false;
    int line_count = 0;
    std::vector<ImportEntity> imports;
    std::vector<ClassEntity> classes;    // declaration order, nested after their outer class
    std::vector<MethodEntity> functions;  // free functions (python)
    std::vector<FieldEntity> constants;   // module-level assignments (python)
    std::vector<Token> tokens;
    std::vector<bool> code_lines;  // index = line number; true if the line carries code

    /// Code lines within [span.start, span.end].
    [[nodiscard]] int code_lines_in(const LineSpan& span) const noexcept;
};

struct SkippedFile {
    std::string path;
    std::string reason;
};

struct Corpus {
    Flavor flavor = Flavor::JavaLike;
    std::vector<SourceUnit> units;  // sorted by path
    std::vector<SkippedFile> skipped;

    [[nodiscard]] const SourceUnit* find_unit(std::string_view path) const noexcept;
};

/// Parses one file. Throws BadInput with the reason when the structure
/// cannot be recovered.
SourceUnit parse_unit(std::string_view source, std::string path, Flavor flavor);

/// Walks files and directories (recursively) for .java or .py sources.
/// Unit paths are relative to the argument they were found under.
/// Throws EmptyCorpus when nothing is found, IoFailure for unreadable paths.
Corpus ingest_corpus(const std::vector<std::filesystem::path>& paths, Flavor flavor);

}  // namespace smellwatt
