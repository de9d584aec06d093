#include <algorithm>
#include <set>

#include "parsers.hpp"
#include "smellwatt/error.hpp"
#include "smellwatt/text.hpp"

namespace smellwatt {

namespace fs = std::filesystem;

std::string_view to_string(Flavor flavor) noexcept {
    return flavor == Flavor::JavaLike ? "java-like" : "python-like";
}

std::optional<Flavor> parse_flavor(std::string_view text) noexcept {
    if (text == "java" || text == "java-like") return Flavor::JavaLike;
    if (text == "python" || text == "python-like") return Flavor::PythonLike;
    return std::nullopt;
}

int SourceUnit::code_lines_in(const LineSpan& span) const noexcept {
    int n = 0;
    for (int l = std::max(span.start, 1); l <= span.end && l < static_cast<int>(code_lines.size()); ++l)
        n += code_lines[static_cast<std::size_t>(l)] ? 1 : 0;
    return n;
}

const SourceUnit* Corpus::find_unit(std::string_view path) const noexcept {
    for (const auto& u : units)
        if (u.path == path) return &u;
    return nullptr;
}

namespace {

int count_lines(std::string_view source) {
    if (source.empty()) return 0;
    int n = static_cast<int>(std::count(source.begin(), source.end(), '\n'));
    if (source.back() != '\n') ++n;
    return n;
}

void mark_code_lines(SourceUnit& u, Flavor flavor) {
    u.code_lines.assign(static_cast<std::size_t>(u.line_count) + 2, false);
    auto mark = [&](const Token& t) {
        for (int l = t.line; l <= t.end_line && l < static_cast<int>(u.code_lines.size()); ++l)
            u.code_lines[static_cast<std::size_t>(l)] = true;
    };
    if (flavor == Flavor::JavaLike) {
        for (const auto& t : u.tokens) mark(t);
        return;
    }
    // A logical line that is a lone string literal is a docstring, not code.
    std::size_t start = 0;
    for (std::size_t i = 0; i < u.tokens.size(); ++i) {
        if (u.tokens[i].kind != TokenKind::Newline) continue;
        const bool docstring = i == start + 1 && u.tokens[start].kind == TokenKind::String;
        if (!docstring)
            for (std::size_t k = start; k < i; ++k) mark(u.tokens[k]);
        start = i + 1;
    }
}

std::string python_module_name(const std::string& rel_path, bool& is_init) {
    std::string p = rel_path;
    if (p.ends_with(".py")) p.resize(p.size() - 3);
    std::replace(p.begin(), p.end(), '/', '.');
    is_init = p == "__init__" || p.ends_with(".__init__");
    if (is_init) p.resize(p.size() >= 9 ? p.size() - 9 : 0);
    return p;
}

bool wanted(const fs::path& p, Flavor flavor) {
    return p.extension() == (flavor == Flavor::JavaLike ? ".java" : ".py");
}

}  // namespace

SourceUnit parse_unit(std::string_view source, std::string path, Flavor flavor) {
    SourceUnit u;
    u.path = std::move(path);
    u.line_count = count_lines(source);
    u.tokens = tokenize(source, flavor);
    mark_code_lines(u, flavor);
    if (flavor == Flavor::JavaLike) {
        detail::parse_java(u);
    } else {
        u.package_or_module = python_module_name(u.path, u.is_package_init);
        detail::parse_python(u);
    }
    return u;
}

Corpus ingest_corpus(const std::vector<fs::path>& paths, Flavor flavor) {
    if (paths.empty()) throw Error(ErrorCode::EmptyCorpus, "no input paths");
    std::vector<std::pair<std::string, fs::path>> files;
    for (const auto& root : paths) {
        std::error_code ec;
        const auto status = fs::status(root, ec);
        if (ec || !fs::exists(status)) throw Error(ErrorCode::IoFailure, root.string());
        if (fs::is_regular_file(status)) {
            files.emplace_back(root.filename().generic_string(), root);
            continue;
        }
        if (!fs::is_directory(status)) throw Error(ErrorCode::IoFailure, root.string());
        fs::recursive_directory_iterator it(root, ec), end;
        if (ec) throw Error(ErrorCode::IoFailure, root.string());
        for (; it != end; it.increment(ec)) {
            if (ec) throw Error(ErrorCode::IoFailure, root.string() + ": " + ec.message());
            if (it->is_regular_file() && wanted(it->path(), flavor))
                files.emplace_back(it->path().lexically_relative(root).generic_string(), it->path());
        }
    }
    if (files.empty()) throw Error(ErrorCode::EmptyCorpus, "no source files found");
    std::sort(files.begin(), files.end());
    for (std::size_t i = 1; i < files.size(); ++i)
        if (files[i].first == files[i - 1].first)
            throw Error(ErrorCode::BadInput, "duplicate unit path " + files[i].first);

    Corpus corpus;
    corpus.flavor = flavor;
    for (const auto& [rel, full] : files) {
        const std::string source = text::read_file(full);
        try {
            corpus.units.push_back(parse_unit(source, rel, flavor));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BadInput) throw;
            corpus.skipped.push_back({rel, e.what()});
        }
    }
    return corpus;
}

}  // namespace smellwatt
