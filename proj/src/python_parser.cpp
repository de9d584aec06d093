#include <algorithm>
#include <cctype>

#include "parsers.hpp"
#include "smellwatt/error.hpp"

namespace smellwatt::detail {

namespace {

const std::vector<std::string> kAssignOps{"=", "+=", "-=", "*=", "/=", "//=", "%=", "**=",
                                          "&=", "|=", "^=", "<<=", ">>=", "@=", ":="};

bool is_assign(const Token& t) {
    return t.kind == TokenKind::Punct && std::find(kAssignOps.begin(), kAssignOps.end(), t.text) != kAssignOps.end();
}

bool private_name(std::string_view name) {
    return name.starts_with('_') && !(name.starts_with("__") && name.ends_with("__"));
}

struct Line {
    std::size_t begin = 0;  // first token
    std::size_t end = 0;    // one past the last token, excluding the Newline
    int indent = 0;
    int first_line = 0;
    int last_line = 0;
};

class PythonParser {
public:
    explicit PythonParser(SourceUnit& unit) : u_(unit), t_(unit.tokens) {}

    void run() {
        std::vector<Line> lines;
        std::size_t start = 0;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (t_[i].kind != TokenKind::Newline) continue;
            if (i > start)
                lines.push_back({start, i, t_[start].col, t_[start].line, t_[i - 1].end_line});
            start = i + 1;
        }
        for (const auto& line : lines) handle(line);
        while (!stack_.empty()) close_top(t_.size());
    }

private:
    struct Scope {
        bool is_class = false;
        int indent = 0;
        std::size_t class_index = 0;
        std::ptrdiff_t method_index = -1;  // -1 for free functions when !is_class
    };

    SourceUnit& u_;
    const std::vector<Token>& t_;
    std::vector<Scope> stack_;
    std::vector<std::string> decorators_;
    int last_line_ = 0;

    [[noreturn]] void fail(const Line& l, const std::string& what) const {
        throw Error(ErrorCode::BadInput, "line " + std::to_string(l.first_line) + ": " + what);
    }

    bool is(std::size_t at, std::string_view text) const {
        return at < t_.size() && t_[at].kind != TokenKind::String && t_[at].text == text;
    }
    bool ident(std::size_t at) const { return at < t_.size() && t_[at].kind == TokenKind::Identifier; }

    MethodEntity& method_of(const Scope& s) {
        if (s.method_index < 0) fail(Line{}, "internal scope error");
        const auto idx = static_cast<std::size_t>(s.method_index);
        return s.class_index == static_cast<std::size_t>(-1) ? u_.functions[idx] : u_.classes[s.class_index].methods[idx];
    }

    void close_top(std::size_t end_token) {
        const Scope s = stack_.back();
        stack_.pop_back();
        if (s.is_class) {
            auto& c = u_.classes[s.class_index];
            c.span.end = last_line_;
            c.tokens.end = end_token;
        } else {
            auto& m = method_of(s);
            m.span.end = last_line_;
            m.body.end = end_token;
        }
    }

    std::size_t matching(const Line& l, std::size_t open_at) const {
        int depth = 0;
        for (std::size_t i = open_at; i < l.end; ++i) {
            if (t_[i].kind == TokenKind::String) continue;
            const auto& s = t_[i].text;
            if (s == "(" || s == "[" || s == "{") ++depth;
            else if ((s == ")" || s == "]" || s == "}") && --depth == 0) return i;
        }
        fail(l, "unbalanced brackets");
    }

    // Colon that ends a compound statement header, searched from `from`.
    std::size_t header_colon(const Line& l, std::size_t from) const {
        int depth = 0;
        for (std::size_t i = from; i < l.end; ++i) {
            const auto& s = t_[i].text;
            if (t_[i].kind == TokenKind::String) continue;
            if (s == "(" || s == "[" || s == "{") ++depth;
            else if (s == ")" || s == "]" || s == "}") --depth;
            else if (s == ":" && depth == 0) return i;
        }
        fail(l, "missing ':' in block header");
    }

    std::vector<std::vector<std::size_t>> split_commas(std::size_t begin, std::size_t end) const {
        std::vector<std::vector<std::size_t>> parts(1);
        int depth = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const auto& s = t_[i].text;
            if (t_[i].kind != TokenKind::String) {
                if (s == "(" || s == "[" || s == "{") ++depth;
                else if (s == ")" || s == "]" || s == "}") --depth;
                else if (s == "," && depth == 0) {
                    parts.emplace_back();
                    continue;
                }
            }
            parts.back().push_back(i);
        }
        if (parts.back().empty()) parts.pop_back();
        return parts;
    }

    std::string base_package() const {
        if (u_.is_package_init) return u_.package_or_module;
        const auto dot = u_.package_or_module.rfind('.');
        return dot == std::string::npos ? std::string{} : u_.package_or_module.substr(0, dot);
    }

    void handle(const Line& l) {
        while (!stack_.empty() && l.indent <= stack_.back().indent) close_top(l.begin);
        last_line_ = l.last_line;

        const std::size_t b = l.begin;
        if (is(b, "import") || (is(b, "from") && std::any_of(t_.begin() + static_cast<std::ptrdiff_t>(b),
                                                               t_.begin() + static_cast<std::ptrdiff_t>(l.end),
                                                               [](const Token& t) { return t.text == "import"; }))) {
            parse_import(l);
            return;
        }
        if (is(b, "@")) {
            std::size_t i = b + 1;
            std::string name;
            while (i < l.end && (ident(i) || is(i, "."))) {
                if (ident(i)) name = t_[i].text;
                ++i;
            }
            decorators_.push_back(name);
            return;
        }
        const bool in_def = !stack_.empty() && !stack_.back().is_class;
        if (is(b, "class") && ident(b + 1) && !in_def) {
            parse_class(l);
            return;
        }
        const std::size_t def_at = is(b, "async") && is(b + 1, "def") ? b + 1 : b;
        if (is(def_at, "def") && ident(def_at + 1) && !in_def) {
            parse_def(l, def_at);
            return;
        }
        decorators_.clear();

        if (stack_.empty()) {
            if (ident(b) && (is(b + 1, "=") || is(b + 1, ":"))) {
                FieldEntity f;
                f.name = t_[b].text;
                f.name_token = b;
                f.line = l.first_line;
                f.is_static = true;
                f.is_private = private_name(f.name);
                f.is_public = !f.is_private;
                f.is_final = std::none_of(f.name.begin(), f.name.end(),
                                          [](char c) { return std::islower(static_cast<unsigned char>(c)); });
                u_.constants.push_back(std::move(f));
            }
            return;
        }
        if (stack_.back().is_class) {
            if (ident(b) && (is(b + 1, "=") || is(b + 1, ":"))) add_field(stack_.back().class_index, b, l.first_line);
            return;
        }
        // inside a method: self.name <assign-op> registers an instance field
        const Scope& s = stack_.back();
        if (s.class_index == static_cast<std::size_t>(-1)) return;
        for (std::size_t i = b; i + 3 < l.end + 1; ++i) {
            if (is(i, "self") && is(i + 1, ".") && ident(i + 2) && (i == b || !is(i - 1, ".")) &&
                i + 3 < t_.size() && is_assign(t_[i + 3]))
                add_field(s.class_index, i + 2, t_[i + 2].line);
        }
    }

    void add_field(std::size_t class_index, std::size_t name_token, int line) {
        auto& c = u_.classes[class_index];
        const auto& name = t_[name_token].text;
        if (std::any_of(c.fields.begin(), c.fields.end(), [&](const FieldEntity& f) { return f.name == name; })) return;
        FieldEntity f;
        f.name = name;
        f.name_token = name_token;
        f.line = line;
        f.is_private = private_name(name);
        f.is_public = !f.is_private;
        c.fields.push_back(std::move(f));
    }

    void parse_import(const Line& l) {
        std::size_t i = l.begin;
        if (is(i, "import")) {
            for (const auto& part : split_commas(i + 1, l.end)) {
                ImportEntity imp;
                imp.line = l.first_line;
                for (std::size_t k : part) {
                    if (is(k, "as")) break;
                    imp.target += t_[k].text;
                }
                if (!imp.target.empty()) u_.imports.push_back(std::move(imp));
            }
            return;
        }
        ++i;  // from
        int dots = 0;
        while (is(i, ".") || is(i, "...")) {
            dots += static_cast<int>(t_[i].text.size());
            ++i;
        }
        std::string name;
        while (i < l.end && !is(i, "import")) name += t_[i++].text;
        ++i;
        ImportEntity imp;
        imp.line = l.first_line;
        if (dots > 0) {
            std::string base = base_package();
            for (int up = 1; up < dots; ++up) {
                const auto dot = base.rfind('.');
                base = dot == std::string::npos ? std::string{} : base.substr(0, dot);
            }
            imp.target = base.empty() ? name : (name.empty() ? base : base + "." + name);
        } else {
            imp.target = name;
        }
        std::size_t end = l.end;
        if (is(i, "(")) {
            end = matching(l, i);
            ++i;
        }
        for (const auto& part : split_commas(i, end)) {
            if (part.empty()) continue;
            if (is(part.front(), "*")) imp.wildcard = true;
            else imp.names.push_back(t_[part.front()].text);
        }
        u_.imports.push_back(std::move(imp));
    }

    void parse_class(const Line& l) {
        ClassEntity c;
        c.simple_name = t_[l.begin + 1].text;
        const bool nested = !stack_.empty() && stack_.back().is_class;
        c.name = nested ? u_.classes[stack_.back().class_index].name + "." + c.simple_name : c.simple_name;
        c.span.start = l.first_line;
        c.tokens.begin = l.begin;
        std::size_t i = l.begin + 2;
        if (is(i, "(")) {
            const std::size_t close = matching(l, i);
            for (const auto& part : split_commas(i + 1, close)) {
                const bool keyword = std::any_of(part.begin(), part.end(), [&](std::size_t k) { return is(k, "="); });
                std::string last;
                for (std::size_t k : part) {
                    if (is(k, "[")) break;
                    if (ident(k)) last = t_[k].text;
                }
                if (last == "ABC" || last == "ABCMeta") c.is_abstract = true;
                if (!keyword && !last.empty()) c.bases.push_back(last);
            }
            i = close + 1;
        }
        c.extends_count = c.bases.size();
        header_colon(l, i);
        decorators_.clear();
        u_.classes.push_back(std::move(c));
        stack_.push_back({true, l.indent, u_.classes.size() - 1, -1});
    }

    void parse_def(const Line& l, std::size_t def_at) {
        MethodEntity m;
        m.name = t_[def_at + 1].text;
        m.name_token = def_at + 1;
        m.span.start = l.first_line;
        m.annotations = decorators_;
        decorators_.clear();
        const bool in_class = !stack_.empty() && stack_.back().is_class;
        auto decorated = [&](std::string_view d) {
            return std::find(m.annotations.begin(), m.annotations.end(), d) != m.annotations.end();
        };
        m.is_static = decorated("staticmethod");
        m.is_abstract = decorated("abstractmethod");
        m.is_private = private_name(m.name);
        m.is_public = !m.is_private;
        m.is_constructor = in_class && m.name == "__init__";
        if (!is(def_at + 2, "(")) fail(l, "expected '(' after def name");
        const std::size_t close = matching(l, def_at + 2);
        bool first = true;
        for (const auto& part : split_commas(def_at + 3, close)) {
            std::size_t k = 0;
            while (k < part.size() && (is(part[k], "*") || is(part[k], "**"))) ++k;
            if (k >= part.size() || is(part[k], "/")) continue;
            if (!ident(part[k])) continue;
            Parameter p;
            p.name = t_[part[k]].text;
            for (std::size_t j = k + 1; j < part.size(); ++j) {
                if (is(part[j], "=")) break;
                if (j == k + 1 && is(part[j], ":")) continue;
                p.type += t_[part[j]].text;
            }
            if (first && in_class && !m.is_static) {
                first = false;
                continue;
            }
            first = false;
            m.params.push_back(std::move(p));
        }
        const std::size_t colon = header_colon(l, close + 1);
        m.has_body = true;
        m.body.begin = colon + 1;
        if (in_class) {
            const std::size_t ci = stack_.back().class_index;
            m.owner = u_.classes[ci].name;
            if (m.is_abstract) u_.classes[ci].is_abstract = true;
            u_.classes[ci].methods.push_back(std::move(m));
            stack_.push_back({false, l.indent, ci, static_cast<std::ptrdiff_t>(u_.classes[ci].methods.size() - 1)});
        } else {
            u_.functions.push_back(std::move(m));
            stack_.push_back(
                {false, l.indent, static_cast<std::size_t>(-1), static_cast<std::ptrdiff_t>(u_.functions.size() - 1)});
        }
    }
};

}  // namespace

void parse_python(SourceUnit& unit) { PythonParser(unit).run(); }

}  // namespace smellwatt::detail
