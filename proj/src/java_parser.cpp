#include <algorithm>
#include <set>

#include "parsers.hpp"
#include "smellwatt/error.hpp"

namespace smellwatt::detail {

namespace {

const std::set<std::string, std::less<>> kModifiers{
    "public", "protected", "private", "static",   "final",    "abstract", "synchronized",
    "native", "transient", "volatile", "strictfp", "default", "sealed",
};

bool is_type_keyword(std::string_view t) { return t == "class" || t == "interface" || t == "enum" || t == "record"; }

class JavaParser {
public:
    explicit JavaParser(SourceUnit& unit) : u_(unit), t_(unit.tokens) {}

    void run() {
        skip_annotations();
        if (is("package")) {
            ++pos_;
            u_.package_or_module = dotted_name();
            expect(";");
        }
        while (is("import")) parse_import();
        while (pos_ < t_.size()) {
            if (is(";")) {
                ++pos_;
                continue;
            }
            skip_annotations();
            Mods mods = modifiers();
            if (!at_type_decl()) fail("expected a type declaration");
            parse_type("", mods);
        }
    }

private:
    struct Mods {
        bool is_private = false, is_public = false, is_static = false, is_abstract = false, is_final = false;
        bool is_default = false;
        std::size_t first = 0;
    };

    SourceUnit& u_;
    const std::vector<Token>& t_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        const int line = pos_ < t_.size() ? t_[pos_].line : (t_.empty() ? 1 : t_.back().line);
        throw Error(ErrorCode::BadInput, "line " + std::to_string(line) + ": " + what);
    }

    bool is(std::string_view text, std::size_t at) const {
        return at < t_.size() && t_[at].kind != TokenKind::String && t_[at].text == text;
    }
    bool is(std::string_view text) const { return is(text, pos_); }
    bool ident(std::size_t at) const { return at < t_.size() && t_[at].kind == TokenKind::Identifier; }

    void expect(std::string_view text) {
        if (!is(text)) fail("expected '" + std::string(text) + "'");
        ++pos_;
    }

    std::string dotted_name() {
        std::string out;
        if (!ident(pos_)) fail("expected a name");
        out = t_[pos_++].text;
        while (is(".") && (ident(pos_ + 1) || is("*", pos_ + 1))) {
            out += "." + t_[pos_ + 1].text;
            pos_ += 2;
        }
        return out;
    }

    std::size_t matching(std::size_t open_at) const {
        const std::string& open = t_[open_at].text;
        const std::string close = open == "{" ? "}" : open == "(" ? ")" : open == "[" ? "]" : ">";
        int depth = 0;
        for (std::size_t i = open_at; i < t_.size(); ++i) {
            if (t_[i].kind == TokenKind::String) continue;
            if (t_[i].text == open) ++depth;
            else if (t_[i].text == close && --depth == 0) return i;
        }
        const int line = t_[open_at].line;
        throw Error(ErrorCode::BadInput, "line " + std::to_string(line) + ": unbalanced '" + open + "'");
    }

    void parse_import() {
        ImportEntity imp;
        imp.line = t_[pos_].line;
        ++pos_;
        if (is("static")) {
            imp.is_static = true;
            ++pos_;
        }
        imp.target = dotted_name();
        if (imp.target.ends_with(".*")) {
            imp.wildcard = true;
            imp.target.resize(imp.target.size() - 2);
        }
        expect(";");
        u_.imports.push_back(std::move(imp));
    }

    std::vector<std::string> skip_annotations() {
        std::vector<std::string> names;
        while (is("@") && !is("interface", pos_ + 1)) {
            ++pos_;
            const auto name = dotted_name();
            names.push_back(name.substr(name.rfind('.') == std::string::npos ? 0 : name.rfind('.') + 1));
            if (is("(")) pos_ = matching(pos_) + 1;
        }
        return names;
    }

    Mods modifiers() {
        Mods m;
        m.first = pos_;
        while (pos_ < t_.size()) {
            if (is("non") && is("-", pos_ + 1) && is("sealed", pos_ + 2)) {
                pos_ += 3;
                continue;
            }
            if (t_[pos_].kind != TokenKind::Identifier || !kModifiers.contains(t_[pos_].text)) {
                if (is("@") && !is("interface", pos_ + 1)) {
                    skip_annotations();
                    continue;
                }
                break;
            }
            const auto& w = t_[pos_].text;
            m.is_private |= w == "private";
            m.is_public |= w == "public";
            m.is_static |= w == "static";
            m.is_abstract |= w == "abstract";
            m.is_final |= w == "final";
            m.is_default |= w == "default";
            ++pos_;
        }
        return m;
    }

    bool at_type_decl() const {
        if (is("@") && is("interface", pos_ + 1)) return true;
        if (!ident(pos_) || !is_type_keyword(t_[pos_].text)) return false;
        if (t_[pos_].text == "record") return ident(pos_ + 1) && (is("(", pos_ + 2) || is("<", pos_ + 2));
        return ident(pos_ + 1);
    }

    std::vector<std::string> type_list(std::initializer_list<std::string_view> stops) {
        std::vector<std::string> out;
        std::string last;
        int angle = 0;
        while (pos_ < t_.size()) {
            if (angle == 0 && std::any_of(stops.begin(), stops.end(), [&](auto s) { return is(s); })) break;
            const auto& tok = t_[pos_];
            if (tok.text == "<") ++angle;
            else if (tok.text == ">") --angle;
            else if (angle == 0 && tok.text == ",") {
                if (!last.empty()) out.push_back(last);
                last.clear();
            } else if (angle == 0 && tok.kind == TokenKind::Identifier) {
                last = tok.text;
            }
            ++pos_;
        }
        if (!last.empty()) out.push_back(last);
        return out;
    }

    void parse_type(const std::string& outer, const Mods& mods) {
        ClassEntity c;
        const std::size_t first = mods.first;
        if (is("@")) {
            ++pos_;
            c.type_kind = TypeKind::Interface;
        } else {
            const auto& kw = t_[pos_].text;
            c.type_kind = kw == "interface" ? TypeKind::Interface
                          : kw == "enum"    ? TypeKind::Enum
                          : kw == "record"  ? TypeKind::Record
                                            : TypeKind::Class;
        }
        ++pos_;
        c.simple_name = t_[pos_++].text;
        c.name = outer.empty() ? c.simple_name : outer + "." + c.simple_name;
        c.is_abstract = mods.is_abstract || c.type_kind == TypeKind::Interface;
        c.span.start = t_[first].line;
        c.tokens.begin = first;

        if (is("<")) pos_ = matching(pos_) + 1;
        if (c.type_kind == TypeKind::Record && is("(")) pos_ = matching(pos_) + 1;
        std::vector<std::string> extends, implements;
        while (!is("{")) {
            if (pos_ >= t_.size()) fail("missing type body");
            if (is("extends")) {
                ++pos_;
                extends = type_list({"implements", "permits", "{"});
            } else if (is("implements")) {
                ++pos_;
                implements = type_list({"permits", "{"});
            } else if (is("permits")) {
                ++pos_;
                type_list({"{"});
            } else {
                fail("unexpected '" + t_[pos_].text + "' in type header");
            }
        }
        c.bases = extends;
        c.extends_count = extends.size();
        c.bases.insert(c.bases.end(), implements.begin(), implements.end());

        const std::size_t open = pos_;
        const std::size_t close = matching(open);
        const std::size_t index = u_.classes.size();
        u_.classes.push_back(c);
        pos_ = open + 1;
        if (c.type_kind == TypeKind::Enum) skip_enum_constants(close);
        while (pos_ < close) parse_member(index, close);
        pos_ = close + 1;
        auto& done = u_.classes[index];
        done.span.end = t_[close].line;
        done.tokens.end = close + 1;
    }

    void skip_enum_constants(std::size_t close) {
        int depth = 0;
        while (pos_ < close) {
            const auto& s = t_[pos_].text;
            if (t_[pos_].kind != TokenKind::String) {
                if (s == "(" || s == "{" || s == "[") ++depth;
                else if (s == ")" || s == "}" || s == "]") --depth;
                else if (s == ";" && depth == 0) {
                    ++pos_;
                    return;
                }
            }
            ++pos_;
        }
    }

    void parse_member(std::size_t class_index, std::size_t close) {
        if (is(";")) {
            ++pos_;
            return;
        }
        auto annotations = skip_annotations();
        Mods mods = modifiers();
        if (is("{")) {
            pos_ = matching(pos_) + 1;
            return;
        }
        if (at_type_decl()) {
            const std::string outer = u_.classes[class_index].name;
            parse_type(outer, mods);
            return;
        }
        const auto& owner = u_.classes[class_index];
        const bool in_interface = owner.type_kind == TypeKind::Interface;

        // Find what the declaration is: '(' means method, '=' ';' ',' field.
        std::size_t i = pos_;
        int angle = 0, bracket = 0;
        while (i < close) {
            const auto& s = t_[i].text;
            if (s == "<") ++angle;
            else if (s == ">") --angle;
            else if (s == "[") ++bracket;
            else if (s == "]") --bracket;
            else if (angle == 0 && bracket == 0 && (s == "(" || s == "=" || s == ";" || s == "," || s == "{")) break;
            ++i;
        }
        if (i >= close) fail("incomplete member declaration");

        if (t_[i].text == "(") {
            MethodEntity m;
            if (!ident(i - 1)) fail("expected a method name");
            m.name = t_[i - 1].text;
            m.name_token = i - 1;
            m.owner = owner.name;
            std::size_t type_start = pos_;
            if (is("<", type_start)) type_start = matching(type_start) + 1;
            m.is_constructor = type_start == i - 1 && m.name == owner.simple_name;
            m.is_private = mods.is_private;
            m.is_public = mods.is_public || in_interface;
            m.is_static = mods.is_static;
            m.annotations = std::move(annotations);
            m.span.start = t_[mods.first].line;
            const std::size_t rparen = matching(i);
            m.params = parse_params(i + 1, rparen);
            pos_ = rparen + 1;
            while (pos_ < close && !is("{") && !is(";")) ++pos_;
            if (pos_ >= close) fail("method " + m.name + " has no body or terminator");
            if (is("{")) {
                const std::size_t end = matching(pos_);
                m.has_body = true;
                m.body = {pos_ + 1, end};
                m.span.end = t_[end].line;
                pos_ = end + 1;
            } else {
                m.span.end = t_[pos_].line;
                m.is_abstract = mods.is_abstract || (in_interface && !mods.is_static && !mods.is_default);
                ++pos_;
            }
            u_.classes[class_index].methods.push_back(std::move(m));
            return;
        }
        if (t_[i].text == "{") fail("unexpected '{' in member declaration");

        // Field declarators: Type a [= x], b [= y];
        std::size_t k = i - 1;
        while (k > pos_ && t_[k].text == "]") k -= 2;
        if (!ident(k)) fail("expected a field name");
        std::string type;
        for (std::size_t j = pos_; j < k; ++j) type += t_[j].text;
        pos_ = k;
        while (true) {
            if (!ident(pos_)) fail("expected a field name");
            FieldEntity f;
            f.name = t_[pos_].text;
            f.name_token = pos_;
            f.type = type;
            f.line = t_[pos_].line;
            f.is_private = mods.is_private;
            f.is_public = mods.is_public || in_interface;
            f.is_static = mods.is_static || in_interface;
            f.is_final = mods.is_final || in_interface;
            u_.classes[class_index].fields.push_back(std::move(f));
            ++pos_;
            while (is("[")) pos_ = matching(pos_) + 1;
            if (is("=")) {
                int depth = 0;
                while (pos_ < close) {
                    const auto& s = t_[pos_].text;
                    if (t_[pos_].kind != TokenKind::String) {
                        if (s == "(" || s == "{" || s == "[") ++depth;
                        else if (s == ")" || s == "}" || s == "]") --depth;
                        else if (depth == 0 && (s == "," || s == ";")) break;
                    }
                    ++pos_;
                }
            }
            if (is(",")) {
                ++pos_;
                continue;
            }
            expect(";");
            return;
        }
    }

    std::vector<Parameter> parse_params(std::size_t begin, std::size_t end) const {
        std::vector<Parameter> out;
        std::size_t start = begin;
        int depth = 0;
        auto flush = [&](std::size_t stop) {
            std::size_t name = stop;
            std::string type;
            std::size_t j = start;
            while (j < stop) {
                if (t_[j].text == "@") {
                    j += 2;
                    while (j + 1 < stop && t_[j].text == "." && ident(j + 1)) j += 2;
                    if (j < stop && t_[j].text == "(") j = matching(j) + 1;
                    continue;
                }
                if (t_[j].text == "final") {
                    ++j;
                    continue;
                }
                break;
            }
            for (std::size_t k = stop; k > j; --k)
                if (ident(k - 1)) {
                    name = k - 1;
                    break;
                }
            if (name == stop) return;
            for (std::size_t k = j; k < name; ++k) type += t_[k].text;
            if (t_[name].text == "this") return;
            out.push_back({t_[name].text, type});
        };
        for (std::size_t i = begin; i < end; ++i) {
            const auto& s = t_[i].text;
            if (s == "<" || s == "(" || s == "[") ++depth;
            else if (s == ">" || s == ")" || s == "]") --depth;
            else if (s == "," && depth == 0) {
                flush(i);
                start = i + 1;
            }
        }
        if (start < end) flush(end);
        return out;
    }
};

}  // namespace

void parse_java(SourceUnit& unit) { JavaParser(unit).run(); }

}  // namespace smellwatt::detail
