#include "analysis.hpp"

#include <algorithm>
#include <array>

namespace smellwatt::detail {

namespace {

constexpr std::array<std::string_view, 5> kJavaBranches{"if", "for", "while", "case", "catch"};
constexpr std::array<std::string_view, 6> kPythonBranches{"if", "elif", "for", "while", "except", "case"};

bool declares_type(const std::vector<Token>& t, std::size_t i) {
    if (i == 0) return false;
    const auto& prev = t[i - 1].text;
    return t[i - 1].kind == TokenKind::Identifier &&
           (prev == "class" || prev == "interface" || prev == "enum" || prev == "record");
}

}  // namespace

int method_complexity(const SourceUnit& unit, const MethodEntity& m, Flavor flavor) {
    int n = 1;
    for (std::size_t i = m.body.begin; i < m.body.end && i < unit.tokens.size(); ++i) {
        const auto& t = unit.tokens[i];
        if (t.kind != TokenKind::Identifier) continue;
        if (flavor == Flavor::JavaLike) {
            if (std::find(kJavaBranches.begin(), kJavaBranches.end(), t.text) != kJavaBranches.end()) ++n;
        } else if (std::find(kPythonBranches.begin(), kPythonBranches.end(), t.text) != kPythonBranches.end()) {
            // 'case' is a soft keyword; count it only where it opens a line
            if (t.text == "case" && i > 0 && unit.tokens[i - 1].kind != TokenKind::Newline) continue;
            ++n;
        }
    }
    return n;
}

std::string qualified_class_name(const SourceUnit& unit, const ClassEntity& c, Flavor) {
    return unit.package_or_module.empty() ? c.name : unit.package_or_module + "." + c.name;
}

CorpusIndex::CorpusIndex(const Corpus& corpus_) : corpus(corpus_) {
    for (std::size_t u = 0; u < corpus.units.size(); ++u) {
        first_of_unit_.push_back(classes.size());
        for (std::size_t c = 0; c < corpus.units[u].classes.size(); ++c) {
            by_name_[corpus.units[u].classes[c].simple_name].push_back(classes.size());
            classes.push_back({u, c});
        }
    }
    first_of_unit_.push_back(classes.size());

    fan_out.resize(classes.size());
    fan_in.resize(classes.size());
    method_callers.resize(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) method_callers[c].resize(cls(c).methods.size());

    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& u = unit_of(c);
        const auto& k = cls(c);
        for (std::size_t i = k.tokens.begin; i < k.tokens.end && i < u.tokens.size(); ++i) {
            const auto& t = u.tokens[i];
            if (t.kind != TokenKind::Identifier || declares_type(u.tokens, i)) continue;
            if (i > 0 && u.tokens[i - 1].text == "." && !(i > 1 && u.tokens[i - 2].kind == TokenKind::Identifier))
                continue;
            const auto target = resolve(classes[c].unit, t.text);
            if (!target || *target == c || nested_in(*target, c)) continue;
            fan_out[c].insert(*target);
        }
    }
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (auto d : fan_out[c]) fan_in[d].insert(c);

    for (std::size_t d = 0; d < classes.size(); ++d) {
        const auto& u = unit_of(d);
        const auto& k = cls(d);
        for (std::size_t i = k.tokens.begin; i + 2 < k.tokens.end && i + 2 < u.tokens.size(); ++i) {
            if (u.tokens[i].text != "." || u.tokens[i + 1].kind != TokenKind::Identifier || u.tokens[i + 2].text != "(")
                continue;
            const auto& called = u.tokens[i + 1].text;
            for (auto c : fan_out[d]) {
                const auto& methods = cls(c).methods;
                for (std::size_t m = 0; m < methods.size(); ++m)
                    if (methods[m].name == called && !methods[m].is_private && !methods[m].is_constructor)
                        method_callers[c][m].insert(d);
            }
        }
    }
}

std::size_t CorpusIndex::index_of(std::size_t unit, std::size_t c) const { return first_of_unit_[unit] + c; }

bool CorpusIndex::nested_in(std::size_t inner, std::size_t outer) const {
    return classes[inner].unit == classes[outer].unit && cls(inner).name.starts_with(cls(outer).name + ".");
}

bool CorpusIndex::visible(std::size_t unit, std::size_t c) const {
    const auto& from = corpus.units[unit];
    const auto& owner = unit_of(c);
    if (classes[c].unit == unit) return true;
    const auto fq = qualified_class_name(owner, cls(c), corpus.flavor);
    if (corpus.flavor == Flavor::JavaLike) {
        if (owner.package_or_module == from.package_or_module) return true;
        const auto outer = fq.substr(0, fq.rfind('.'));
        for (const auto& imp : from.imports) {
            if (imp.wildcard && imp.target == outer) return true;
            if (!imp.wildcard && imp.target == fq) return true;
            if (imp.is_static && (imp.target == fq || imp.target.starts_with(fq + "."))) return true;
        }
        return false;
    }
    const auto& module = owner.package_or_module;
    for (const auto& imp : from.imports) {
        if (imp.target == module) return true;
        for (const auto& n : imp.names)
            if (imp.target + "." + n == module) return true;
    }
    return false;
}

std::optional<std::size_t> CorpusIndex::resolve(std::size_t unit, const std::string& simple) const {
    std::optional<std::size_t> same_unit, other;
    int others = 0;
    const auto it = by_name_.find(simple);
    if (it == by_name_.end()) return std::nullopt;
    for (std::size_t c : it->second) {
        if (classes[c].unit == unit) {
            if (!same_unit) same_unit = c;
        } else if (visible(unit, c)) {
            other = c;
            ++others;
        }
    }
    if (same_unit) return same_unit;
    if (others == 1) return other;
    return std::nullopt;
}

}  // namespace smellwatt::detail
