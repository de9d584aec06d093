#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "analysis.hpp"
#include "smellwatt/detector.hpp"

namespace smellwatt {

namespace {

using detail::CorpusIndex;
using Evidence = std::map<std::string, double>;

const std::set<std::string, std::less<>> kAssignOps{"=",  "+=", "-=",  "*=",  "/=",   "%=", "&=", "|=",
                                                    "^=", "<<=", ">>=", ">>>=", "//=", "**=", "@=", ":="};
const std::set<std::string, std::less<>> kPrimitiveTypes{"byte",    "short", "int",  "long",  "float",
                                                         "double",  "boolean", "char", "String"};

class RuleRunner {
public:
    RuleRunner(const Corpus& corpus, const RuleConfig& rules)
        : corpus_(corpus), rules_(rules), index_(corpus), metrics_(compute_metrics(corpus)) {}

    std::vector<SmellInstance> run() {
        cyclic_dependency();
        for (std::size_t ui = 0; ui < corpus_.units.size(); ++ui) {
            const auto& u = corpus_.units[ui];
            for (std::size_t ci = 0; ci < u.classes.size(); ++ci) {
                const auto idx = index_.index_of(ui, ci);
                class_rules(u, idx);
                for (std::size_t mi = 0; mi < u.classes[ci].methods.size(); ++mi)
                    method_rules(u, u.classes[ci].methods[mi], &u.classes[ci], idx, mi);
            }
            for (const auto& f : u.functions) method_rules(u, f, nullptr, 0, 0);
            dead_code(u);
            orphan_module_constants(ui);
        }
        duplicate_code();
        std::sort(out_.begin(), out_.end(), [](const SmellInstance& a, const SmellInstance& b) {
            return std::tie(a.unit_path, a.line_span.start, a.kind, a.entity_name, a.line_span.end) <
                   std::tie(b.unit_path, b.line_span.start, b.kind, b.entity_name, b.line_span.end);
        });
        return std::move(out_);
    }

private:
    const Corpus& corpus_;
    const RuleConfig& rules_;
    CorpusIndex index_;
    MetricsTable metrics_;
    std::vector<SmellInstance> out_;

    void emit(SmellKind kind, const SourceUnit& u, std::string entity, LineSpan span, Evidence evidence) {
        out_.push_back({kind, u.path, std::move(entity), span, std::move(evidence)});
    }

    const EntityMetrics& metric(EntityType type, const SourceUnit& u, const std::string& name, int start) const {
        return *metrics_.find(type, u.path, name, start);
    }

    bool py() const { return corpus_.flavor == Flavor::PythonLike; }

    static bool is_ident(const Token& t, std::string_view text) {
        return t.kind == TokenKind::Identifier && t.text == text;
    }

    // ---- per-method rules ------------------------------------------------

    void method_rules(const SourceUnit& u, const MethodEntity& m, const ClassEntity* owner, std::size_t class_idx,
                      std::size_t method_idx) {
        const auto name = detail::method_display_name(m);
        const auto& mm = metric(EntityType::Method, u, name, m.span.start);

        if (mm.parameter_count > rules_.long_parameter_max)
            emit(SmellKind::LongParameter, u, name, m.span, {{"parameter_count", mm.parameter_count}});
        if (mm.nloc > rules_.god_method_nloc) emit(SmellKind::GodMethod, u, name, m.span, {{"nloc", mm.nloc}});
        if (mm.nloc > rules_.spaghetti_nloc && mm.complexity > rules_.spaghetti_complexity)
            emit(SmellKind::SpaghettiCode, u, name, m.span, {{"nloc", mm.nloc}, {"complexity", mm.complexity}});
        if (owner) {
            const auto callers = index_.method_callers[class_idx][method_idx].size();
            if (static_cast<double>(callers) >= rules_.shotgun_callers)
                emit(SmellKind::ShotgunSurgery, u, name, m.span, {{"method_fan_in", static_cast<double>(callers)}});
        }
        unused_parameters(u, m, owner, name);
        long_statements(u, m, name);
    }

    bool trivial_python_body(const SourceUnit& u, const MethodEntity& m) const {
        std::vector<const Token*> body;
        for (std::size_t i = m.body.begin; i < m.body.end; ++i)
            if (u.tokens[i].kind != TokenKind::Newline) body.push_back(&u.tokens[i]);
        // a leading docstring does not make a stub concrete
        if (!body.empty() && body.front()->kind == TokenKind::String) body.erase(body.begin());
        if (body.empty()) return true;
        if (body.size() == 1 && (body[0]->text == "pass" || body[0]->text == "...")) return true;
        return body.size() >= 2 && body[0]->text == "raise" && body[1]->text == "NotImplementedError";
    }

    void unused_parameters(const SourceUnit& u, const MethodEntity& m, const ClassEntity* owner,
                           const std::string& name) {
        if (!m.has_body || m.is_abstract || m.params.empty()) return;
        if (owner && owner->type_kind == TypeKind::Interface) return;
        if (std::find(m.annotations.begin(), m.annotations.end(), "Override") != m.annotations.end()) return;
        if (py() && (trivial_python_body(u, m) || (m.name.starts_with("__") && m.name.ends_with("__")))) return;
        int unused = 0;
        for (const auto& p : m.params) {
            bool used = false;
            for (std::size_t i = m.body.begin; i < m.body.end && !used; ++i)
                used = is_ident(u.tokens[i], p.name) && !(i > 0 && u.tokens[i - 1].text == "." && !py());
            if (!used) ++unused;
        }
        if (unused > 0)
            emit(SmellKind::SpeculativeGenerality, u, name, m.span, {{"unused_parameters", unused}});
    }

    void long_statements(const SourceUnit& u, const MethodEntity& m, const std::string& name) {
        const auto& t = u.tokens;
        std::size_t start = m.body.begin;
        int count = 0;
        auto flush = [&](std::size_t stop) {
            if (count > rules_.long_statement_tokens)
                emit(SmellKind::LongStatement, u, name, {t[start].line, t[stop - 1].end_line},
                     {{"statement_tokens", count}});
            count = 0;
        };
        for (std::size_t i = m.body.begin; i < m.body.end; ++i) {
            const bool delimiter = t[i].kind == TokenKind::Newline ||
                                   (t[i].kind == TokenKind::Punct &&
                                    (t[i].text == ";" || (!py() && (t[i].text == "{" || t[i].text == "}"))));
            if (delimiter) {
                if (count > 0) flush(i);
                count = 0;
                start = i + 1;
                continue;
            }
            if (count == 0) start = i;
            ++count;
        }
        if (count > 0) flush(m.body.end);

        if (!py()) {
            for (std::size_t i = m.body.begin; i < m.body.end; ++i) {
                if (!is_ident(t[i], "switch") || i + 1 >= m.body.end || t[i + 1].text != "(") continue;
                std::size_t j = i + 1;
                int depth = 0;
                for (; j < m.body.end; ++j) {
                    if (t[j].kind == TokenKind::String) continue;
                    if (t[j].text == "(") ++depth;
                    else if (t[j].text == ")" && --depth == 0) break;
                }
                if (j + 1 >= m.body.end || t[j + 1].text != "{") continue;
                int cases = 0;
                depth = 0;
                std::size_t k = j + 1;
                for (; k < m.body.end; ++k) {
                    if (t[k].kind == TokenKind::String) continue;
                    if (t[k].text == "{") ++depth;
                    else if (t[k].text == "}" && --depth == 0) break;
                    else if (depth == 1 && is_ident(t[k], "case")) ++cases;
                }
                if (cases > rules_.long_statement_cases)
                    emit(SmellKind::LongStatement, u, name, {t[i].line, t[std::min(k, m.body.end - 1)].line},
                         {{"switch_cases", cases}});
            }
            return;
        }
        // python: match blocks, counted by 'case' lines one level inside
        for (std::size_t i = m.body.begin; i < m.body.end; ++i) {
            const bool line_start = i == m.body.begin || t[i - 1].kind == TokenKind::Newline;
            if (!line_start || !is_ident(t[i], "match")) continue;
            std::size_t e = i;
            while (e < m.body.end && t[e].kind != TokenKind::Newline) ++e;
            if (e == i || t[e - 1].text != ":") continue;
            const int match_col = t[i].col;
            int case_col = -1, cases = 0, last_line = t[i].line;
            for (std::size_t k = e + 1; k < m.body.end; ++k) {
                if (t[k - 1].kind != TokenKind::Newline || t[k].kind == TokenKind::Newline) continue;
                if (t[k].col <= match_col) break;
                last_line = t[k].line;
                if (is_ident(t[k], "case") && (case_col < 0 || t[k].col == case_col)) {
                    case_col = t[k].col;
                    ++cases;
                }
            }
            if (cases > rules_.long_statement_cases)
                emit(SmellKind::LongStatement, u, name, {t[i].line, last_line}, {{"switch_cases", cases}});
        }
    }

    // ---- per-class rules -------------------------------------------------

    void class_rules(const SourceUnit& u, std::size_t idx) {
        const auto& c = index_.cls(idx);
        const auto& cm = metric(EntityType::Class, u, c.name, c.span.start);
        if (cm.nloc > rules_.god_class_nloc) emit(SmellKind::GodClass, u, c.name, c.span, {{"nloc", cm.nloc}});
        const bool concrete = (c.type_kind == TypeKind::Class || c.type_kind == TypeKind::Record) && !c.is_abstract;
        if (concrete && cm.nloc < rules_.lazy_class_nloc && cm.wmc < rules_.lazy_class_wmc)
            emit(SmellKind::LazyClass, u, c.name, c.span, {{"nloc", cm.nloc}, {"wmc", cm.wmc}});
        refused_bequest(u, idx);
        temporary_fields(u, c);
        single_implementer(u, idx);
        primitive_obsession(u, idx);
        orphan_class_constants(u, idx);
        middleman(u, c);
    }

    std::optional<std::size_t> superclass(std::size_t idx) const {
        const auto& c = index_.cls(idx);
        if (c.extends_count == 0 || c.type_kind == TypeKind::Interface) return std::nullopt;
        for (std::size_t b = 0; b < c.extends_count; ++b) {
            const auto parent = index_.resolve(index_.classes[idx].unit, c.bases[b]);
            if (parent && index_.cls(*parent).type_kind != TypeKind::Interface) return parent;
        }
        return std::nullopt;
    }

    void refused_bequest(const SourceUnit& u, std::size_t idx) {
        const auto parent = superclass(idx);
        if (!parent) return;
        const auto& c = index_.cls(idx);
        const auto& p = index_.cls(*parent);
        std::set<std::string> inherited;
        for (const auto& m : p.methods)
            if (!m.is_private && !m.is_constructor && !(m.name.starts_with("__") && m.name.ends_with("__")))
                inherited.insert(m.name);
        for (const auto& f : p.fields)
            if (!f.is_private) inherited.insert(f.name);
        if (static_cast<double>(inherited.size()) < rules_.refused_bequest_min_inherited) return;

        std::set<std::size_t> declarations;
        for (const auto& m : c.methods) declarations.insert(m.name_token);
        for (const auto& f : c.fields) declarations.insert(f.name_token);
        std::set<std::string> used;
        for (std::size_t i = c.tokens.begin; i < c.tokens.end; ++i)
            if (u.tokens[i].kind == TokenKind::Identifier && inherited.contains(u.tokens[i].text) &&
                !declarations.contains(i))
                used.insert(u.tokens[i].text);
        if (used.size() * 3 < inherited.size())
            emit(SmellKind::RefusedBequest, u, c.name, c.span,
                 {{"inherited_members", static_cast<double>(inherited.size())},
                  {"used_inherited", static_cast<double>(used.size())}});
    }

    // Occurrences of a field inside a method body, and whether one writes it.
    struct FieldUse {
        int refs = 0;
        bool writes = false;
    };

    FieldUse field_use(const SourceUnit& u, const MethodEntity& m, const std::string& field) const {
        FieldUse use;
        const auto& t = u.tokens;
        for (std::size_t i = m.body.begin; i < m.body.end; ++i) {
            if (!is_ident(t[i], field)) continue;
            const bool dotted = i > 0 && t[i - 1].text == ".";
            const bool via_self = dotted && i > 1 && (is_ident(t[i - 2], "this") || is_ident(t[i - 2], "self"));
            if (py() ? !via_self : (dotted && !via_self)) continue;
            ++use.refs;
            const bool next_assign = i + 1 < t.size() && t[i + 1].kind == TokenKind::Punct &&
                                     (kAssignOps.contains(t[i + 1].text) || t[i + 1].text == "++" ||
                                      t[i + 1].text == "--");
            const std::size_t before = via_self ? i - 2 : i;
            const bool prefix_inc = before > 0 && (t[before - 1].text == "++" || t[before - 1].text == "--");
            use.writes |= next_assign || prefix_inc;
        }
        return use;
    }

    bool private_unreferenced(const SourceUnit& u, const std::string& name, std::size_t declaration) const {
        for (std::size_t i = 0; i < u.tokens.size(); ++i)
            if (i != declaration && is_ident(u.tokens[i], name)) return false;
        return true;
    }

    void temporary_fields(const SourceUnit& u, const ClassEntity& c) {
        for (const auto& f : c.fields) {
            if (f.is_static || f.is_final) continue;
            if (f.is_private && private_unreferenced(u, f.name, f.name_token)) continue;  // dead, not temporary
            int methods_using = 0;
            const MethodEntity* user = nullptr;
            FieldUse user_use;
            for (const auto& m : c.methods) {
                const auto use = field_use(u, m, f.name);
                if (use.refs == 0) continue;
                ++methods_using;
                user = &m;
                user_use = use;
            }
            if (methods_using != 1 || user->is_constructor || !user_use.writes) continue;
            // python fields declared at class level are class attributes
            if (py() && !(f.name_token >= user->body.begin && f.name_token < user->body.end)) continue;
            emit(SmellKind::TemporaryField, u, c.name + "." + f.name, {f.line, f.line},
                 {{"referencing_methods", 1}});
        }
    }

    void single_implementer(const SourceUnit& u, std::size_t idx) {
        const auto& c = index_.cls(idx);
        if (!c.is_abstract && c.type_kind != TypeKind::Interface) return;
        int implementers = 0;
        for (std::size_t d = 0; d < index_.classes.size(); ++d) {
            if (d == idx) continue;
            const auto& k = index_.cls(d);
            for (const auto& b : k.bases) {
                const auto r = index_.resolve(index_.classes[d].unit, b);
                if (r && *r == idx) {
                    ++implementers;
                    break;
                }
            }
        }
        if (implementers == 1)
            emit(SmellKind::SpeculativeGenerality, u, c.name, c.span, {{"implementers", 1}});
    }

    // Token indices of `c` that do not belong to a class nested inside it.
    template <typename Fn>
    void own_tokens(std::size_t idx, Fn&& fn) const {
        const auto& c = index_.cls(idx);
        const auto& u = index_.unit_of(idx);
        std::vector<TokenRange> nested;
        for (std::size_t d = 0; d < index_.classes.size(); ++d)
            if (index_.nested_in(d, idx)) nested.push_back(index_.cls(d).tokens);
        for (std::size_t i = c.tokens.begin; i < c.tokens.end; ++i) {
            if (std::any_of(nested.begin(), nested.end(), [&](const TokenRange& r) { return i >= r.begin && i < r.end; }))
                continue;
            fn(i, u.tokens[i]);
        }
    }

    static std::string field_prefix(const std::string& name) {
        std::size_t i = 0;
        while (i < name.size() && (std::islower(static_cast<unsigned char>(name[i])) ||
                                   std::isdigit(static_cast<unsigned char>(name[i]))))
            ++i;
        if (i == 0 || i >= name.size()) return {};
        return name.substr(0, i);
    }

    void primitive_obsession(const SourceUnit& u, std::size_t idx) {
        const auto& c = index_.cls(idx);
        int buffers = 0, first_line = 0;
        own_tokens(idx, [&](std::size_t, const Token& t) {
            if (is_ident(t, "StringBuffer")) {
                if (buffers++ == 0) first_line = t.line;
            }
        });
        if (buffers > 0)
            emit(SmellKind::PrimitiveObsession, u, c.name, {first_line, first_line},
                 {{"string_buffer_uses", buffers}});

        std::map<std::string, std::vector<const FieldEntity*>> groups;
        for (const auto& f : c.fields) {
            if (!kPrimitiveTypes.contains(f.type) || f.is_static) continue;
            const auto prefix = field_prefix(f.name);
            if (!prefix.empty()) groups[prefix].push_back(&f);
        }
        for (const auto& [prefix, fields] : groups) {
            if (static_cast<double>(fields.size()) < rules_.primitive_prefix_fields) continue;
            emit(SmellKind::PrimitiveObsession, u, c.name, {fields.front()->line, fields.back()->line},
                 {{"prefix_fields", static_cast<double>(fields.size())}});
        }
    }

    void orphan_class_constants(const SourceUnit& u, std::size_t idx) {
        if (py()) return;
        const auto& c = index_.cls(idx);
        const auto fq = detail::qualified_class_name(u, c, corpus_.flavor);
        for (const auto& f : c.fields) {
            if (!(f.is_public && f.is_static && f.is_final)) continue;
            bool internal = false;
            for (std::size_t i = c.tokens.begin; i < c.tokens.end && !internal; ++i)
                internal = i != f.name_token && is_ident(u.tokens[i], f.name);
            if (internal) continue;
            int external = 0;
            for (std::size_t d = 0; d < index_.classes.size(); ++d) {
                if (d == idx || index_.nested_in(d, idx)) continue;
                const auto& du = index_.unit_of(d);
                const auto& dk = index_.cls(d);
                bool static_import = false;
                for (const auto& imp : du.imports)
                    if (imp.is_static && (imp.target == fq + "." + f.name || (imp.wildcard && imp.target == fq)))
                        static_import = true;
                bool refers = false;
                for (std::size_t i = dk.tokens.begin; i < dk.tokens.end && !refers; ++i) {
                    if (!is_ident(du.tokens[i], f.name)) continue;
                    if (i >= 2 && du.tokens[i - 1].text == "." && is_ident(du.tokens[i - 2], c.simple_name)) {
                        const auto r = index_.resolve(index_.classes[d].unit, c.simple_name);
                        refers = r && *r == idx;
                    } else if (static_import && !(i > 0 && du.tokens[i - 1].text == ".")) {
                        refers = true;
                    }
                }
                if (refers) ++external;
            }
            if (static_cast<double>(external) >= rules_.orphan_min_references)
                emit(SmellKind::OrphanVariable, u, c.name + "." + f.name, {f.line, f.line},
                     {{"internal_references", 0}, {"external_classes", external}});
        }
    }

    void orphan_module_constants(std::size_t ui) {
        if (!py()) return;
        const auto& u = corpus_.units[ui];
        for (const auto& f : u.constants) {
            if (!f.is_public || !f.is_final) continue;
            if (!private_unreferenced(u, f.name, f.name_token)) continue;
            int external = 0;
            for (std::size_t vi = 0; vi < corpus_.units.size(); ++vi) {
                if (vi == ui) continue;
                const auto& v = corpus_.units[vi];
                bool imports = false;
                for (const auto& imp : v.imports) {
                    if (imp.target == u.package_or_module) imports = true;
                    for (const auto& n : imp.names)
                        if (imp.target + "." + n == u.package_or_module) imports = true;
                }
                if (!imports) continue;
                if (std::any_of(v.tokens.begin(), v.tokens.end(), [&](const Token& t) { return is_ident(t, f.name); }))
                    ++external;
            }
            if (static_cast<double>(external) >= rules_.orphan_min_references)
                emit(SmellKind::OrphanVariable, u, f.name, {f.line, f.line},
                     {{"internal_references", 0}, {"external_modules", external}});
        }
    }

    bool delegates(const SourceUnit& u, const ClassEntity& c, const MethodEntity& m) const {
        std::vector<const Token*> b;
        for (std::size_t i = m.body.begin; i < m.body.end; ++i)
            if (u.tokens[i].kind != TokenKind::Newline) b.push_back(&u.tokens[i]);
        std::size_t i = 0;
        if (i < b.size() && is_ident(*b[i], "return")) ++i;
        if (i + 1 < b.size() && (is_ident(*b[i], "this") || is_ident(*b[i], "self")) && b[i + 1]->text == ".") i += 2;
        else if (py()) return false;
        if (i >= b.size() || b[i]->kind != TokenKind::Identifier) return false;
        const auto& field = b[i]->text;
        if (std::none_of(c.fields.begin(), c.fields.end(), [&](const FieldEntity& f) { return f.name == field; }))
            return false;
        ++i;
        if (i + 2 >= b.size() || b[i]->text != "." || b[i + 1]->kind != TokenKind::Identifier || b[i + 2]->text != "(")
            return false;
        i += 2;
        int depth = 0;
        for (; i < b.size(); ++i) {
            if (b[i]->kind == TokenKind::String) continue;
            if (b[i]->text == "(") ++depth;
            else if (b[i]->text == ")" && --depth == 0) break;
        }
        if (i >= b.size()) return false;
        ++i;
        if (!py()) {
            if (i >= b.size() || b[i]->text != ";") return false;
            ++i;
        }
        return i == b.size();
    }

    void middleman(const SourceUnit& u, const ClassEntity& c) {
        int methods = 0, delegating = 0;
        for (const auto& m : c.methods) {
            if (m.is_constructor || !m.has_body || m.is_abstract) continue;
            ++methods;
            if (delegates(u, c, m)) ++delegating;
        }
        if (methods == 0 || static_cast<double>(methods) < rules_.middleman_min_methods) return;
        if (delegating * 2 > methods)
            emit(SmellKind::Middleman, u, c.name, c.span,
                 {{"methods", methods}, {"delegating_methods", delegating}});
    }

    // ---- unit-level rules ------------------------------------------------

    void dead_code(const SourceUnit& u) {
        for (const auto& c : u.classes) {
            for (const auto& m : c.methods)
                if (m.is_private && !m.is_constructor && private_unreferenced(u, m.name, m.name_token))
                    emit(SmellKind::DeadCode, u, c.name + "." + m.name, m.span, {{"references", 0}});
            for (const auto& f : c.fields)
                if (f.is_private && private_unreferenced(u, f.name, f.name_token))
                    emit(SmellKind::DeadCode, u, c.name + "." + f.name, {f.line, f.line}, {{"references", 0}});
        }
        for (const auto& f : u.functions)
            if (f.is_private && private_unreferenced(u, f.name, f.name_token))
                emit(SmellKind::DeadCode, u, f.name, f.span, {{"references", 0}});
    }

    void cyclic_dependency() {
        const auto graph = build_dependency_graph(corpus_);
        for (const auto& cycle : find_cycles(graph)) {
            const std::set<std::string> members(cycle.begin(), cycle.end());
            const SourceUnit* where = nullptr;
            int line = 1;
            for (const auto& u : corpus_.units) {
                const auto node = u.package_or_module.empty() ? std::string("(default)") : u.package_or_module;
                if (node != cycle.front()) continue;
                for (const auto& imp : u.imports) {
                    bool hits = false;
                    for (const auto& m : members)
                        if (m != node && (imp.target == m || imp.target.starts_with(m + ".") ||
                                          std::any_of(imp.names.begin(), imp.names.end(), [&](const std::string& n) {
                                              return imp.target + "." + n == m;
                                          })))
                            hits = true;
                    if (hits) {
                        where = &u;
                        line = imp.line;
                        break;
                    }
                }
                if (where) break;
            }
            if (!where) continue;
            std::string name;
            for (const auto& n : cycle) name += (name.empty() ? "" : ",") + n;
            emit(SmellKind::CyclicDependency, *where, name, {line, line},
                 {{"cycle_size", static_cast<double>(cycle.size())}});
        }
    }

    void duplicate_code() {
        struct Pos {
            std::size_t unit;
            std::size_t token;
            std::size_t method;  // serial number of the method body
            std::string entity;
        };
        std::vector<Pos> seq;
        std::size_t serial = 0;
        auto add_body = [&](std::size_t ui, const MethodEntity& m) {
            const auto& u = corpus_.units[ui];
            for (std::size_t i = m.body.begin; i < m.body.end; ++i)
                if (u.tokens[i].kind != TokenKind::Newline)
                    seq.push_back({ui, i, serial, detail::method_display_name(m)});
            ++serial;
        };
        for (std::size_t ui = 0; ui < corpus_.units.size(); ++ui) {
            for (const auto& c : corpus_.units[ui].classes)
                for (const auto& m : c.methods) add_body(ui, m);
            for (const auto& f : corpus_.units[ui].functions) add_body(ui, f);
        }
        const auto w = static_cast<std::size_t>(rules_.duplicate_window);
        if (w == 0 || seq.size() < w) return;
        auto token = [&](std::size_t p) -> const Token& { return corpus_.units[seq[p].unit].tokens[seq[p].token]; };

        std::vector<std::string> key(seq.size());
        std::unordered_map<std::string, std::vector<std::size_t>> occ;
        for (std::size_t p = 0; p + w <= seq.size(); ++p) {
            if (seq[p].method != seq[p + w - 1].method) continue;
            std::string k;
            for (std::size_t q = p; q < p + w; ++q) {
                k += token(q).text;
                k += '\x1f';
            }
            occ[k].push_back(p);
            key[p] = std::move(k);
        }
        auto occurrences = [&](std::size_t p) -> const std::vector<std::size_t>* {
            if (key[p].empty()) return nullptr;
            const auto& o = occ.at(key[p]);
            return o.size() >= 2 ? &o : nullptr;
        };
        for (std::size_t p = 0; p < seq.size(); ++p) {
            const auto* o = occurrences(p);
            if (!o || o->front() != p) continue;
            if (p > 0 && seq[p - 1].method == seq[p].method) {
                const auto* prev = occurrences(p - 1);
                if (prev && prev->front() == p - 1 && prev->size() == o->size() &&
                    std::equal(prev->begin(), prev->end(), o->begin(), [](std::size_t a, std::size_t b) { return a + 1 == b; }))
                    continue;
            }
            std::size_t last = p + w - 1;
            for (std::size_t q = p + 1; q < seq.size(); ++q) {
                const auto* next = occurrences(q);
                if (!next || next->front() != q || next->size() != o->size() || seq[q].method != seq[p].method) break;
                if (!std::equal(o->begin(), o->end(), next->begin(),
                                [&](std::size_t a, std::size_t b) { return a + (q - p) == b; }))
                    break;
                last = q + w - 1;
            }
            const auto& u = corpus_.units[seq[p].unit];
            emit(SmellKind::DuplicateCode, u, seq[p].entity, {token(p).line, token(last).end_line},
                 {{"occurrences", static_cast<double>(o->size())}, {"tokens", static_cast<double>(last - p + 1)}});
        }
    }
};

}  // namespace

std::vector<SmellInstance> detect_smells(const Corpus& corpus, const RuleConfig& rules) {
    validate_rule_config(rules);
    return RuleRunner(corpus, rules).run();
}

std::map<SmellKind, long> count_by_kind(const std::vector<SmellInstance>& smells) {
    std::map<SmellKind, long> out;
    for (const auto& s : smells) ++out[s.kind];
    return out;
}

std::string smells_json(const std::vector<SmellInstance>& smells) {
    auto doc = nlohmann::ordered_json::array();
    for (const auto& s : smells) {
        nlohmann::ordered_json j;
        j["kind"] = to_string(s.kind);
        j["unit_path"] = s.unit_path;
        j["entity_name"] = s.entity_name;
        j["line_span"] = {s.line_span.start, s.line_span.end};
        auto ev = nlohmann::ordered_json::object();
        for (const auto& [k, v] : s.evidence) {
            if (v == std::floor(v) && std::abs(v) < 1e15) ev[k] = static_cast<long long>(v);
            else ev[k] = v;
        }
        j["evidence"] = ev;
        doc.push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

}  // namespace smellwatt
