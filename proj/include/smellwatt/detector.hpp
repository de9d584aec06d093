#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smellwatt/catalog.hpp"
#include "smellwatt/source_model.hpp"

namespace smellwatt {

enum class EntityType { Class, Method };

/// Methods fill nloc, parameter_count, complexity and fan_in (distinct
/// calling classes). Classes fill nloc, wmc, method_count, fan_in, fan_out.
struct EntityMetrics {
    EntityType type = EntityType::Method;
    std::string unit_path;
    std::string name;  // Class, Outer.Inner, Class.method, or a free function name
    LineSpan span;
    int nloc = 0;
    int parameter_count = 0;
    int complexity = 0;
    int wmc = 0;
    int method_count = 0;
    int fan_in = 0;
    int fan_out = 0;
};

struct MetricsTable {
    std::vector<EntityMetrics> rows;  // unit order, then declaration order

    [[nodiscard]] const EntityMetrics* find(EntityType type, std::string_view unit_path, std::string_view name,
                                            int start_line) const noexcept;
};

MetricsTable compute_metrics(const Corpus& corpus);

struct DependencyGraph {
    std::vector<std::string> nodes;                         // sorted
    std::set<std::pair<std::string, std::string>> edges;    // no self loops

    /// Drops self loops; the set deduplicates.
    void add_edge(const std::string& from, const std::string& to);
};

/// Node per package (java-like) or module (python-like); an edge P -> Q when
/// a unit of P imports something that resolves into Q. The unnamed java
/// package is the node "(default)".
DependencyGraph build_dependency_graph(const Corpus& corpus);

/// Strongly connected components with at least two nodes, each sorted,
/// the list sorted lexicographically.
std::vector<std::vector<std::string>> find_cycles(const DependencyGraph& graph);

struct RuleConfig {
    double long_parameter_max = 5;            // more parameters than this
    double god_method_nloc = 100;             // method nloc above this
    double god_class_nloc = 1000;             // class nloc above this
    double lazy_class_nloc = 20;              // class nloc below this ...
    double lazy_class_wmc = 3;                // ... and wmc below this
    double duplicate_window = 25;             // tokens in an identical window
    double shotgun_callers = 7;               // distinct calling classes, at least
    double long_statement_tokens = 120;       // tokens in one statement, above
    double long_statement_cases = 10;         // cases in one switch, above
    double spaghetti_nloc = 40;               // method nloc above this ...
    double spaghetti_complexity = 15;         // ... and complexity above this
    double refused_bequest_min_inherited = 3; // ignore parents with fewer members
    double middleman_min_methods = 2;         // ignore classes with fewer methods
    double primitive_prefix_fields = 3;       // same-prefix primitive fields, at least
    double orphan_min_references = 2;         // referencing classes elsewhere, at least

    /// Key names as accepted in a rules file, paired with member pointers.
    static const std::vector<std::pair<std::string_view, double RuleConfig::*>>& keys();
};

/// Flat `key = number` pairs ('#' comments allowed). Unknown keys, values
/// that are not numbers and values <= 0 throw BadRuleConfig.
RuleConfig parse_rule_config(std::string_view content);
RuleConfig load_rule_config(const std::filesystem::path& path);
void validate_rule_config(const RuleConfig& config);

struct SmellInstance {
    SmellKind kind = SmellKind::CyclicDependency;
    std::string unit_path;
    std::string entity_name;
    LineSpan line_span;
    std::map<std::string, double> evidence;

    bool operator==(const SmellInstance&) const = default;
};

/// Applies every rule; the result is sorted by (unit_path, line start, kind).
std::vector<SmellInstance> detect_smells(const Corpus& corpus, const RuleConfig& rules);

std::map<SmellKind, long> count_by_kind(const std::vector<SmellInstance>& smells);

std::string smells_json(const std::vector<SmellInstance>& smells);

}  // namespace smellwatt
