#pragma once

#include <optional>
#include <set>
#include <unordered_map>
#include <string>
#include <vector>

#include "smellwatt/source_model.hpp"

namespace smellwatt::detail {

struct ClassRef {
    std::size_t unit = 0;
    std::size_t cls = 0;
};

/// Name resolution and reference sets shared by metrics and rules.
class CorpusIndex {
public:
    explicit CorpusIndex(const Corpus& corpus);

    const Corpus& corpus;
    std::vector<ClassRef> classes;
    std::vector<std::set<std::size_t>> fan_out;  // per class index
    std::vector<std::set<std::size_t>> fan_in;
    std::vector<std::vector<std::set<std::size_t>>> method_callers;  // [class][method]

    [[nodiscard]] const SourceUnit& unit_of(std::size_t c) const { return corpus.units[classes[c].unit]; }
    [[nodiscard]] const ClassEntity& cls(std::size_t c) const {
        return corpus.units[classes[c].unit].classes[classes[c].cls];
    }
    [[nodiscard]] std::size_t index_of(std::size_t unit, std::size_t cls) const;

    /// Class visible as `simple` from inside `unit`, if any.
    [[nodiscard]] std::optional<std::size_t> resolve(std::size_t unit, const std::string& simple) const;

    /// True if `inner` is declared inside `outer` (same unit).
    [[nodiscard]] bool nested_in(std::size_t inner, std::size_t outer) const;

private:
    std::vector<std::size_t> first_of_unit_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_name_;
    [[nodiscard]] bool visible(std::size_t unit, std::size_t c) const;
};

/// 1 + branch keywords in the body.
int method_complexity(const SourceUnit& unit, const MethodEntity& m, Flavor flavor);

std::string qualified_class_name(const SourceUnit& unit, const ClassEntity& c, Flavor flavor);

inline std::string method_display_name(const MethodEntity& m) {
    return m.owner.empty() ? m.name : m.owner + "." + m.name;
}

}  // namespace smellwatt::detail
