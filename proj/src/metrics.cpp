#include "analysis.hpp"
#include "smellwatt/detector.hpp"

namespace smellwatt {

const EntityMetrics* MetricsTable::find(EntityType type, std::string_view unit_path, std::string_view name,
                                        int start_line) const noexcept {
    for (const auto& r : rows)
        if (r.type == type && r.unit_path == unit_path && r.name == name && r.span.start == start_line) return &r;
    return nullptr;
}

MetricsTable compute_metrics(const Corpus& corpus) {
    const detail::CorpusIndex index(corpus);
    MetricsTable table;
    auto method_row = [&](const SourceUnit& u, const MethodEntity& m, int fan_in) {
        EntityMetrics row;
        row.type = EntityType::Method;
        row.unit_path = u.path;
        row.name = detail::method_display_name(m);
        row.span = m.span;
        row.nloc = u.code_lines_in(m.span);
        row.parameter_count = static_cast<int>(m.params.size());
        row.complexity = detail::method_complexity(u, m, corpus.flavor);
        row.fan_in = fan_in;
        return row;
    };
    for (std::size_t ui = 0; ui < corpus.units.size(); ++ui) {
        const auto& u = corpus.units[ui];
        for (std::size_t ci = 0; ci < u.classes.size(); ++ci) {
            const auto& c = u.classes[ci];
            const auto idx = index.index_of(ui, ci);
            EntityMetrics row;
            row.type = EntityType::Class;
            row.unit_path = u.path;
            row.name = c.name;
            row.span = c.span;
            row.nloc = u.code_lines_in(c.span);
            row.method_count = static_cast<int>(c.methods.size());
            row.fan_in = static_cast<int>(index.fan_in[idx].size());
            row.fan_out = static_cast<int>(index.fan_out[idx].size());
            std::vector<EntityMetrics> methods;
            for (std::size_t mi = 0; mi < c.methods.size(); ++mi) {
                methods.push_back(
                    method_row(u, c.methods[mi], static_cast<int>(index.method_callers[idx][mi].size())));
                row.wmc += methods.back().complexity;
            }
            table.rows.push_back(std::move(row));
            table.rows.insert(table.rows.end(), methods.begin(), methods.end());
        }
        for (const auto& f : u.functions) table.rows.push_back(method_row(u, f, 0));
    }
    return table;
}

}  // namespace smellwatt
