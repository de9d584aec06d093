#include <cmath>
#include <set>

#include <json.hpp>

#include "smellwatt/error.hpp"
#include "smellwatt/predictor.hpp"
#include "smellwatt/text.hpp"

namespace smellwatt {

namespace {

constexpr std::array<std::string_view, 5> kMetricNames{"loc", "smelly_loc", "wmc_mean", "fan_in_mean",
                                                       "fan_out_mean"};

std::string count_name(SmellKind kind) { return "count:" + std::string(to_string(kind)); }
std::string category_name(AppCategory c) { return "category:" + std::string(to_string(c)); }

const double* metric_field(const FeatureVector& fv, std::size_t i) {
    const std::array<const double*, 5> fields{&fv.loc, &fv.smelly_loc, &fv.wmc_mean, &fv.fan_in_mean,
                                              &fv.fan_out_mean};
    return fields[i];
}

double* metric_field(FeatureVector& fv, std::size_t i) {
    return const_cast<double*>(metric_field(static_cast<const FeatureVector&>(fv), i));
}

void check_feature_value(const std::string& name, double v) {
    if (!std::isfinite(v) || v < 0) throw Error(ErrorCode::BadInput, "feature " + name + " must be finite and >= 0");
}

}  // namespace

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (auto k : all_smell_kinds()) n.push_back(count_name(k));
        for (auto m : kMetricNames) n.emplace_back(m);
        for (auto c : all_app_categories()) n.push_back(category_name(c));
        return n;
    }();
    return names;
}

std::map<std::string, double> FeatureVector::to_map() const {
    std::map<std::string, double> out;
    for (auto k : all_smell_kinds()) out[count_name(k)] = smell_counts[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) out[std::string(kMetricNames[i])] = *metric_field(*this, i);
    for (auto c : all_app_categories()) out[category_name(c)] = c == category ? 1.0 : 0.0;
    return out;
}

FeatureVector build_feature_vector(const MetricsTable& metrics, const std::vector<SmellInstance>& smells,
                                   AppCategory category) {
    FeatureVector fv;
    fv.category = category;
    for (const auto& s : smells) fv.smell_counts[static_cast<std::size_t>(s.kind)] += 1;

    std::set<std::pair<std::string, int>> lines;
    for (const auto& s : smells)
        for (int l = s.line_span.start; l <= s.line_span.end; ++l) lines.emplace(s.unit_path, l);
    fv.smelly_loc = static_cast<double>(lines.size());

    double classes = 0;
    for (const auto& r : metrics.rows) {
        if (r.name.find('.') == std::string::npos) fv.loc += r.nloc;
        if (r.type != EntityType::Class) continue;
        classes += 1;
        fv.wmc_mean += r.wmc;
        fv.fan_in_mean += r.fan_in;
        fv.fan_out_mean += r.fan_out;
    }
    if (classes > 0) {
        fv.wmc_mean /= classes;
        fv.fan_in_mean /= classes;
        fv.fan_out_mean /= classes;
    }
    return fv;
}

std::string feature_vector_json(const FeatureVector& fv) {
    nlohmann::ordered_json j;
    for (auto k : all_smell_kinds()) j[count_name(k)] = fv.smell_counts[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) j[std::string(kMetricNames[i])] = *metric_field(fv, i);
    j["category"] = to_string(fv.category);
    return j.dump(2) + "\n";
}

FeatureVector parse_feature_vector_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("feature json: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::BadInput, "feature json must be an object");
    FeatureVector fv;
    auto number = [&](const std::string& key) -> double {
        if (!j.contains(key)) return 0.0;
        if (!j[key].is_number()) throw Error(ErrorCode::BadInput, "feature " + key + " is not a number");
        const double v = j[key].get<double>();
        check_feature_value(key, v);
        return v;
    };
    for (auto k : all_smell_kinds()) fv.smell_counts[static_cast<std::size_t>(k)] = number(count_name(k));
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) *metric_field(fv, i) = number(std::string(kMetricNames[i]));

    if (j.contains("category")) {
        const auto c = j["category"].is_string() ? parse_app_category(j["category"].get<std::string>()) : std::nullopt;
        if (!c) throw Error(ErrorCode::BadInput, "unknown category");
        fv.category = *c;
        return fv;
    }
    int hot = 0;
    for (auto c : all_app_categories()) {
        if (number(category_name(c)) == 1.0) {
            fv.category = c;
            ++hot;
        }
    }
    if (hot != 1) throw Error(ErrorCode::BadInput, "category one-hot must have exactly one 1");
    return fv;
}

std::vector<LabeledExample> parse_bench_csv(std::string_view content) {
    const auto table = text::parse_csv(content);
    std::vector<std::string> expected{"app", "category", "kind"};
    for (auto k : all_smell_kinds()) expected.push_back(count_name(k));
    for (auto m : kMetricNames) expected.emplace_back(m);
    expected.emplace_back("dcpu_pct");
    expected.emplace_back("dmem_pct");
    if (table.header != expected)
        throw Error(ErrorCode::SchemaMismatch, "bench header must be: " + text::join(expected, ","));

    std::vector<LabeledExample> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        const auto where = "bench row at line " + std::to_string(table.row_lines[i]);
        if (f.size() != expected.size()) throw Error(ErrorCode::SchemaMismatch, where + " has wrong field count");
        LabeledExample e;
        e.app = std::string(text::trim(f[0]));
        const auto cat = parse_app_category(text::trim(f[1]));
        const auto kind = parse_smell_kind(text::trim(f[2]));
        if (!cat || !kind) throw Error(ErrorCode::SchemaMismatch, where + ": unknown category or kind");
        e.features.category = *cat;
        e.kind = *kind;
        std::size_t col = 3;
        for (auto k : all_smell_kinds()) {
            const double v = text::parse_double(f[col++]);
            check_feature_value(count_name(k), v);
            e.features.smell_counts[static_cast<std::size_t>(k)] = v;
        }
        for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
            const double v = text::parse_double(f[col++]);
            check_feature_value(std::string(kMetricNames[m]), v);
            *metric_field(e.features, m) = v;
        }
        e.target_dcpu_pct = text::parse_double(f[col++]);
        e.target_dmem_pct = text::parse_double(f[col++]);
        if (!std::isfinite(e.target_dcpu_pct) || !std::isfinite(e.target_dmem_pct))
            throw Error(ErrorCode::NonFiniteTarget, where);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<LabeledExample> load_bench_csv(const std::filesystem::path& path) {
    return parse_bench_csv(text::read_file(path));
}

std::string export_bench_csv(const std::vector<LabeledExample>& examples) {
    std::vector<std::string> header{"app", "category", "kind"};
    for (auto k : all_smell_kinds()) header.push_back(count_name(k));
    for (auto m : kMetricNames) header.emplace_back(m);
    header.emplace_back("dcpu_pct");
    header.emplace_back("dmem_pct");
    std::string out = text::join(header, ",") + "\n";
    for (const auto& e : examples) {
        std::vector<std::string> row{e.app, std::string(to_string(e.features.category)), std::string(to_string(e.kind))};
        for (double c : e.features.smell_counts) row.push_back(text::format_double(c));
        for (std::size_t m = 0; m < kMetricNames.size(); ++m) row.push_back(text::format_double(*metric_field(e.features, m)));
        row.push_back(text::format_double(e.target_dcpu_pct));
        row.push_back(text::format_double(e.target_dmem_pct));
        out += text::csv_line(row);
    }
    return out;
}

std::string_view to_string(Target target) noexcept { return target == Target::Cpu ? "cpu" : "memory"; }

std::optional<Target> parse_target(std::string_view text) noexcept {
    if (text == "cpu") return Target::Cpu;
    if (text == "memory" || text == "mem") return Target::Memory;
    return std::nullopt;
}

Dataset make_dataset(const std::vector<LabeledExample>& examples, Target target,
                     const std::vector<std::string>& features) {
    Dataset d;
    d.features = features.empty() ? feature_names() : features;
    d.x.resize(static_cast<Eigen::Index>(examples.size()), static_cast<Eigen::Index>(d.features.size()));
    d.y.resize(static_cast<Eigen::Index>(examples.size()));
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const auto m = examples[i].features.to_map();
        for (std::size_t j = 0; j < d.features.size(); ++j) {
            const auto it = m.find(d.features[j]);
            if (it == m.end()) throw Error(ErrorCode::MissingFeature, d.features[j]);
            d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = it->second;
        }
        d.y(static_cast<Eigen::Index>(i)) =
            target == Target::Cpu ? examples[i].target_dcpu_pct : examples[i].target_dmem_pct;
    }
    return d;
}

Dataset Dataset::select(const std::vector<bool>& mask) const {
    Dataset d;
    d.y = y;
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < features.size() && j < mask.size(); ++j)
        if (mask[j]) {
            d.features.push_back(features[j]);
            cols.push_back(static_cast<Eigen::Index>(j));
        }
    d.x.resize(x.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) d.x.col(static_cast<Eigen::Index>(c)) = x.col(cols[c]);
    return d;
}

Dataset Dataset::rows(const std::vector<std::size_t>& index) const {
    Dataset d;
    d.features = features;
    d.x.resize(static_cast<Eigen::Index>(index.size()), x.cols());
    d.y.resize(static_cast<Eigen::Index>(index.size()));
    for (std::size_t r = 0; r < index.size(); ++r) {
        d.x.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(index[r]));
        d.y(static_cast<Eigen::Index>(r)) = y(static_cast<Eigen::Index>(index[r]));
    }
    return d;
}

}  // namespace smellwatt
