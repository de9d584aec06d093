#include "smellwatt/impact_store.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "smellwatt/error.hpp"
#include "smellwatt/text.hpp"

namespace smellwatt {

namespace {

constexpr std::array<std::string_view, kAppCategoryCount> kCategoryNames{
    "email-client", "testing", "editor",  "project-management", "parser",        "cloud",
    "error-logging", "machine-learning", "api-integrator", "web-server", "code-analyzer", "web-framework",
};

constexpr std::array<AppCategory, kAppCategoryCount> kAllCategories{
    AppCategory::EmailClient,  AppCategory::Testing,         AppCategory::Editor,
    AppCategory::ProjectManagement, AppCategory::Parser,     AppCategory::Cloud,
    AppCategory::ErrorLogging, AppCategory::MachineLearning, AppCategory::ApiIntegrator,
    AppCategory::WebServer,    AppCategory::CodeAnalyzer,    AppCategory::WebFramework,
};

constexpr double kPerInstanceTolerance = 1e-9;

std::optional<double> optional_number(std::string_view field) {
    field = text::trim(field);
    if (field.empty() || field == "null" || field == "NA") return std::nullopt;
    return text::parse_double(field);
}

std::string format_optional(const std::optional<double>& v) {
    return v ? text::format_double(*v) : std::string{};
}

void require_header(const text::CsvTable& table, std::string_view expected) {
    const auto want = text::split(expected, ',');
    std::vector<std::string> got;
    for (const auto& h : table.header) got.emplace_back(text::trim(h));
    if (got != want)
        throw Error(ErrorCode::SchemaMismatch,
                    "expected header '" + std::string(expected) + "', got '" + text::join(got, ",") + "'");
}

std::string row_label(const text::CsvTable& table, std::size_t i) {
    return "row at line " + std::to_string(table.row_lines[i]);
}

bool finite_or_empty(const std::optional<double>& v) { return !v || std::isfinite(*v); }

std::optional<double> batch_value(const BatchRecord& b, Resource r) {
    return r == Resource::Cpu ? b.dcpu_total_pct : b.dmem_total_pct;
}

}  // namespace

const std::array<AppCategory, kAppCategoryCount>& all_app_categories() noexcept { return kAllCategories; }

std::string_view to_string(AppCategory category) noexcept {
    return kCategoryNames[static_cast<std::size_t>(category)];
}

std::optional<AppCategory> parse_app_category(std::string_view text) noexcept {
    for (std::size_t i = 0; i < kAppCategoryCount; ++i)
        if (kCategoryNames[i] == text) return static_cast<AppCategory>(i);
    return std::nullopt;
}

void validate_record(const ImpactRecord& r) {
    const std::string where = "(" + r.app + ", " + std::string(to_string(r.kind)) + ")";
    if (r.app.empty()) throw Error(ErrorCode::InvariantViolation, "empty app name");
    if (r.instance_count < 0) throw Error(ErrorCode::InvariantViolation, where + " negative instance_count");
    if (!finite_or_empty(r.dcpu_total_pct) || !finite_or_empty(r.dmem_total_pct) ||
        !finite_or_empty(r.dcpu_per_instance) || !finite_or_empty(r.dmem_per_instance))
        throw Error(ErrorCode::InvariantViolation, where + " non-finite value");
    if (r.instance_count == 0) {
        if (r.dcpu_per_instance || r.dmem_per_instance)
            throw Error(ErrorCode::InvariantViolation, where + " per-instance value with zero instances");
        return;
    }
    auto check = [&](const std::optional<double>& per, const std::optional<double>& total, const char* what) {
        if (!per || !total) return;
        const double product = *per * static_cast<double>(r.instance_count);
        if (std::abs(product - *total) > kPerInstanceTolerance * std::max(1.0, std::abs(*total)))
            throw Error(ErrorCode::InvariantViolation,
                        where + " " + what + " per_instance x count = " + text::format_double(product) +
                            " but total = " + text::format_double(*total));
    };
    check(r.dcpu_per_instance, r.dcpu_total_pct, "cpu");
    check(r.dmem_per_instance, r.dmem_total_pct, "memory");
}

ImpactDataset::ImpactDataset(std::vector<ImpactRecord> records) : records_(std::move(records)) {
    std::set<std::pair<std::string, SmellKind>> seen;
    for (const auto& r : records_) {
        validate_record(r);
        if (!seen.emplace(r.app, r.kind).second)
            throw Error(ErrorCode::DuplicateKey, r.app + ", " + std::string(to_string(r.kind)));
    }
    for (const auto& r : records_) {
        const auto cat = category_of(r.app);
        if (cat && *cat != r.category)
            throw Error(ErrorCode::InvariantViolation, r.app + " listed under more than one category");
    }
}

const ImpactRecord* ImpactDataset::find(std::string_view app, SmellKind kind) const noexcept {
    for (const auto& r : records_)
        if (r.app == app && r.kind == kind) return &r;
    return nullptr;
}

std::optional<AppCategory> ImpactDataset::category_of(std::string_view app) const noexcept {
    for (const auto& r : records_)
        if (r.app == app) return r.category;
    return std::nullopt;
}

std::vector<std::string> ImpactDataset::apps() const {
    std::vector<std::string> out;
    for (const auto& r : records_)
        if (std::find(out.begin(), out.end(), r.app) == out.end()) out.push_back(r.app);
    return out;
}

ImpactDataset parse_impact_csv(std::string_view content) {
    const auto table = text::parse_csv(content);
    require_header(table, kImpactCsvHeader);
    std::vector<ImpactRecord> records;
    records.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        if (f.size() != 8) throw Error(ErrorCode::SchemaMismatch, row_label(table, i) + " has wrong field count");
        try {
            ImpactRecord r;
            r.app = std::string(text::trim(f[0]));
            const auto cat = parse_app_category(text::trim(f[1]));
            if (!cat) throw Error(ErrorCode::InvariantViolation, "unknown category '" + f[1] + "'");
            r.category = *cat;
            const auto kind = parse_smell_kind(text::trim(f[2]));
            if (!kind) throw Error(ErrorCode::InvariantViolation, "unknown smell kind '" + f[2] + "'");
            r.kind = *kind;
            r.instance_count = static_cast<long>(text::parse_int(f[3]));
            r.dcpu_total_pct = optional_number(f[4]);
            r.dmem_total_pct = optional_number(f[5]);
            r.dcpu_per_instance = optional_number(f[6]);
            r.dmem_per_instance = optional_number(f[7]);
            validate_record(r);
            records.push_back(std::move(r));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::BadInput)
                throw Error(ErrorCode::InvariantViolation, row_label(table, i) + ": " + e.what());
            if (e.code() == ErrorCode::InvariantViolation)
                throw Error(ErrorCode::InvariantViolation, row_label(table, i) + ": " + e.what());
            throw;
        }
    }
    return ImpactDataset(std::move(records));
}

ImpactDataset ingest_impact_csv(const std::filesystem::path& path) {
    return parse_impact_csv(text::read_file(path));
}

std::string export_impact_csv(const ImpactDataset& dataset) {
    std::string out(kImpactCsvHeader);
    out += '\n';
    for (const auto& r : dataset.records()) {
        out += text::csv_line({r.app, std::string(to_string(r.category)), std::string(to_string(r.kind)),
                               std::to_string(r.instance_count), format_optional(r.dcpu_total_pct),
                               format_optional(r.dmem_total_pct), format_optional(r.dcpu_per_instance),
                               format_optional(r.dmem_per_instance)});
    }
    return out;
}

std::string_view to_string(BatchMode mode) noexcept {
    switch (mode) {
        case BatchMode::All: return "ALL";
        case BatchMode::Improving: return "IMPROVING";
        case BatchMode::Worsening: return "WORSENING";
    }
    return "ALL";
}

std::optional<BatchMode> parse_batch_mode(std::string_view text) noexcept {
    for (auto m : {BatchMode::All, BatchMode::Improving, BatchMode::Worsening}) {
        const auto name = to_string(m);
        if (text.size() == name.size() &&
            std::equal(text.begin(), text.end(), name.begin(),
                       [](char a, char b) { return std::toupper(static_cast<unsigned char>(a)) == b; }))
            return m;
    }
    return std::nullopt;
}

bool mode_consistent(BatchMode mode, const std::vector<SmellKind>& kinds) noexcept {
    switch (mode) {
        case BatchMode::All: return true;
        case BatchMode::Improving:
            return std::all_of(kinds.begin(), kinds.end(), [](SmellKind k) {
                return expected_direction(k, Resource::Cpu) == ImpactDirection::Improves;
            });
        case BatchMode::Worsening:
            return std::all_of(kinds.begin(), kinds.end(), [](SmellKind k) {
                return expected_direction(k, Resource::Cpu) == ImpactDirection::Worsens ||
                       expected_direction(k, Resource::Memory) == ImpactDirection::Worsens;
            });
    }
    return false;
}

void validate_batch(const BatchRecord& b) {
    if (b.app.empty()) throw Error(ErrorCode::InvariantViolation, "batch with empty app name");
    if (b.kinds.empty()) throw Error(ErrorCode::InvariantViolation, b.app + " batch has no kinds");
    if (!std::is_sorted(b.kinds.begin(), b.kinds.end()) ||
        std::adjacent_find(b.kinds.begin(), b.kinds.end()) != b.kinds.end())
        throw Error(ErrorCode::InvariantViolation, b.app + " batch kinds must be sorted and unique");
    if (!mode_consistent(b.mode, b.kinds))
        throw Error(ErrorCode::InvariantViolation,
                    b.app + " batch kinds inconsistent with mode " + std::string(to_string(b.mode)));
    if (!finite_or_empty(b.dcpu_total_pct) || !finite_or_empty(b.dmem_total_pct))
        throw Error(ErrorCode::InvariantViolation, b.app + " batch has a non-finite value");
}

std::vector<BatchRecord> parse_batch_csv(std::string_view content) {
    const auto table = text::parse_csv(content);
    require_header(table, kBatchCsvHeader);
    std::vector<BatchRecord> out;
    std::set<std::pair<std::string, BatchMode>> seen;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        if (f.size() != 5) throw Error(ErrorCode::SchemaMismatch, row_label(table, i) + " has wrong field count");
        try {
            BatchRecord b;
            b.app = std::string(text::trim(f[0]));
            const auto mode = parse_batch_mode(text::trim(f[1]));
            if (!mode) throw Error(ErrorCode::InvariantViolation, "unknown mode '" + f[1] + "'");
            b.mode = *mode;
            for (const auto& name : text::split(f[2], ';')) {
                const auto kind = parse_smell_kind(text::trim(name));
                if (!kind) throw Error(ErrorCode::InvariantViolation, "unknown smell kind '" + name + "'");
                b.kinds.push_back(*kind);
            }
            std::sort(b.kinds.begin(), b.kinds.end());
            b.kinds.erase(std::unique(b.kinds.begin(), b.kinds.end()), b.kinds.end());
            b.dcpu_total_pct = optional_number(f[3]);
            b.dmem_total_pct = optional_number(f[4]);
            validate_batch(b);
            if (!seen.emplace(b.app, b.mode).second)
                throw Error(ErrorCode::DuplicateKey, b.app + ", " + std::string(to_string(b.mode)));
            out.push_back(std::move(b));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::BadInput || e.code() == ErrorCode::InvariantViolation)
                throw Error(ErrorCode::InvariantViolation, row_label(table, i) + ": " + e.what());
            throw;
        }
    }
    return out;
}

std::vector<BatchRecord> ingest_batch_csv(const std::filesystem::path& path) {
    return parse_batch_csv(text::read_file(path));
}

std::string export_batch_csv(const std::vector<BatchRecord>& batches) {
    std::string out(kBatchCsvHeader);
    out += '\n';
    for (const auto& b : batches) {
        std::vector<std::string> names;
        for (auto k : b.kinds) names.emplace_back(to_string(k));
        out += text::csv_line({b.app, std::string(to_string(b.mode)), text::join(names, ";"),
                               format_optional(b.dcpu_total_pct), format_optional(b.dmem_total_pct)});
    }
    return out;
}

AdditivityReport additivity_report(const ImpactDataset& dataset, const std::vector<BatchRecord>& batches) {
    AdditivityReport report;
    for (const auto& b : batches) {
        AdditivityRow row;
        row.app = b.app;
        row.mode = b.mode;
        row.kinds = b.kinds;
        double cpu_sum = 0.0, mem_sum = 0.0;
        bool cpu_complete = true, mem_complete = true;
        for (auto kind : b.kinds) {
            const auto* rec = dataset.find(b.app, kind);
            if (!rec)
                throw Error(ErrorCode::MissingIndividualRecord, b.app + ", " + std::string(to_string(kind)));
            if (rec->dcpu_total_pct) cpu_sum += *rec->dcpu_total_pct; else cpu_complete = false;
            if (rec->dmem_total_pct) mem_sum += *rec->dmem_total_pct; else mem_complete = false;
        }
        if (cpu_complete) row.predicted_cpu = cpu_sum;
        if (mem_complete) row.predicted_mem = mem_sum;
        row.observed_cpu = b.dcpu_total_pct;
        row.observed_mem = b.dmem_total_pct;
        if (row.predicted_cpu && row.observed_cpu) row.deviation_cpu = std::abs(*row.predicted_cpu - *row.observed_cpu);
        if (row.predicted_mem && row.observed_mem) row.deviation_mem = std::abs(*row.predicted_mem - *row.observed_mem);
        report.rows.push_back(std::move(row));
    }

    for (auto mode : {BatchMode::All, BatchMode::Improving, BatchMode::Worsening}) {
        for (auto resource : {Resource::Cpu, Resource::Memory}) {
            DeviationSummary s;
            s.mode = mode;
            s.resource = resource;
            double sum = 0.0;
            for (const auto& row : report.rows) {
                if (row.mode != mode) continue;
                const auto& dev = resource == Resource::Cpu ? row.deviation_cpu : row.deviation_mem;
                if (!dev) continue;
                if (s.app_count == 0 || *dev < s.min_deviation) {
                    s.min_deviation = *dev;
                    s.min_app = row.app;
                }
                if (s.app_count == 0 || *dev > s.max_deviation) {
                    s.max_deviation = *dev;
                    s.max_app = row.app;
                }
                sum += *dev;
                ++s.app_count;
            }
            if (s.app_count == 0) continue;
            s.mean_deviation = sum / static_cast<double>(s.app_count);
            report.summaries.push_back(std::move(s));
        }
    }
    return report;
}

std::optional<DeviationSummary> find_summary(const AdditivityReport& report, BatchMode mode,
                                             Resource resource) noexcept {
    for (const auto& s : report.summaries)
        if (s.mode == mode && s.resource == resource) return s;
    return std::nullopt;
}

CategoryImpact category_profile(const ImpactDataset& dataset, AppCategory category, SmellKind kind) {
    CategoryImpact out;
    out.category = category;
    out.kind = kind;
    double cpu_pi = 0.0, mem_pi = 0.0, cpu_total = 0.0, mem_total = 0.0;
    std::size_t n_cpu_pi = 0, n_mem_pi = 0, n_cpu_total = 0, n_mem_total = 0;
    for (const auto& r : dataset.records()) {
        if (r.category != category || r.kind != kind) continue;
        ++out.app_count;
        out.total_instances += r.instance_count;
        if (r.dcpu_per_instance) { cpu_pi += *r.dcpu_per_instance; ++n_cpu_pi; }
        if (r.dmem_per_instance) { mem_pi += *r.dmem_per_instance; ++n_mem_pi; }
        if (r.dcpu_total_pct) { cpu_total += *r.dcpu_total_pct; ++n_cpu_total; }
        if (r.dmem_total_pct) { mem_total += *r.dmem_total_pct; ++n_mem_total; }
    }
    if (out.app_count == 0)
        throw Error(ErrorCode::NoData, std::string(to_string(category)) + ", " + std::string(to_string(kind)));
    if (n_cpu_pi) out.mean_dcpu_per_instance = cpu_pi / static_cast<double>(n_cpu_pi);
    if (n_mem_pi) out.mean_dmem_per_instance = mem_pi / static_cast<double>(n_mem_pi);
    if (n_cpu_total) out.total_dcpu_pct = cpu_total;
    if (n_mem_total) out.total_dmem_pct = mem_total;
    return out;
}

namespace {

template <typename Better>
BatchExtreme batch_extreme(const std::vector<BatchRecord>& batches, BatchMode mode, Resource resource,
                           Better better) {
    std::optional<BatchExtreme> best;
    for (const auto& b : batches) {
        if (b.mode != mode) continue;
        const auto v = batch_value(b, resource);
        if (!v) continue;
        if (!best || better(*v, best->value)) best = BatchExtreme{b.app, *v};
    }
    if (!best)
        throw Error(ErrorCode::NoData,
                    std::string(to_string(mode)) + " batches have no " + std::string(to_string(resource)) + " values");
    return *best;
}

}  // namespace

BatchExtreme batch_max(const std::vector<BatchRecord>& batches, BatchMode mode, Resource resource) {
    return batch_extreme(batches, mode, resource, std::greater<>{});
}

BatchExtreme batch_min(const std::vector<BatchRecord>& batches, BatchMode mode, Resource resource) {
    return batch_extreme(batches, mode, resource, std::less<>{});
}

}  // namespace smellwatt
