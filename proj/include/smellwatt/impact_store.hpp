#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smellwatt/catalog.hpp"

namespace smellwatt {

enum class AppCategory : int {
    EmailClient = 0,
    Testing,
    Editor,
    ProjectManagement,
    Parser,
    Cloud,
    ErrorLogging,
    MachineLearning,
    ApiIntegrator,
    WebServer,
    CodeAnalyzer,
    WebFramework,
};

inline constexpr std::size_t kAppCategoryCount = 12;

const std::array<AppCategory, kAppCategoryCount>& all_app_categories() noexcept;
std::string_view to_string(AppCategory category) noexcept;
std::optional<AppCategory> parse_app_category(std::string_view text) noexcept;

/// One application's measured impact of refactoring one smell kind in
/// isolation. Deltas follow the "positive = resource reduced" convention.
/// Any numeric cell may be absent (null); absent cells are skipped by the
/// aggregates.
struct ImpactRecord {
    std::string app;
    AppCategory category = AppCategory::EmailClient;
    SmellKind kind = SmellKind::CyclicDependency;
    long instance_count = 0;
    std::optional<double> dcpu_total_pct;
    std::optional<double> dmem_total_pct;
    std::optional<double> dcpu_per_instance;
    std::optional<double> dmem_per_instance;

    bool operator==(const ImpactRecord&) const = default;
};

class ImpactDataset {
public:
    ImpactDataset() = default;

    /// Validates every record; throws InvariantViolation / DuplicateKey.
    explicit ImpactDataset(std::vector<ImpactRecord> records);

    [[nodiscard]] const std::vector<ImpactRecord>& records() const noexcept { return records_; }
    [[nodiscard]] bool empty() const noexcept { return records_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }

    [[nodiscard]] const ImpactRecord* find(std::string_view app, SmellKind kind) const noexcept;
    [[nodiscard]] std::optional<AppCategory> category_of(std::string_view app) const noexcept;
    /// Distinct app names in first-appearance order.
    [[nodiscard]] std::vector<std::string> apps() const;

    bool operator==(const ImpactDataset&) const = default;

private:
    std::vector<ImpactRecord> records_;
};

inline constexpr std::string_view kImpactCsvHeader =
    "app,category,kind,instance_count,dcpu_total_pct,dmem_total_pct,dcpu_per_instance,dmem_per_instance";

ImpactDataset parse_impact_csv(std::string_view content);
ImpactDataset ingest_impact_csv(const std::filesystem::path& path);
std::string export_impact_csv(const ImpactDataset& dataset);

/// Checks the per-record invariants; throws InvariantViolation.
void validate_record(const ImpactRecord& record);

enum class BatchMode { All, Improving, Worsening };

std::string_view to_string(BatchMode mode) noexcept;
std::optional<BatchMode> parse_batch_mode(std::string_view text) noexcept;

struct BatchRecord {
    std::string app;
    BatchMode mode = BatchMode::All;
    std::vector<SmellKind> kinds;  // sorted, unique
    std::optional<double> dcpu_total_pct;
    std::optional<double> dmem_total_pct;

    bool operator==(const BatchRecord&) const = default;
};

/// IMPROVING: every kind has a CPU direction of IMPROVES.
/// WORSENING: every kind worsens at least one resource.
bool mode_consistent(BatchMode mode, const std::vector<SmellKind>& kinds) noexcept;
void validate_batch(const BatchRecord& batch);

inline constexpr std::string_view kBatchCsvHeader = "app,mode,kinds,dcpu_total_pct,dmem_total_pct";

std::vector<BatchRecord> parse_batch_csv(std::string_view content);
std::vector<BatchRecord> ingest_batch_csv(const std::filesystem::path& path);
std::string export_batch_csv(const std::vector<BatchRecord>& batches);

struct AdditivityRow {
    std::string app;
    BatchMode mode = BatchMode::All;
    std::vector<SmellKind> kinds;
    std::optional<double> predicted_cpu;  // sum of the individual totals
    std::optional<double> observed_cpu;
    std::optional<double> deviation_cpu;  // |predicted - observed|
    std::optional<double> predicted_mem;
    std::optional<double> observed_mem;
    std::optional<double> deviation_mem;
};

struct DeviationSummary {
    BatchMode mode = BatchMode::All;
    Resource resource = Resource::Cpu;
    std::size_t app_count = 0;
    double mean_deviation = 0.0;
    double min_deviation = 0.0;
    double max_deviation = 0.0;
    std::string min_app;
    std::string max_app;
};

struct AdditivityReport {
    std::vector<AdditivityRow> rows;         // batch order
    std::vector<DeviationSummary> summaries;  // one per (mode, resource) with data
};

AdditivityReport additivity_report(const ImpactDataset& dataset, const std::vector<BatchRecord>& batches);

/// Summary for one (mode, resource); nullopt if no row carries that deviation.
std::optional<DeviationSummary> find_summary(const AdditivityReport& report, BatchMode mode,
                                             Resource resource) noexcept;

struct CategoryImpact {
    AppCategory category = AppCategory::EmailClient;
    SmellKind kind = SmellKind::CyclicDependency;
    std::size_t app_count = 0;
    std::optional<double> mean_dcpu_per_instance;
    std::optional<double> mean_dmem_per_instance;
    long total_instances = 0;
    std::optional<double> total_dcpu_pct;
    std::optional<double> total_dmem_pct;
};

CategoryImpact category_profile(const ImpactDataset& dataset, AppCategory category, SmellKind kind);

struct BatchExtreme {
    std::string app;
    double value = 0.0;
};

/// Largest / smallest observed batch delta among batches of `mode`;
/// ties resolve to the first batch in input order. Throws NoData.
BatchExtreme batch_max(const std::vector<BatchRecord>& batches, BatchMode mode, Resource resource);
BatchExtreme batch_min(const std::vector<BatchRecord>& batches, BatchMode mode, Resource resource);

}  // namespace smellwatt
