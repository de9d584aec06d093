#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smellwatt/catalog.hpp"
#include "smellwatt/detector.hpp"
#include "smellwatt/impact_store.hpp"
#include "smellwatt/predictor.hpp"

namespace smellwatt {

enum class ObjectiveMode { MinimizeBoth, CpuOnly, MemoryOnly, MaintainabilityFirst };

std::string_view to_string(ObjectiveMode mode) noexcept;
/// Accepts MINIMIZE_BOTH, CPU_ONLY, MEMORY_ONLY, MAINTAINABILITY_FIRST
/// (case-insensitive, '-' or '_').
std::optional<ObjectiveMode> parse_objective_mode(std::string_view text) noexcept;

struct Objective {
    ObjectiveMode mode = ObjectiveMode::MinimizeBoth;
    std::optional<double> budget;  // max tolerated memory worsening in percent; CPU_ONLY only
};

/// What the plan can draw estimates from. Models are per smell kind and need
/// the application's feature vector.
struct ImpactSource {
    std::optional<ImpactDataset> dataset;
    std::map<SmellKind, ImpactModel> models;
    std::optional<FeatureVector> features;
    std::string app;
    std::optional<AppCategory> category;
};

enum class EstimateOrigin { App, Category, Overall, Model };
std::string_view to_string(EstimateOrigin origin) noexcept;

struct ImpactEstimate {
    std::optional<double> dcpu_pct;
    std::optional<double> dmem_pct;
    std::optional<EstimateOrigin> cpu_origin;
    std::optional<EstimateOrigin> mem_origin;

    bool operator==(const ImpactEstimate&) const = default;
};

struct PlanEntry {
    SmellKind kind = SmellKind::CyclicDependency;
    long count = 0;
    ImpactDirection cpu_direction = ImpactDirection::MixedUnknown;
    ImpactDirection mem_direction = ImpactDirection::MixedUnknown;
    ImpactEstimate additive;               // per-instance impact x count
    std::optional<ImpactEstimate> model;   // per-instance prediction x count
    bool sign_conflict = false;            // model and additive disagree in sign
    std::string reason;                    // exclusions only
    std::string rationale;

    bool operator==(const PlanEntry&) const = default;
};

struct RefactoringPlan {
    Objective objective;
    std::string app;
    std::vector<PlanEntry> include;  // catalog order
    std::vector<PlanEntry> exclude;  // catalog order
    ImpactEstimate additive_total;   // over included kinds
    std::optional<ImpactEstimate> model_total;
};

inline constexpr std::string_view kReasonWorsensBoth = "worsens CPU and memory";
inline constexpr std::string_view kReasonWorsensMemory = "worsens memory";
inline constexpr std::string_view kReasonWorsensCpu = "worsens CPU";
inline constexpr std::string_view kReasonSignConflict = "MIXED-UNKNOWN: model and additive estimate disagree in sign";
inline constexpr std::string_view kReasonOverBudget = "predicted memory worsening exceeds budget";

/// Per-instance (dcpu, dmem) for `kind`: the app's own record, then the
/// category mean, then the mean over every app, per resource.
ImpactEstimate per_instance_impact(const ImpactDataset& dataset, SmellKind kind, std::string_view app,
                                   std::optional<AppCategory> category);

/// Throws EmptyInventory, NoImpactSource.
RefactoringPlan plan_batch(const std::vector<SmellInstance>& inventory, const ImpactSource& source,
                           const Objective& objective);
RefactoringPlan plan_batch(const std::map<SmellKind, long>& counts, const ImpactSource& source,
                           const Objective& objective);

enum class ReportFormat { Json, Markdown, CsvPlotdata };
std::string_view to_string(ReportFormat format) noexcept;
/// Throws UnsupportedFormat.
ReportFormat parse_report_format(std::string_view text);

std::string emit_report(const RefactoringPlan& plan, ReportFormat format);
std::string emit_report(const ImpactDataset& dataset, ReportFormat format);
std::string emit_report(const AdditivityReport& report, ReportFormat format);

}  // namespace smellwatt
