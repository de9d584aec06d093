#include "smellwatt/advisor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <json.hpp>

#include "smellwatt/error.hpp"
#include "smellwatt/text.hpp"

namespace smellwatt {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string upper_snake(std::string_view text) {
    std::string out;
    for (char c : text) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::optional<double> mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

bool opposite(const std::optional<double>& a, const std::optional<double>& b) {
    return a && b && ((*a > 0 && *b < 0) || (*a < 0 && *b > 0));
}

std::optional<double> scaled(const std::optional<double>& v, long count) {
    if (!v) return std::nullopt;
    return *v * static_cast<double>(count);
}

void accumulate(std::optional<double>& total, const std::optional<double>& v) {
    if (v) total = total.value_or(0.0) + *v;
}

std::string direction_reason(ImpactDirection cpu, ImpactDirection mem) {
    if (cpu == ImpactDirection::Worsens && mem == ImpactDirection::Worsens) return std::string(kReasonWorsensBoth);
    if (mem == ImpactDirection::Worsens) return std::string(kReasonWorsensMemory);
    if (cpu == ImpactDirection::Worsens) return std::string(kReasonWorsensCpu);
    return "MIXED-UNKNOWN catalog direction";
}

std::string fmt(const std::optional<double>& v, int decimals = 4) {
    return v ? text::format_fixed(*v, decimals) : "n/a";
}

std::string rationale_for(const PlanEntry& e) {
    std::string r = std::string(to_string(e.kind)) + " x" + std::to_string(e.count) + ": CPU " +
                    std::string(to_string(e.cpu_direction)) + ", memory " + std::string(to_string(e.mem_direction));
    r += "; additive dCPU " + fmt(e.additive.dcpu_pct) + "%";
    if (e.additive.cpu_origin) r += " (" + std::string(to_string(*e.additive.cpu_origin)) + ")";
    r += ", dMem " + fmt(e.additive.dmem_pct) + "%";
    if (e.additive.mem_origin) r += " (" + std::string(to_string(*e.additive.mem_origin)) + ")";
    if (e.model) r += "; model dCPU " + fmt(e.model->dcpu_pct) + "%, dMem " + fmt(e.model->dmem_pct) + "%";
    if (e.sign_conflict) r += "; model and additive estimate disagree in sign";
    return r;
}

ordered_json number_or_null(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json estimate_json(const ImpactEstimate& e) {
    ordered_json j;
    j["dcpu_pct"] = number_or_null(e.dcpu_pct);
    j["dmem_pct"] = number_or_null(e.dmem_pct);
    if (e.cpu_origin) j["cpu_origin"] = to_string(*e.cpu_origin);
    if (e.mem_origin) j["mem_origin"] = to_string(*e.mem_origin);
    return j;
}

ordered_json entry_json(const PlanEntry& e, bool excluded) {
    ordered_json j;
    j["kind"] = to_string(e.kind);
    j["count"] = e.count;
    j["cpu_direction"] = to_string(e.cpu_direction);
    j["mem_direction"] = to_string(e.mem_direction);
    j["additive"] = estimate_json(e.additive);
    j["model"] = e.model ? estimate_json(*e.model) : ordered_json(nullptr);
    j["sign_conflict"] = e.sign_conflict;
    if (excluded) j["reason"] = e.reason;
    j["rationale"] = e.rationale;
    return j;
}

std::string md_cell(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::string csv_number(const std::optional<double>& v) { return v ? text::format_double(*v) : ""; }

const std::string kPlotHeader = "dcpu,dmem,kind,app\n";

}  // namespace

std::string_view to_string(ObjectiveMode mode) noexcept {
    switch (mode) {
        case ObjectiveMode::MinimizeBoth: return "MINIMIZE_BOTH";
        case ObjectiveMode::CpuOnly: return "CPU_ONLY";
        case ObjectiveMode::MemoryOnly: return "MEMORY_ONLY";
        case ObjectiveMode::MaintainabilityFirst: return "MAINTAINABILITY_FIRST";
    }
    return "MINIMIZE_BOTH";
}

std::optional<ObjectiveMode> parse_objective_mode(std::string_view text) noexcept {
    const auto t = upper_snake(text);
    for (auto m : {ObjectiveMode::MinimizeBoth, ObjectiveMode::CpuOnly, ObjectiveMode::MemoryOnly,
                   ObjectiveMode::MaintainabilityFirst})
        if (t == to_string(m)) return m;
    return std::nullopt;
}

std::string_view to_string(EstimateOrigin origin) noexcept {
    switch (origin) {
        case EstimateOrigin::App: return "app";
        case EstimateOrigin::Category: return "category";
        case EstimateOrigin::Overall: return "overall";
        case EstimateOrigin::Model: return "model";
    }
    return "overall";
}

ImpactEstimate per_instance_impact(const ImpactDataset& dataset, SmellKind kind, std::string_view app,
                                   std::optional<AppCategory> category) {
    ImpactEstimate out;
    if (!app.empty()) {
        if (const auto* r = dataset.find(app, kind)) {
            if (r->dcpu_per_instance) {
                out.dcpu_pct = r->dcpu_per_instance;
                out.cpu_origin = EstimateOrigin::App;
            }
            if (r->dmem_per_instance) {
                out.dmem_pct = r->dmem_per_instance;
                out.mem_origin = EstimateOrigin::App;
            }
        }
        if (!category) category = dataset.category_of(app);
    }
    if (category && (!out.dcpu_pct || !out.dmem_pct)) {
        const auto p = category_profile(dataset, *category, kind);
        if (!out.dcpu_pct && p.mean_dcpu_per_instance) {
            out.dcpu_pct = p.mean_dcpu_per_instance;
            out.cpu_origin = EstimateOrigin::Category;
        }
        if (!out.dmem_pct && p.mean_dmem_per_instance) {
            out.dmem_pct = p.mean_dmem_per_instance;
            out.mem_origin = EstimateOrigin::Category;
        }
    }
    if (!out.dcpu_pct || !out.dmem_pct) {
        std::vector<double> cpu, mem;
        for (const auto& r : dataset.records()) {
            if (r.kind != kind) continue;
            if (r.dcpu_per_instance) cpu.push_back(*r.dcpu_per_instance);
            if (r.dmem_per_instance) mem.push_back(*r.dmem_per_instance);
        }
        if (!out.dcpu_pct && (out.dcpu_pct = mean_of(cpu))) out.cpu_origin = EstimateOrigin::Overall;
        if (!out.dmem_pct && (out.dmem_pct = mean_of(mem))) out.mem_origin = EstimateOrigin::Overall;
    }
    return out;
}

RefactoringPlan plan_batch(const std::vector<SmellInstance>& inventory, const ImpactSource& source,
                           const Objective& objective) {
    return plan_batch(count_by_kind(inventory), source, objective);
}

RefactoringPlan plan_batch(const std::map<SmellKind, long>& counts, const ImpactSource& source,
                           const Objective& objective) {
    long total = 0;
    for (const auto& [kind, n] : counts) {
        if (n < 0) throw Error(ErrorCode::BadInput, "negative instance count for " + std::string(to_string(kind)));
        total += n;
    }
    if (total == 0) throw Error(ErrorCode::EmptyInventory, "no smell instances to plan for");
    const bool have_dataset = source.dataset && !source.dataset->empty();
    if (!have_dataset && source.models.empty())
        throw Error(ErrorCode::NoImpactSource, "supply an impact dataset or a trained model");
    if (!source.models.empty() && !source.features)
        throw Error(ErrorCode::BadInput, "model predictions need the application's feature vector");
    if (objective.budget && (!std::isfinite(*objective.budget) || *objective.budget < 0))
        throw Error(ErrorCode::BadInput, "budget must be a finite value >= 0");

    RefactoringPlan plan;
    plan.objective = objective;
    plan.app = source.app;
    const auto feature_map = source.features ? source.features->to_map() : std::map<std::string, double>{};
    const auto category = source.category ? source.category
                                          : (source.features ? std::optional(source.features->category) : std::nullopt);

    for (auto kind : all_smell_kinds()) {
        const auto it = counts.find(kind);
        if (it == counts.end() || it->second == 0) continue;
        PlanEntry e;
        e.kind = kind;
        e.count = it->second;
        e.cpu_direction = expected_direction(kind, Resource::Cpu);
        e.mem_direction = expected_direction(kind, Resource::Memory);

        if (have_dataset) {
            const auto per = per_instance_impact(*source.dataset, kind, source.app, category);
            e.additive = per;
            e.additive.dcpu_pct = scaled(per.dcpu_pct, e.count);
            e.additive.dmem_pct = scaled(per.dmem_pct, e.count);
        }
        if (const auto m = source.models.find(kind); m != source.models.end()) {
            ImpactEstimate est;
            if (m->second.cpu) {
                est.dcpu_pct = predict(*m->second.cpu, feature_map) * static_cast<double>(e.count);
                est.cpu_origin = EstimateOrigin::Model;
            }
            if (m->second.memory) {
                est.dmem_pct = predict(*m->second.memory, feature_map) * static_cast<double>(e.count);
                est.mem_origin = EstimateOrigin::Model;
            }
            e.model = est;
        }
        if (e.model)
            e.sign_conflict = opposite(e.model->dcpu_pct, e.additive.dcpu_pct) ||
                              opposite(e.model->dmem_pct, e.additive.dmem_pct);

        const auto best_dmem = e.model && e.model->dmem_pct ? e.model->dmem_pct : e.additive.dmem_pct;
        const bool cpu_ok = e.cpu_direction == ImpactDirection::Improves;
        const bool mem_ok = e.mem_direction == ImpactDirection::Improves;
        switch (objective.mode) {
            case ObjectiveMode::MaintainabilityFirst: break;
            case ObjectiveMode::MinimizeBoth:
                if (!cpu_ok || !mem_ok) e.reason = direction_reason(e.cpu_direction, e.mem_direction);
                break;
            case ObjectiveMode::CpuOnly:
                if (!cpu_ok)
                    e.reason = direction_reason(e.cpu_direction, e.mem_direction);
                else if (!mem_ok && objective.budget && best_dmem && -*best_dmem > *objective.budget)
                    e.reason = std::string(kReasonOverBudget);
                break;
            case ObjectiveMode::MemoryOnly:
                if (!mem_ok) e.reason = direction_reason(e.cpu_direction, e.mem_direction);
                break;
        }
        if (e.reason.empty() && e.sign_conflict && objective.mode != ObjectiveMode::MaintainabilityFirst)
            e.reason = std::string(kReasonSignConflict);

        e.rationale = rationale_for(e);
        if (objective.mode == ObjectiveMode::MaintainabilityFirst)
            e.rationale += "; included for maintainability, predicted cost above";
        (e.reason.empty() ? plan.include : plan.exclude).push_back(std::move(e));
    }

    for (const auto& e : plan.include) {
        accumulate(plan.additive_total.dcpu_pct, e.additive.dcpu_pct);
        accumulate(plan.additive_total.dmem_pct, e.additive.dmem_pct);
        if (e.model) {
            if (!plan.model_total) plan.model_total = ImpactEstimate{};
            accumulate(plan.model_total->dcpu_pct, e.model->dcpu_pct);
            accumulate(plan.model_total->dmem_pct, e.model->dmem_pct);
        }
    }
    return plan;
}

std::string_view to_string(ReportFormat format) noexcept {
    switch (format) {
        case ReportFormat::Json: return "json";
        case ReportFormat::Markdown: return "markdown";
        case ReportFormat::CsvPlotdata: return "csv-plotdata";
    }
    return "json";
}

ReportFormat parse_report_format(std::string_view text) {
    for (auto f : {ReportFormat::Json, ReportFormat::Markdown, ReportFormat::CsvPlotdata})
        if (text == to_string(f)) return f;
    if (text == "md") return ReportFormat::Markdown;
    throw Error(ErrorCode::UnsupportedFormat, std::string(text) + " (expected json, markdown or csv-plotdata)");
}

std::string emit_report(const RefactoringPlan& plan, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: {
            ordered_json j;
            j["objective"]["mode"] = to_string(plan.objective.mode);
            j["objective"]["budget"] = number_or_null(plan.objective.budget);
            j["app"] = plan.app;
            j["include"] = ordered_json::array();
            for (const auto& e : plan.include) j["include"].push_back(entry_json(e, false));
            j["exclude"] = ordered_json::array();
            for (const auto& e : plan.exclude) j["exclude"].push_back(entry_json(e, true));
            j["additive_total"] = estimate_json(plan.additive_total);
            j["model_total"] = plan.model_total ? estimate_json(*plan.model_total) : ordered_json(nullptr);
            return j.dump(2) + "\n";
        }
        case ReportFormat::Markdown: {
            std::string out = "# Refactoring plan\n\n";
            out += "- Objective: " + std::string(to_string(plan.objective.mode));
            if (plan.objective.budget) out += " (memory budget " + text::format_double(*plan.objective.budget) + "%)";
            out += "\n";
            if (!plan.app.empty()) out += "- Application: " + md_cell(plan.app) + "\n";
            out += "\n## Include\n\n| kind | count | CPU | memory | additive dCPU % | additive dMem % | model dCPU % | model dMem % |\n";
            out += "|---|---:|---|---|---:|---:|---:|---:|\n";
            for (const auto& e : plan.include)
                out += "| " + std::string(to_string(e.kind)) + " | " + std::to_string(e.count) + " | " +
                       std::string(to_string(e.cpu_direction)) + " | " + std::string(to_string(e.mem_direction)) +
                       " | " + fmt(e.additive.dcpu_pct) + " | " + fmt(e.additive.dmem_pct) + " | " +
                       fmt(e.model ? e.model->dcpu_pct : std::nullopt) + " | " +
                       fmt(e.model ? e.model->dmem_pct : std::nullopt) + " |\n";
            out += "\n## Exclude\n\n| kind | count | reason | additive dCPU % | additive dMem % |\n";
            out += "|---|---:|---|---:|---:|\n";
            for (const auto& e : plan.exclude)
                out += "| " + std::string(to_string(e.kind)) + " | " + std::to_string(e.count) + " | " +
                       md_cell(e.reason) + " | " + fmt(e.additive.dcpu_pct) + " | " + fmt(e.additive.dmem_pct) + " |\n";
            out += "\n## Predicted deltas\n\n";
            out += "- Additive estimate: dCPU " + fmt(plan.additive_total.dcpu_pct) + "%, dMem " +
                   fmt(plan.additive_total.dmem_pct) + "%\n";
            if (plan.model_total)
                out += "- Model prediction: dCPU " + fmt(plan.model_total->dcpu_pct) + "%, dMem " +
                       fmt(plan.model_total->dmem_pct) + "%\n";
            out += "\n## Rationale\n\n";
            for (auto kind : all_smell_kinds()) {
                for (const auto* list : {&plan.include, &plan.exclude})
                    for (const auto& e : *list)
                        if (e.kind == kind) out += "- " + md_cell(e.rationale) + "\n";
            }
            return out;
        }
        case ReportFormat::CsvPlotdata: {
            std::string out = kPlotHeader;
            for (auto kind : all_smell_kinds())
                for (const auto* list : {&plan.include, &plan.exclude})
                    for (const auto& e : *list)
                        if (e.kind == kind)
                            out += text::csv_line({csv_number(e.additive.dcpu_pct), csv_number(e.additive.dmem_pct),
                                                   std::string(to_string(kind)), plan.app});
            return out;
        }
    }
    throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string emit_report(const ImpactDataset& dataset, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: {
            auto j = ordered_json::array();
            for (const auto& r : dataset.records()) {
                ordered_json o;
                o["app"] = r.app;
                o["category"] = to_string(r.category);
                o["kind"] = to_string(r.kind);
                o["instance_count"] = r.instance_count;
                o["dcpu_total_pct"] = number_or_null(r.dcpu_total_pct);
                o["dmem_total_pct"] = number_or_null(r.dmem_total_pct);
                o["dcpu_per_instance"] = number_or_null(r.dcpu_per_instance);
                o["dmem_per_instance"] = number_or_null(r.dmem_per_instance);
                j.push_back(std::move(o));
            }
            return j.dump(2) + "\n";
        }
        case ReportFormat::Markdown: {
            std::string out = "# Impact dataset\n\n| app | category | kind | instances | dCPU % | dMem % | dCPU/instance | dMem/instance |\n";
            out += "|---|---|---|---:|---:|---:|---:|---:|\n";
            for (const auto& r : dataset.records())
                out += "| " + md_cell(r.app) + " | " + std::string(to_string(r.category)) + " | " +
                       std::string(to_string(r.kind)) + " | " + std::to_string(r.instance_count) + " | " +
                       fmt(r.dcpu_total_pct, 3) + " | " + fmt(r.dmem_total_pct, 3) + " | " +
                       fmt(r.dcpu_per_instance, 5) + " | " + fmt(r.dmem_per_instance, 5) + " |\n";
            return out;
        }
        case ReportFormat::CsvPlotdata: {
            std::string out = kPlotHeader;
            for (const auto& r : dataset.records())
                out += text::csv_line({csv_number(r.dcpu_total_pct), csv_number(r.dmem_total_pct),
                                       std::string(to_string(r.kind)), r.app});
            return out;
        }
    }
    throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string emit_report(const AdditivityReport& report, ReportFormat format) {
    auto kinds_text = [](const std::vector<SmellKind>& kinds) {
        std::vector<std::string> names;
        for (auto k : kinds) names.emplace_back(to_string(k));
        return text::join(names, ";");
    };
    switch (format) {
        case ReportFormat::Json: {
            ordered_json j;
            j["rows"] = ordered_json::array();
            for (const auto& r : report.rows) {
                ordered_json o;
                o["app"] = r.app;
                o["mode"] = to_string(r.mode);
                o["kinds"] = ordered_json::array();
                for (auto k : r.kinds) o["kinds"].push_back(to_string(k));
                o["predicted_cpu"] = number_or_null(r.predicted_cpu);
                o["observed_cpu"] = number_or_null(r.observed_cpu);
                o["deviation_cpu"] = number_or_null(r.deviation_cpu);
                o["predicted_mem"] = number_or_null(r.predicted_mem);
                o["observed_mem"] = number_or_null(r.observed_mem);
                o["deviation_mem"] = number_or_null(r.deviation_mem);
                j["rows"].push_back(std::move(o));
            }
            j["summaries"] = ordered_json::array();
            for (const auto& s : report.summaries) {
                ordered_json o;
                o["mode"] = to_string(s.mode);
                o["resource"] = to_string(s.resource);
                o["app_count"] = s.app_count;
                o["mean_deviation"] = s.mean_deviation;
                o["min_deviation"] = s.min_deviation;
                o["min_app"] = s.min_app;
                o["max_deviation"] = s.max_deviation;
                o["max_app"] = s.max_app;
                j["summaries"].push_back(std::move(o));
            }
            return j.dump(2) + "\n";
        }
        case ReportFormat::Markdown: {
            std::string out = "# Additivity\n\n| app | mode | predicted dCPU % | observed dCPU % | deviation | predicted dMem % | observed dMem % | deviation |\n";
            out += "|---|---|---:|---:|---:|---:|---:|---:|\n";
            for (const auto& r : report.rows)
                out += "| " + md_cell(r.app) + " | " + std::string(to_string(r.mode)) + " | " + fmt(r.predicted_cpu, 2) +
                       " | " + fmt(r.observed_cpu, 2) + " | " + fmt(r.deviation_cpu, 2) + " | " +
                       fmt(r.predicted_mem, 2) + " | " + fmt(r.observed_mem, 2) + " | " + fmt(r.deviation_mem, 2) + " |\n";
            out += "\n## Deviation summary\n\n| mode | resource | apps | mean | min | max |\n|---|---|---:|---:|---:|---:|\n";
            for (const auto& s : report.summaries)
                out += "| " + std::string(to_string(s.mode)) + " | " + std::string(to_string(s.resource)) + " | " +
                       std::to_string(s.app_count) + " | " + text::format_fixed(s.mean_deviation, 2) + " | " +
                       text::format_fixed(s.min_deviation, 2) + " (" + md_cell(s.min_app) + ") | " +
                       text::format_fixed(s.max_deviation, 2) + " (" + md_cell(s.max_app) + ") |\n";
            return out;
        }
        case ReportFormat::CsvPlotdata: {
            std::string out = kPlotHeader;
            for (const auto& r : report.rows)
                out += text::csv_line({csv_number(r.observed_cpu), csv_number(r.observed_mem), kinds_text(r.kinds), r.app});
            return out;
        }
    }
    throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

}  // namespace smellwatt
