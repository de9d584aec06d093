#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smellwatt/advisor.hpp"
#include "smellwatt/catalog.hpp"
#include "smellwatt/detector.hpp"
#include "smellwatt/error.hpp"
#include "smellwatt/impact_store.hpp"
#include "smellwatt/predictor.hpp"
#include "smellwatt/profiler.hpp"
#include "smellwatt/text.hpp"

using namespace smellwatt;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitProfiling = 3;

struct Globals {
    std::uint64_t seed = 42;
    std::string out;
    std::string format = "json";
};

void emit(const Globals& g, const std::string& content) {
    if (g.out.empty() || g.out == "-")
        std::cout << content;
    else
        text::write_file(g.out, content);
}

void require_json(const Globals& g) {
    if (g.format != "json") throw Error(ErrorCode::UnsupportedFormat, g.format + " (this command emits json only)");
}

template <typename T>
T parse_or_throw(const std::optional<T>& v, const std::string& what, const std::string& text) {
    if (!v) throw Error(ErrorCode::BadInput, "unknown " + what + ": " + text);
    return *v;
}

nlohmann::json read_json(const std::string& path) {
    try {
        return nlohmann::json::parse(text::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadInput, path + ": " + e.what());
    }
}

std::string prediction_json(std::optional<double> cpu, std::optional<double> mem) {
    nlohmann::ordered_json j;
    j["dcpu_pct"] = cpu ? nlohmann::ordered_json(*cpu) : nlohmann::ordered_json(nullptr);
    j["dmem_pct"] = mem ? nlohmann::ordered_json(*mem) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

std::vector<LabeledExample> filter_kind(std::vector<LabeledExample> rows, const std::string& kind) {
    if (kind.empty()) return rows;
    const auto k = parse_or_throw(parse_smell_kind(kind), "smell kind", kind);
    std::erase_if(rows, [&](const LabeledExample& e) { return e.kind != k; });
    if (rows.empty()) throw Error(ErrorCode::NoData, "no benchmark rows for " + kind);
    return rows;
}

// ---- detect ----------------------------------------------------------------------------

struct DetectArgs {
    std::vector<std::string> paths;
    std::string flavor = "java";
    std::string rules;
    std::string category;
    std::string feature_out;
};

void run_detect(const Globals& g, const DetectArgs& a) {
    require_json(g);
    std::vector<std::filesystem::path> paths(a.paths.begin(), a.paths.end());
    const auto corpus = ingest_corpus(paths, parse_or_throw(parse_flavor(a.flavor), "flavor", a.flavor));
    for (const auto& s : corpus.skipped) std::cerr << "skipped " << s.path << ": " << s.reason << "\n";
    const auto rules = a.rules.empty() ? RuleConfig{} : load_rule_config(a.rules);
    const auto smells = detect_smells(corpus, rules);
    if (!a.feature_out.empty()) {
        if (a.category.empty()) throw Error(ErrorCode::BadInput, "--feature-vector needs --category");
        const auto cat = parse_or_throw(parse_app_category(a.category), "category", a.category);
        text::write_file(a.feature_out, feature_vector_json(build_feature_vector(compute_metrics(corpus), smells, cat)));
    }
    emit(g, smells_json(smells));
}

// ---- profile / bench ---------------------------------------------------------------------

struct ProfileArgs {
    std::string command;
    std::string id = "subject";
    std::vector<std::string> workload;
    double duration = 60.0;
    int interval = 10;
    double warmup = 1.0;
    int repetitions = 7;
    std::string runs_csv;
};

RunSpec make_spec(const ProfileArgs& a, const std::string& command, const std::string& id) {
    RunSpec s;
    s.id = id;
    s.command = split_command(command);
    s.workload_args = a.workload;
    s.duration_limit_s = a.duration;
    s.sample_interval_ms = a.interval;
    s.warmup_discard_s = a.warmup;
    s.repetitions = a.repetitions;
    validate_run_spec(s);
    return s;
}

void run_profile(const Globals& g, const ProfileArgs& a) {
    require_json(g);
    const auto spec = make_spec(a, a.command, a.id);
    std::vector<RunSeries> series;
    for (int r = 0; r < spec.repetitions; ++r) {
        std::cerr << "run " << r + 1 << "/" << spec.repetitions << "\n";
        series.push_back(run_measurement(spec));
    }
    if (!a.runs_csv.empty()) text::write_file(a.runs_csv, runs_csv(series));
    emit(g, summary_json(summarize(series)));
}

struct BenchArgs {
    ProfileArgs profile;
    std::string before;
    std::string after;
    std::string app;
    std::string category;
    std::string kind;
    long instances = 0;
    std::string dataset;
};

void run_bench(const Globals& g, const BenchArgs& a) {
    const auto cat = parse_or_throw(parse_app_category(a.category), "category", a.category);
    const auto kind = parse_or_throw(parse_smell_kind(a.kind), "smell kind", a.kind);
    const auto before = make_spec(a.profile, a.before, a.app + "-before");
    const auto after = make_spec(a.profile, a.after, a.app + "-after");
    std::cerr << "profiling " << a.app << " " << a.kind << " before and after\n";
    const auto record = measure_impact(before, after, a.app, cat, kind, a.instances);
    std::vector<ImpactRecord> records;
    if (!a.dataset.empty() && std::filesystem::exists(a.dataset)) records = ingest_impact_csv(a.dataset).records();
    records.push_back(record);
    emit(g, export_impact_csv(ImpactDataset(std::move(records))));
}

// ---- additivity ----------------------------------------------------------------------------

struct AdditivityArgs {
    std::string dataset;
    std::string batches;
    bool extremes = false;
    std::string mode = "ALL";
};

void run_additivity(const Globals& g, const AdditivityArgs& a) {
    const auto dataset = ingest_impact_csv(a.dataset);
    const auto batches = ingest_batch_csv(a.batches);
    if (!a.extremes) {
        emit(g, emit_report(additivity_report(dataset, batches), parse_report_format(g.format)));
        return;
    }
    require_json(g);
    const auto mode = parse_or_throw(parse_batch_mode(a.mode), "batch mode", a.mode);
    nlohmann::ordered_json j;
    j["mode"] = to_string(mode);
    for (auto r : {Resource::Cpu, Resource::Memory}) {
        const auto hi = batch_max(batches, mode, r);
        const auto lo = batch_min(batches, mode, r);
        j[std::string(to_string(r))] = {{"max", {{"app", hi.app}, {"value", hi.value}}},
                                        {"min", {{"app", lo.app}, {"value", lo.value}}}};
    }
    emit(g, j.dump(2) + "\n");
}

// ---- train / predict / evaluate ---------------------------------------------------------------

struct TrainArgs {
    std::string dataset;
    std::string model = "linear";
    std::string target = "both";
    std::string kind;
    std::vector<std::string> features;
    bool no_select = false;
    std::optional<double> penalty;
    int population = GaConfig{}.population;
    int generations = GaConfig{}.generations;
};

TrainedModel train_one(const Globals& g, const TrainArgs& a, const std::vector<LabeledExample>& rows, Target target) {
    const auto kind = parse_or_throw(parse_model_kind(a.model), "model", a.model);
    TrainingConfig cfg;
    cfg.lasso_penalty = a.penalty;
    auto data = make_dataset(rows, target, a.features);
    if (!a.no_select) {
        GaConfig ga;
        ga.population = a.population;
        ga.generations = a.generations;
        std::cerr << "selecting features for " << to_string(target) << " (" << data.features.size() << " candidates)\n";
        const auto subset = ga_select(data, kind, g.seed, ga, cfg);
        std::cerr << "selected " << subset.features.size() << " features, cv mse " << subset.fitness << "\n";
        data = data.select(subset.mask);
    }
    std::cerr << "training " << to_string(kind) << " for " << to_string(target) << "\n";
    return train(data, kind, cfg, g.seed);
}

void run_train(const Globals& g, const TrainArgs& a) {
    require_json(g);
    const auto rows = filter_kind(load_bench_csv(a.dataset), a.kind);
    ImpactModel model;
    if (a.target == "cpu" || a.target == "both") model.cpu = train_one(g, a, rows, Target::Cpu);
    if (a.target == "memory" || a.target == "mem" || a.target == "both") model.memory = train_one(g, a, rows, Target::Memory);
    if (!model.cpu && !model.memory) throw Error(ErrorCode::BadInput, "target must be cpu, memory or both");
    emit(g, model_json(model));
}

void run_predict(const Globals& g, const std::string& model_path, const std::string& features_path) {
    require_json(g);
    const auto model = parse_model_json(text::read_file(model_path));
    const auto fv = parse_feature_vector_json(text::read_file(features_path)).to_map();
    std::optional<double> cpu, mem;
    if (model.cpu) cpu = predict(*model.cpu, fv);
    if (model.memory) mem = predict(*model.memory, fv);
    emit(g, prediction_json(cpu, mem));
}

struct EvaluateArgs {
    std::string model;
    std::string dataset;
    std::string kind;
    bool baseline = false;
};

nlohmann::ordered_json metrics_json(const EvalMetrics& m) {
    nlohmann::ordered_json j{{"mse", m.mse}, {"rmse", m.rmse}};
    if (m.adjusted_r_squared) j["adjusted_r_squared"] = *m.adjusted_r_squared;
    return j;
}

void run_evaluate(const Globals& g, const EvaluateArgs& a) {
    require_json(g);
    const auto rows = filter_kind(load_bench_csv(a.dataset), a.kind);
    nlohmann::ordered_json j;
    if (!a.model.empty()) {
        const auto model = parse_model_json(text::read_file(a.model));
        for (auto [target, m] : {std::pair{Target::Cpu, &model.cpu}, std::pair{Target::Memory, &model.memory}}) {
            if (!*m) continue;
            std::vector<double> pred, truth;
            for (const auto& e : rows) {
                pred.push_back(predict(**m, e.features.to_map()));
                truth.push_back(target == Target::Cpu ? e.target_dcpu_pct : e.target_dmem_pct);
            }
            auto metrics = evaluate(pred, truth);
            const auto& tm = **m;
            if (tm.kind == ModelKind::Linear && !tm.selected_features.empty()) {
                try {
                    metrics.adjusted_r_squared =
                        fit_statistics(make_dataset(rows, target, tm.selected_features), tm.selected_features)
                            .adjusted_r_squared;
                } catch (const Error&) {
                }
            }
            j[std::string(to_string(target))] = metrics_json(metrics);
        }
    }
    if (a.baseline) {
        std::vector<double> cpu_pred, mem_pred, cpu_truth, mem_truth;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto p = naive_baseline(rows, i);
            cpu_pred.push_back(p.dcpu_pct);
            mem_pred.push_back(p.dmem_pct);
            cpu_truth.push_back(rows[i].target_dcpu_pct);
            mem_truth.push_back(rows[i].target_dmem_pct);
        }
        j["naive"]["cpu"] = metrics_json(evaluate(cpu_pred, cpu_truth));
        j["naive"]["memory"] = metrics_json(evaluate(mem_pred, mem_truth));
    }
    if (j.empty()) throw Error(ErrorCode::BadInput, "give --model and/or --baseline");
    emit(g, j.dump(2) + "\n");
}

// ---- plan / report / catalog ----------------------------------------------------------------------

struct PlanArgs {
    std::string inventory;
    std::vector<std::string> counts;
    std::string objective = "MINIMIZE_BOTH";
    std::optional<double> budget;
    std::string dataset;
    std::string app;
    std::string category;
    std::vector<std::string> models;
    std::string features;
};

std::map<SmellKind, long> read_inventory(const PlanArgs& a) {
    std::map<SmellKind, long> counts;
    if (!a.inventory.empty()) {
        const auto j = read_json(a.inventory);
        if (!j.is_array()) throw Error(ErrorCode::BadInput, "inventory must be the JSON array written by detect");
        for (const auto& s : j) {
            const auto name = s.value("kind", std::string{});
            counts[parse_or_throw(parse_smell_kind(name), "smell kind", name)] += 1;
        }
    }
    for (const auto& c : a.counts) {
        const auto eq = c.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::BadInput, "--count expects kind=n, got " + c);
        const auto name = c.substr(0, eq);
        counts[parse_or_throw(parse_smell_kind(name), "smell kind", name)] += text::parse_int(c.substr(eq + 1));
    }
    return counts;
}

void run_plan(const Globals& g, const PlanArgs& a) {
    const auto format = parse_report_format(g.format);
    ImpactSource source;
    source.app = a.app;
    if (!a.dataset.empty()) source.dataset = ingest_impact_csv(a.dataset);
    if (!a.category.empty()) source.category = parse_or_throw(parse_app_category(a.category), "category", a.category);
    if (!a.features.empty()) source.features = parse_feature_vector_json(text::read_file(a.features));
    for (const auto& m : a.models) {
        const auto colon = m.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::BadInput, "--model expects kind:path, got " + m);
        const auto name = m.substr(0, colon);
        source.models[parse_or_throw(parse_smell_kind(name), "smell kind", name)] =
            parse_model_json(text::read_file(m.substr(colon + 1)));
    }
    Objective objective;
    objective.mode = parse_or_throw(parse_objective_mode(a.objective), "objective", a.objective);
    objective.budget = a.budget;
    emit(g, emit_report(plan_batch(read_inventory(a), source, objective), format));
}

void run_report(const Globals& g, const std::string& dataset, const std::string& batches) {
    const auto format = parse_report_format(g.format);
    const auto data = ingest_impact_csv(dataset);
    if (batches.empty())
        emit(g, emit_report(data, format));
    else
        emit(g, emit_report(additivity_report(data, ingest_batch_csv(batches)), format));
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::LaunchError:
        case ErrorCode::NoRuns:
        case ErrorCode::DegenerateBaseline: return kExitProfiling;
        default: return kExitValidation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Code smell detection, resource impact measurement and refactoring planning."};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML-style key/value file presetting any flag")->envname("SMELLWATT_CONFIG");

    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--out", g.out, "Output file (default: standard output)");
    app.add_option("--format", g.format, "json, markdown or csv-plotdata")->capture_default_str();

    DetectArgs detect;
    auto* detect_cmd = app.add_subcommand("detect", "Detect smells in source files or directories");
    detect_cmd->add_option("paths", detect.paths, "Files or directories")->required();
    detect_cmd->add_option("--flavor", detect.flavor, "java or python")->capture_default_str();
    detect_cmd->add_option("--rules", detect.rules, "Threshold file");
    detect_cmd->add_option("--category", detect.category, "Application category for --feature-vector");
    detect_cmd->add_option("--feature-vector", detect.feature_out, "Also write the feature vector JSON here");

    ProfileArgs profile;
    auto add_profile_flags = [](CLI::App* cmd, ProfileArgs& p) {
        cmd->add_option("--workload", p.workload, "Arguments appended to the command");
        cmd->add_option("--duration", p.duration, "Per-run limit in seconds")->capture_default_str();
        cmd->add_option("--interval", p.interval, "Sample interval in ms")->capture_default_str();
        cmd->add_option("--warmup", p.warmup, "Seconds discarded at the start of each run")->capture_default_str();
        cmd->add_option("--repetitions", p.repetitions, "Runs per variant")->capture_default_str();
    };
    auto* profile_cmd = app.add_subcommand("profile", "Sample CPU and memory of a subject command");
    profile_cmd->add_option("--cmd", profile.command, "Subject command line")->required();
    profile_cmd->add_option("--id", profile.id, "Run identifier")->capture_default_str();
    profile_cmd->add_option("--runs-csv", profile.runs_csv, "Write raw samples here");
    add_profile_flags(profile_cmd, profile);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Profile before/after variants into an impact CSV record");
    bench_cmd->add_option("--before", bench.before, "Command of the smelly variant")->required();
    bench_cmd->add_option("--after", bench.after, "Command of the refactored variant")->required();
    bench_cmd->add_option("--app", bench.app, "Application name")->required();
    bench_cmd->add_option("--category", bench.category, "Application category")->required();
    bench_cmd->add_option("--kind", bench.kind, "Refactored smell kind")->required();
    bench_cmd->add_option("--instances", bench.instances, "Instances refactored")->required();
    bench_cmd->add_option("--dataset", bench.dataset, "Existing impact CSV to extend");
    add_profile_flags(bench_cmd, bench.profile);

    AdditivityArgs additivity;
    auto* additivity_cmd = app.add_subcommand("additivity", "Compare batch impacts with summed individual impacts");
    additivity_cmd->add_option("--dataset", additivity.dataset, "Impact CSV")->required();
    additivity_cmd->add_option("--batches", additivity.batches, "Batch CSV")->required();
    additivity_cmd->add_flag("--extremes", additivity.extremes, "Report the largest and smallest batch deltas");
    additivity_cmd->add_option("--mode", additivity.mode, "Batch mode for --extremes")->capture_default_str();

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train an impact model on a benchmark CSV");
    train_cmd->add_option("--dataset", train_args.dataset, "Benchmark CSV")->required();
    train_cmd->add_option("--model", train_args.model, "linear, polynomial, lasso, random-forest or ann")
        ->capture_default_str();
    train_cmd->add_option("--target", train_args.target, "cpu, memory or both")->capture_default_str();
    train_cmd->add_option("--kind", train_args.kind, "Only rows for this smell kind");
    train_cmd->add_option("--features", train_args.features, "Candidate features (default: all)");
    train_cmd->add_flag("--no-select", train_args.no_select, "Skip genetic feature selection");
    train_cmd->add_option("--penalty", train_args.penalty, "Fixed lasso penalty");
    train_cmd->add_option("--population", train_args.population, "GA population")->capture_default_str();
    train_cmd->add_option("--generations", train_args.generations, "GA generations")->capture_default_str();

    std::string predict_model, predict_features;
    auto* predict_cmd = app.add_subcommand("predict", "Predict resource deltas for a feature vector");
    predict_cmd->add_option("--model", predict_model, "model.json")->required();
    predict_cmd->add_option("--features", predict_features, "Feature vector JSON")->required();

    EvaluateArgs eval;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "MSE and RMSE of a model on a benchmark CSV");
    evaluate_cmd->add_option("--model", eval.model, "model.json");
    evaluate_cmd->add_option("--dataset", eval.dataset, "Benchmark CSV")->required();
    evaluate_cmd->add_option("--kind", eval.kind, "Only rows for this smell kind");
    evaluate_cmd->add_flag("--baseline", eval.baseline, "Also score the leave-one-out mean baseline");

    PlanArgs plan;
    auto* plan_cmd = app.add_subcommand("plan", "Choose which smell kinds to refactor together");
    plan_cmd->add_option("--inventory", plan.inventory, "Smell list written by detect");
    plan_cmd->add_option("--count", plan.counts, "kind=n, repeatable");
    plan_cmd->add_option("--objective", plan.objective, "MINIMIZE_BOTH, CPU_ONLY, MEMORY_ONLY or MAINTAINABILITY_FIRST")
        ->capture_default_str();
    plan_cmd->add_option("--budget", plan.budget, "Max memory worsening in percent (CPU_ONLY)");
    plan_cmd->add_option("--dataset", plan.dataset, "Impact CSV for additive estimates");
    plan_cmd->add_option("--app", plan.app, "Application to look up in the dataset");
    plan_cmd->add_option("--category", plan.category, "Application category");
    plan_cmd->add_option("--model", plan.models, "kind:model.json, repeatable");
    plan_cmd->add_option("--features", plan.features, "Feature vector JSON for model predictions");

    std::string report_dataset, report_batches;
    auto* report_cmd = app.add_subcommand("report", "Render an impact dataset or additivity report");
    report_cmd->add_option("--dataset", report_dataset, "Impact CSV")->required();
    report_cmd->add_option("--batches", report_batches, "Batch CSV; renders the additivity report");

    auto* catalog_cmd = app.add_subcommand("catalog", "Smell catalog");
    catalog_cmd->require_subcommand(1);
    auto* export_cmd = catalog_cmd->add_subcommand("export", "Write the catalog as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        if (*detect_cmd) run_detect(g, detect);
        else if (*profile_cmd) run_profile(g, profile);
        else if (*bench_cmd) run_bench(g, bench);
        else if (*additivity_cmd) run_additivity(g, additivity);
        else if (*train_cmd) run_train(g, train_args);
        else if (*predict_cmd) run_predict(g, predict_model, predict_features);
        else if (*evaluate_cmd) run_evaluate(g, eval);
        else if (*plan_cmd) run_plan(g, plan);
        else if (*report_cmd) run_report(g, report_dataset, report_batches);
        else if (*export_cmd) {
            require_json(g);
            emit(g, catalog_json());
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
