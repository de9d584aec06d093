#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smellwatt/advisor.hpp"
#include "smellwatt/detector.hpp"
#include "smellwatt/error.hpp"
#include "smellwatt/impact_store.hpp"
#include "smellwatt/predictor.hpp"
#include "smellwatt/profiler.hpp"
#include "smellwatt/text.hpp"

#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace smellwatt;

namespace {

const fs::path kData = fs::path(SMELLWATT_DATA_DIR) / "reference";
const fs::path kFixtures = SMELLWATT_FIXTURE_DIR;

struct Outcome {
    bool pass = true;
    std::ostringstream note;

    void check(bool ok, const std::string& what) {
        if (ok) return;
        if (!pass) note << "; ";
        pass = false;
        note << what;
    }
};

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

Dataset synthetic(int n, int p, std::uint64_t seed, const std::function<double(const Eigen::VectorXd&)>& f,
                  double noise = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> eps(0.0, 1.0);
    Dataset d;
    for (int j = 0; j < p; ++j) d.features.push_back("x" + std::to_string(j + 1));
    d.x.resize(n, p);
    d.y.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) d.x(i, j) = u(rng);
        d.y(i) = f(d.x.row(i).transpose()) + noise * eps(rng);
    }
    return d;
}

void additivity_fixture(Outcome& o) {
    const auto report = additivity_report(ingest_impact_csv(kData / "impact.csv"), ingest_batch_csv(kData / "batches.csv"));
    const auto imp = find_summary(report, BatchMode::Improving, Resource::Cpu);
    o.check(imp && near(imp->min_deviation, 0.26, 1e-9) && near(imp->max_deviation, 1.46, 1e-9),
            "improving CPU deviation range");
    o.check(imp && near(imp->mean_deviation, 0.61, 1e-9), "improving CPU mean deviation");
    const auto wc = find_summary(report, BatchMode::Worsening, Resource::Cpu);
    const auto wm = find_summary(report, BatchMode::Worsening, Resource::Memory);
    o.check(wc && near(wc->mean_deviation, 0.64, 1e-9), "worsening CPU mean deviation");
    o.check(wm && near(wm->mean_deviation, 1.47, 1e-9), "worsening memory mean deviation");
    bool found = false;
    for (const auto& r : report.rows) {
        if (r.mode != BatchMode::Worsening || r.app != "log4j") continue;
        found = true;
        o.check(r.predicted_mem && near(std::fabs(*r.predicted_mem), 20.01, 1e-9), "log4j predicted memory");
        o.check(r.observed_mem && near(std::fabs(*r.observed_mem), 19.50, 1e-9), "log4j observed memory");
        o.check(r.deviation_mem && near(*r.deviation_mem, 0.51, 1e-9), "log4j deviation");
    }
    o.check(found, "log4j worsening batch missing");
}

void all_smells_extremes(Outcome& o) {
    const auto b = ingest_batch_csv(kData / "batches.csv");
    const auto cmax = batch_max(b, BatchMode::All, Resource::Cpu);
    const auto cmin = batch_min(b, BatchMode::All, Resource::Cpu);
    const auto mmax = batch_max(b, BatchMode::All, Resource::Memory);
    const auto mmin = batch_min(b, BatchMode::All, Resource::Memory);
    o.check(cmax.app == "ant" && cmax.value == 30.01, "CPU max");
    o.check(cmin.app == "javacc" && cmin.value == 8.10, "CPU min");
    o.check(mmax.app == "ant" && mmax.value == 39.70, "memory max");
    o.check(mmin.app == "jparse" && mmin.value == 3.50, "memory min");
}

void table_ordering(Outcome& o) {
    const auto table = text::read_csv(kData / "model_results_memory.csv");
    std::map<std::string, std::map<std::string, double>> mse;
    for (const auto& r : table.rows) mse[r[0]][r[1]] = text::parse_double(r[2]);
    o.check(mse.size() == 6, "expected six smell rows");
    for (const auto& [kind, row] : mse) {
        o.check(row.size() == 5 && row.count("ann"), kind + ": expected five models");
        if (!row.count("ann")) continue;
        for (const auto& [model, v] : row)
            if (model != "ann") o.check(row.at("ann") < v, kind + ": ann not below " + model);
    }
    o.check(mse["middleman"]["ann"] == 0.21 && mse["middleman"]["linear"] == 1.67, "middleman anchor values");
}

void baseline_ordering(Outcome& o) {
    const auto table = text::read_csv(kData / "reported_metrics.csv");
    std::map<std::string, double> v;
    for (const auto& r : table.rows) v[r[0] + "/" + r[1] + "/" + r[2]] = text::parse_double(r[3]);
    o.check(v["multivariate/cpu/mse"] == 0.01161 && v["naive/cpu/mse"] == 0.02216, "CPU anchor values");
    o.check(v["multivariate/memory/mse"] == 0.02011 && v["naive/memory/mse"] == 0.03165, "memory anchor values");
    o.check(v["multivariate/cpu/mse"] < v["naive/cpu/mse"], "CPU ordering");
    o.check(v["multivariate/memory/mse"] < v["naive/memory/mse"], "memory ordering");

    const auto bench = load_bench_csv(kData / "bench.csv");
    double worst = 0;
    for (auto kind : all_smell_kinds()) {
        std::vector<LabeledExample> rows;
        for (const auto& e : bench)
            if (e.kind == kind) rows.push_back(e);
        long double cpu = 0, mem = 0;
        for (const auto& e : rows) {
            cpu += e.target_dcpu_pct;
            mem += e.target_dmem_pct;
        }
        const auto n1 = static_cast<long double>(rows.size() - 1);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto p = naive_baseline(rows, i);
            worst = std::max(worst, std::fabs(p.dcpu_pct - static_cast<double>((cpu - rows[i].target_dcpu_pct) / n1)));
            worst = std::max(worst, std::fabs(p.dmem_pct - static_cast<double>((mem - rows[i].target_dmem_pct) / n1)));
        }
    }
    o.check(worst <= 1e-12, "naive baseline off the leave-one-out oracle by " + text::format_double(worst));
}

void regression_oracles(Outcome& o) {
    double worst = 0, worst_lasso = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const int p = 1 + trial % 6;
        const auto d = synthetic(20, p, 9000 + trial, [](const Eigen::VectorXd& x) { return 2 * x(0) - 0.5; }, 0.5);
        const auto ref = oracle::normal_equations(d);
        const auto stats = fit_statistics(d, d.features);
        for (std::size_t j = 0; j < stats.coefficients.size(); ++j) {
            const auto& c = stats.coefficients[j];
            const double t_ref = static_cast<double>(ref.beta[j] / ref.se[j]);
            worst = std::max({worst, std::fabs(c.estimate - static_cast<double>(ref.beta[j])),
                              std::fabs(c.standard_error - static_cast<double>(ref.se[j])),
                              c.t_value ? std::fabs(*c.t_value - t_ref) : std::numeric_limits<double>::infinity()});
        }
        worst = std::max(worst, std::fabs(stats.adjusted_r_squared - static_cast<double>(ref.adjusted_r2)));
        const auto ols = linear_coefficients(train(d, ModelKind::Linear, {}, 1));
        for (std::size_t j = 0; j < ols.size(); ++j)
            worst = std::max(worst, std::fabs(ols[j] - static_cast<double>(ref.beta[j])));
        TrainingConfig zero;
        zero.lasso_penalty = 0.0;
        const auto lasso = linear_coefficients(train(d, ModelKind::Lasso, zero, 1));
        for (std::size_t j = 0; j < ols.size(); ++j) worst_lasso = std::max(worst_lasso, std::fabs(lasso[j] - ols[j]));
    }
    o.check(worst <= 1e-8, "OLS statistics off the oracle by " + text::format_double(worst));
    o.check(worst_lasso <= 1e-6, "lasso at zero penalty off OLS by " + text::format_double(worst_lasso));
}

void ga_equals_exhaustive(Outcome& o) {
    for (int trial = 0; trial < 5; ++trial) {
        const int p = 8 + trial;
        const auto d = synthetic(60, p, 7000 + trial,
                                 [](const Eigen::VectorXd& x) { return 1.5 * x(1) - x(3) + 0.5 * x(5); }, 0.4);
        const std::uint64_t seed = 100 + trial;
        const auto ga = ga_select(d, ModelKind::Linear, seed);
        const auto folds = make_folds(static_cast<std::size_t>(d.x.rows()), GaConfig{}.folds, seed);
        double best = std::numeric_limits<double>::infinity();
        for (unsigned bits = 1; bits < (1u << p); ++bits) {
            std::vector<bool> mask(static_cast<std::size_t>(p));
            for (int j = 0; j < p; ++j) mask[static_cast<std::size_t>(j)] = (bits >> j) & 1u;
            best = std::min(best, cv_mse(d, mask, ModelKind::Linear, {}, folds, seed));
        }
        o.check(ga.fitness == best, "p=" + std::to_string(p) + ": GA " + text::format_double(ga.fitness) +
                                        " vs exhaustive " + text::format_double(best));
    }
}

void nonlinear_advantage(Outcome& o) {
    int wins = 0;
    const auto f = [](const Eigen::VectorXd& x) { return std::sin(3 * x(0)) + x(1) * x(1); };
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto fit = synthetic(200, 2, seed, f);
        const auto held = synthetic(200, 2, seed + 1000, f);
        auto mse = [&](const TrainedModel& m) {
            std::vector<double> pred, truth;
            for (Eigen::Index i = 0; i < held.x.rows(); ++i) {
                pred.push_back(predict_row(m, held.x.row(i).transpose()));
                truth.push_back(held.y(i));
            }
            return evaluate(pred, truth).mse;
        };
        if (mse(train(fit, ModelKind::Ann, {}, seed)) < mse(train(fit, ModelKind::Linear, {}, seed))) ++wins;
    }
    o.note << wins << "/5 seeds";
    o.check(wins >= 3, "ann beat linear on fewer than 3 seeds");
}

void detector_fixture(Outcome& o) {
    const auto rules = load_rule_config(kFixtures / "rules.toml");
    const auto found = detect_smells(ingest_corpus({kFixtures / "corpus"}, Flavor::JavaLike), rules);
    const auto again = detect_smells(ingest_corpus({kFixtures / "corpus"}, Flavor::JavaLike), rules);
    const auto expected = oracle::expected_smells(oracle::read_manifest(kFixtures / "corpus.manifest"));
    std::size_t hits = 0;
    for (const auto& e : expected) hits += std::find(found.begin(), found.end(), e) != found.end() ? 1 : 0;
    const double precision = found.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(found.size());
    const double recall = expected.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(expected.size());
    o.note << "precision " << precision << ", recall " << recall;
    o.check(expected.size() == kSmellKindCount, "manifest should label 16 smells");
    o.check(precision == 1.0 && recall == 1.0, "precision/recall below 1");
    o.check(smells_json(found) == smells_json(again), "output differs between runs");
}

void cycle_oracle(Outcome& o) {
    std::mt19937 rng(424242);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        const double density = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
        std::vector<std::string> nodes;
        for (std::size_t i = 0; i < n; ++i) nodes.push_back(std::string(1, static_cast<char>('a' + i)));
        DependencyGraph g;
        g.nodes = nodes;
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && std::bernoulli_distribution(density)(rng)) {
                    adj[i][j] = true;
                    g.add_edge(nodes[i], nodes[j]);
                }
        if (find_cycles(g) != oracle::brute_force_cycles(nodes, adj)) ++mismatches;
    }
    o.check(mismatches == 0, std::to_string(mismatches) + " of 200 graphs disagree");
}

void profiler_calibration(Outcome& o) {
    RunSpec duty;
    duty.command = {SMELLWATT_DUTY_SUBJECT, "0.5", "100", "5"};
    duty.sample_interval_ms = 10;
    duty.duration_limit_s = 20.0;
    const auto cpu = summarize({run_measurement(duty)});
    RunSpec hold;
    hold.command = {SMELLWATT_ALLOC_SUBJECT, "100", "5"};
    hold.sample_interval_ms = 10;
    hold.duration_limit_s = 20.0;
    const auto mem = summarize({run_measurement(hold)});
    const double target = 100.0 * 1024 * 1024;
    o.note << "cpu " << text::format_fixed(cpu.mean_cpu_pct, 2) << "%, rss "
           << text::format_fixed(mem.mean_mem_bytes / (1024 * 1024), 2) << " MiB";
    o.check(cpu.mean_cpu_pct >= 45.0 && cpu.mean_cpu_pct <= 55.0, "duty-cycle cpu outside [45, 55]");
    o.check(std::fabs(mem.mean_mem_bytes - target) <= 0.10 * target, "rss outside 100 MiB +-10%");
}

void normalization(Outcome& o) {
    MeasurementSummary before, after;
    before.mean_cpu_pct = 1000.0;
    after.mean_cpu_pct = 921.0;
    before.mean_mem_bytes = after.mean_mem_bytes = 1.0;
    const auto delta = relative_change(before, after);
    const auto per = normalize_per_instance(delta, 40);
    o.note << "total " << text::format_double(delta.dcpu_pct) << ", per instance "
           << text::format_double(per.dcpu_per_instance);
    o.check(delta.dcpu_pct == 7.9, "total change is not 7.9");
    o.check(per.dcpu_per_instance == 0.1975, "per-instance change is not 0.1975");
    o.check(normalize_per_instance({7.9, -2.4}, 40).dcpu_per_instance == 0.1975, "direct normalization");
}

void planner_contract(Outcome& o) {
    ImpactSource source;
    source.dataset = ingest_impact_csv(kData / "impact.csv");
    std::map<SmellKind, long> inv;
    for (auto k : all_smell_kinds()) inv[k] = 5;
    auto included = [](const RefactoringPlan& p, SmellKind k) {
        return std::any_of(p.include.begin(), p.include.end(), [&](const PlanEntry& e) { return e.kind == k; });
    };
    const auto both = plan_batch(inv, source, {ObjectiveMode::MinimizeBoth, std::nullopt});
    o.check(!included(both, SmellKind::GodClass) && !included(both, SmellKind::GodMethod),
            "MINIMIZE_BOTH keeps a god kind");
    o.check(!included(both, SmellKind::LongParameter), "MINIMIZE_BOTH keeps long-parameter");
    const auto cpu = plan_batch({{SmellKind::LongParameter, 40}}, source, {ObjectiveMode::CpuOnly, 1e9});
    o.check(included(cpu, SmellKind::LongParameter), "CPU_ONLY drops long-parameter");
    const auto mem = plan_batch({{SmellKind::LongParameter, 40}}, source, {ObjectiveMode::MemoryOnly, std::nullopt});
    o.check(!included(mem, SmellKind::LongParameter), "MEMORY_ONLY keeps long-parameter");
    for (auto mode : {ObjectiveMode::MinimizeBoth, ObjectiveMode::CpuOnly, ObjectiveMode::MemoryOnly,
                      ObjectiveMode::MaintainabilityFirst}) {
        const auto a = emit_report(plan_batch(inv, source, {mode, std::nullopt}), ReportFormat::Json);
        const auto b = emit_report(plan_batch(inv, source, {mode, std::nullopt}), ReportFormat::Json);
        o.check(a == b, std::string(to_string(mode)) + " plan is not deterministic");
    }
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    void (*run)(Outcome&);
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "additivity fixture", 1, additivity_fixture},
        {2, "all-smells batch extremes", 1, all_smells_extremes},
        {3, "model table ordering", 1, table_ordering},
        {4, "baseline ordering and leave-one-out oracle", 1, baseline_ordering},
        {5, "regression oracles", 10, regression_oracles},
        {6, "genetic selection equals exhaustive search", 60, ga_equals_exhaustive},
        {7, "nonlinear advantage", 60, nonlinear_advantage},
        {8, "detector fixture", 5, detector_fixture},
        {9, "cycle oracle", 5, cycle_oracle},
        {10, "profiler calibration", 30, profiler_calibration},
        {11, "normalization arithmetic", 1, normalization},
        {12, "planner contract", 1, planner_contract},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("threw: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (s >= c.limit_s) o.check(false, "took " + text::format_fixed(s, 2) + " s");
        if (!o.pass) ++failed;
        std::printf("%s %2d %-46s %7.3f s (limit %g s)  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, s, c.limit_s,
                    o.note.str().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
