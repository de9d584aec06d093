#include "smellwatt/profiler.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "smellwatt/error.hpp"

using namespace smellwatt;

namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::BadInput;
}

RunSeries constant_series(double cpu, std::uint64_t rss, int n = 5) {
    RunSeries s;
    for (int i = 0; i < n; ++i) s.samples.push_back({10.0 * (i + 1), cpu, rss});
    return s;
}

MeasurementSummary with_means(double cpu, double mem) {
    MeasurementSummary s;
    s.mean_cpu_pct = cpu;
    s.mean_mem_bytes = mem;
    s.run_count = 7;
    return s;
}

}  // namespace

TEST(Summarize, IdenticalRunsHaveZeroSpread) {
    std::vector<RunSeries> runs(7, constant_series(12.5, 4096));
    const auto s = summarize(runs);
    EXPECT_EQ(s.run_count, 7u);
    EXPECT_EQ(s.mean_cpu_pct, 12.5);
    EXPECT_EQ(s.std_cpu_pct, 0.0);
    EXPECT_EQ(s.std_mem_bytes, 0.0);
}

TEST(Summarize, TwoPointPopulationStd) {
    const auto s = summarize({constant_series(4.0, 100), constant_series(6.0, 300)});
    EXPECT_EQ(s.mean_cpu_pct, 5.0);
    EXPECT_EQ(s.std_cpu_pct, 1.0);
    EXPECT_EQ(s.mean_mem_bytes, 200.0);
    EXPECT_EQ(s.std_mem_bytes, 100.0);
}

TEST(Summarize, MatchesHandComputedSevenRuns) {
    // Runs of differing length, so the per-run mean must be taken first.
    std::vector<RunSeries> runs;
    std::vector<double> run_cpu, run_mem;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> cpu(0.0, 100.0);
    for (int r = 0; r < 7; ++r) {
        RunSeries s;
        long double csum = 0, msum = 0;
        const int n = 3 + r * 4;
        for (int i = 0; i < n; ++i) {
            const double c = cpu(rng);
            const std::uint64_t m = 1'000'000 + rng() % 5'000'000;
            s.samples.push_back({static_cast<double>(i), c, m});
            csum += c;
            msum += m;
        }
        run_cpu.push_back(static_cast<double>(csum / n));
        run_mem.push_back(static_cast<double>(msum / n));
        runs.push_back(std::move(s));
    }
    long double cm = 0, mm = 0;
    for (int i = 0; i < 7; ++i) cm += run_cpu[i], mm += run_mem[i];
    cm /= 7, mm /= 7;
    long double cv = 0, mv = 0;
    for (int i = 0; i < 7; ++i) cv += (run_cpu[i] - cm) * (run_cpu[i] - cm), mv += (run_mem[i] - mm) * (run_mem[i] - mm);
    const auto s = summarize(runs);
    EXPECT_NEAR(s.mean_cpu_pct, static_cast<double>(cm), 1e-12);
    EXPECT_NEAR(s.std_cpu_pct, std::sqrt(static_cast<double>(cv / 7)), 1e-12);
    EXPECT_NEAR(s.mean_mem_bytes / 1e6, static_cast<double>(mm) / 1e6, 1e-12);
    EXPECT_NEAR(s.std_mem_bytes / 1e6, std::sqrt(static_cast<double>(mv / 7)) / 1e6, 1e-12);
}

TEST(Summarize, PermutationInvariant) {
    std::mt19937 rng(3);
    std::vector<RunSeries> runs;
    for (int r = 0; r < 7; ++r) runs.push_back(constant_series(1.0 + r * 3.3, 1000 + r * 17, 2 + r));
    const auto base = summarize(runs);
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(runs.begin(), runs.end(), rng);
        const auto s = summarize(runs);
        EXPECT_NEAR(s.mean_cpu_pct, base.mean_cpu_pct, 1e-12);
        EXPECT_NEAR(s.std_cpu_pct, base.std_cpu_pct, 1e-12);
        EXPECT_NEAR(s.mean_mem_bytes, base.mean_mem_bytes, 1e-9);
        EXPECT_NEAR(s.std_mem_bytes, base.std_mem_bytes, 1e-9);
    }
}

TEST(Summarize, EmptyInputIsNoRuns) {
    EXPECT_EQ(code_of([] { summarize({}); }), ErrorCode::NoRuns);
    EXPECT_EQ(code_of([] { summarize({RunSeries{}}); }), ErrorCode::NoRuns);
}

TEST(RelativeChange, JstockCyclicDependencyCpu) {
    const auto d = relative_change(with_means(10.0, 1.0), with_means(9.411, 1.0));
    EXPECT_NEAR(d.dcpu_pct, 5.89, 1e-9);
}

TEST(RelativeChange, IdentityIsExactlyZero) {
    const auto a = with_means(37.25, 123456789.0);
    const auto d = relative_change(a, a);
    EXPECT_EQ(d.dcpu_pct, 0.0);
    EXPECT_EQ(d.dmem_pct, 0.0);
}

TEST(RelativeChange, WorseningIsNegative) {
    EXPECT_EQ(relative_change(with_means(8.0, 1.0), with_means(10.0, 1.0)).dcpu_pct, -25.0);
}

TEST(RelativeChange, ZeroBaselineIsDegenerate) {
    EXPECT_EQ(code_of([] { relative_change(with_means(0.0, 5.0), with_means(1.0, 5.0)); }),
              ErrorCode::DegenerateBaseline);
    EXPECT_EQ(code_of([] { relative_change(with_means(5.0, 0.0), with_means(1.0, 5.0)); }),
              ErrorCode::DegenerateBaseline);
}

TEST(NormalizePerInstance, OpenstackLongParameter) {
    EXPECT_NEAR(normalize_per_instance({7.9, -2.4}, 40).dcpu_per_instance, 0.1975, 1e-12);
}

TEST(NormalizePerInstance, TrivialCases) {
    const auto zero = normalize_per_instance({0.0, 0.0}, 13);
    EXPECT_EQ(zero.dcpu_per_instance, 0.0);
    EXPECT_EQ(zero.dmem_per_instance, 0.0);
    const auto one = normalize_per_instance({6.16, 6.16}, 1);
    EXPECT_EQ(one.dcpu_per_instance, 6.16);
    EXPECT_EQ(one.dmem_per_instance, 6.16);
    EXPECT_EQ(code_of([] { normalize_per_instance({1.0, 1.0}, 0); }), ErrorCode::NoInstances);
}

TEST(NormalizePerInstance, ScalingProperty) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> v(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const DeltaReport d{v(rng), v(rng)};
        const long k = 1 + static_cast<long>(rng() % 500);
        const auto p = normalize_per_instance(d, k);
        EXPECT_NEAR(p.dcpu_per_instance * static_cast<double>(k), d.dcpu_pct, 1e-12);
        EXPECT_NEAR(p.dmem_per_instance * static_cast<double>(k), d.dmem_pct, 1e-12);
    }
}

TEST(SplitCommand, QuotesAndEscapes) {
    EXPECT_EQ(split_command("a  'b c' \"d \\\"e\\\"\" f\\ g"),
              (std::vector<std::string>{"a", "b c", "d \"e\"", "f g"}));
    EXPECT_EQ(split_command("x ''"), (std::vector<std::string>{"x", ""}));
    EXPECT_EQ(code_of([] { split_command("a 'b"); }), ErrorCode::BadInput);
}

TEST(RunSpecValidation, RejectsBadSpecs) {
    RunSpec s;
    s.command = {"true"};
    EXPECT_NO_THROW(validate_run_spec(s));
    auto bad = s;
    bad.sample_interval_ms = 0;
    EXPECT_EQ(code_of([&] { validate_run_spec(bad); }), ErrorCode::BadInput);
    bad = s;
    bad.repetitions = 0;
    EXPECT_EQ(code_of([&] { validate_run_spec(bad); }), ErrorCode::BadInput);
    bad = s;
    bad.duration_limit_s = 1.0;
    bad.warmup_discard_s = 1.0;
    EXPECT_EQ(code_of([&] { validate_run_spec(bad); }), ErrorCode::BadInput);
}

TEST(RunMeasurement, ImmediateExit) {
    RunSpec s;
    s.command = {"true"};
    s.warmup_discard_s = 0.0;
    const auto series = run_measurement(s);
    EXPECT_LE(series.samples.size(), 1u);
    EXPECT_EQ(series.exit_status, 0);
    EXPECT_FALSE(series.timed_out);
}

TEST(RunMeasurement, MissingExecutableIsLaunchError) {
    RunSpec s;
    s.command = {"/nonexistent/smellwatt-subject"};
    EXPECT_EQ(code_of([&] { run_measurement(s); }), ErrorCode::LaunchError);
}

TEST(RunMeasurement, NonzeroExitIsRecorded) {
    RunSpec s;
    s.command = split_command("sh -c 'exit 3'");
    s.warmup_discard_s = 0.0;
    EXPECT_EQ(run_measurement(s).exit_status, 3);
}

TEST(RunMeasurement, DurationLimitKillsSubject) {
    RunSpec s;
    s.command = {"sleep", "30"};
    s.duration_limit_s = 0.5;
    s.warmup_discard_s = 0.1;
    const auto series = run_measurement(s);
    EXPECT_TRUE(series.timed_out);
    EXPECT_EQ(series.exit_status, 128 + 9);
    ASSERT_FALSE(series.samples.empty());
    EXPECT_GE(series.samples.front().t_ms, 100.0);
    EXPECT_LE(series.samples.back().t_ms, 700.0);
    for (std::size_t i = 1; i < series.samples.size(); ++i)
        EXPECT_GT(series.samples[i].t_ms, series.samples[i - 1].t_ms);
}

TEST(RunMeasurement, HalfDutyCycleReadsHalfACore) {
    RunSpec s;
    s.command = {SMELLWATT_DUTY_SUBJECT, "0.5", "100", "5"};
    s.duration_limit_s = 20.0;
    const auto series = run_measurement(s);
    EXPECT_EQ(series.exit_status, 0);
    const auto summary = summarize({series});
    EXPECT_GE(summary.mean_cpu_pct, 45.0);
    EXPECT_LE(summary.mean_cpu_pct, 55.0);
    for (const auto& sample : series.samples) EXPECT_GE(sample.cpu_pct, 0.0);
}

TEST(RunMeasurement, AllocatorHoldsHundredMebibytes) {
    RunSpec s;
    s.command = {SMELLWATT_ALLOC_SUBJECT, "100", "3"};
    s.duration_limit_s = 20.0;
    const auto series = run_measurement(s);
    EXPECT_EQ(series.exit_status, 0);
    const double target = 100.0 * 1024 * 1024;
    const auto summary = summarize({series});
    EXPECT_NEAR(summary.mean_mem_bytes, target, 0.10 * target);

    // idle subject: sampling cadence stays within half an interval either way
    ASSERT_GT(series.samples.size(), 10u);
    std::size_t off = 0;
    for (std::size_t i = 1; i < series.samples.size(); ++i) {
        const double gap = series.samples[i].t_ms - series.samples[i - 1].t_ms;
        if (gap < 5.0 || gap > 15.0) ++off;
    }
    EXPECT_EQ(off, 0u);
}

TEST(ProfilerOutput, RunsCsvAndSummaryJson) {
    RunSeries a;
    a.samples = {{10.0, 50.0, 1024}, {20.0, 25.5, 2048}};
    RunSeries b;
    b.samples = {{10.0, 1.0, 512}};
    EXPECT_EQ(runs_csv({a, b}),
              "run_id,t_ms,cpu_pct,rss_bytes\n1,10.000,50.000,1024\n1,20.000,25.500,2048\n2,10.000,1.000,512\n");
    const auto json = summary_json(summarize({a, b}));
    EXPECT_NE(json.find("\"run_count\": 2"), std::string::npos);
    EXPECT_NE(json.find("\"std_convention\": \"population\""), std::string::npos);
}
