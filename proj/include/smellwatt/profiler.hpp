#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "smellwatt/impact_store.hpp"

namespace smellwatt {

struct RunSpec {
    std::string id;
    std::vector<std::string> command;
    std::vector<std::string> workload_args;  // appended to command
    double duration_limit_s = 60.0;
    int sample_interval_ms = 10;
    double warmup_discard_s = 1.0;
    int repetitions = 7;
};

/// Throws BadInput when an invariant of the spec does not hold.
void validate_run_spec(const RunSpec& spec);

struct ResourceSample {
    double t_ms = 0.0;      // since subject start
    double cpu_pct = 0.0;   // of one logical core over the preceding interval
    std::uint64_t rss_bytes = 0;
};

struct RunSeries {
    std::string spec_id;
    std::vector<ResourceSample> samples;
    int exit_status = 0;  // exit code, or 128 + signal number
    bool timed_out = false;
};

struct MeasurementSummary {
    double mean_cpu_pct = 0.0;
    double std_cpu_pct = 0.0;
    double mean_mem_bytes = 0.0;
    double std_mem_bytes = 0.0;
    std::size_t run_count = 0;
};

struct DeltaReport {
    double dcpu_pct = 0.0;
    double dmem_pct = 0.0;
};

struct PerSmellImpact {
    double dcpu_per_instance = 0.0;
    double dmem_per_instance = 0.0;
};

/// Splits a command line on whitespace, honouring single quotes, double
/// quotes and backslash escapes. No other shell syntax is interpreted.
std::vector<std::string> split_command(std::string_view line);

/// Launches one fresh subject process pinned to a single CPU and samples it
/// until it exits or the duration limit is reached (then it is killed).
/// Throws LaunchError if the command cannot be started.
RunSeries run_measurement(const RunSpec& spec);

/// `spec.repetitions` sequential calls to run_measurement.
std::vector<RunSeries> run_repeated(const RunSpec& spec);

/// Mean of each run first, then mean and population standard deviation
/// across runs. Runs without samples are not aggregated. Throws NoRuns.
MeasurementSummary summarize(const std::vector<RunSeries>& series);

/// 100 * (before - after) / before; positive means the resource went down.
/// Throws DegenerateBaseline when a before mean is zero.
DeltaReport relative_change(const MeasurementSummary& before, const MeasurementSummary& after);

/// Throws NoInstances when instance_count < 1.
PerSmellImpact normalize_per_instance(const DeltaReport& delta, long instance_count);

/// run_id,t_ms,cpu_pct,rss_bytes; run ids start at 1.
std::string runs_csv(const std::vector<RunSeries>& series);
std::string summary_json(const MeasurementSummary& summary);

/// Profiles before and after variants and folds the deltas into one record.
/// Per-instance values are left empty when instance_count is 0.
ImpactRecord measure_impact(const RunSpec& before, const RunSpec& after, const std::string& app,
                            AppCategory category, SmellKind kind, long instance_count);

}  // namespace smellwatt
