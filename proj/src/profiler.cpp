#include "smellwatt/profiler.hpp"

#include <fcntl.h>
#include <sched.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "smellwatt/error.hpp"
#include "smellwatt/text.hpp"

namespace smellwatt {

namespace {

using Clock = std::chrono::steady_clock;

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// On-CPU nanoseconds summed over the live threads of `pid`.
std::optional<std::uint64_t> cpu_time_ns(pid_t pid) {
    const std::string base = "/proc/" + std::to_string(pid);
    std::error_code ec;
    std::uint64_t total = 0;
    bool any = false;
    for (std::filesystem::directory_iterator it(base + "/task", ec), end; !ec && it != end; it.increment(ec)) {
        const auto content = slurp(it->path().string() + "/schedstat");
        if (!content) continue;
        std::istringstream in(*content);
        std::uint64_t ns = 0;
        if (in >> ns) {
            total += ns;
            any = true;
        }
    }
    if (any) return total;

    // Kernels without schedstat: utime + stime in clock ticks.
    const auto stat = slurp(base + "/stat");
    if (!stat) return std::nullopt;
    const auto close = stat->rfind(')');
    if (close == std::string::npos) return std::nullopt;
    std::istringstream in(stat->substr(close + 2));
    std::string field;
    std::uint64_t utime = 0, stime = 0;
    for (int i = 3; i <= 15 && in >> field; ++i) {
        if (i == 14) utime = std::stoull(field);
        if (i == 15) stime = std::stoull(field);
    }
    const auto hz = static_cast<std::uint64_t>(sysconf(_SC_CLK_TCK));
    return (utime + stime) * (1'000'000'000ull / hz);
}

std::optional<std::uint64_t> rss_bytes(pid_t pid) {
    const auto statm = slurp("/proc/" + std::to_string(pid) + "/statm");
    if (!statm) return std::nullopt;
    std::istringstream in(*statm);
    std::uint64_t size = 0, resident = 0;
    if (!(in >> size >> resident)) return std::nullopt;
    return resident * static_cast<std::uint64_t>(sysconf(_SC_PAGESIZE));
}

int decode_status(int status) {
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
}

std::optional<int> first_allowed_cpu() {
    cpu_set_t set;
    CPU_ZERO(&set);
    if (sched_getaffinity(0, sizeof(set), &set) != 0) return std::nullopt;
    for (int cpu = 0; cpu < CPU_SETSIZE; ++cpu)
        if (CPU_ISSET(cpu, &set)) return cpu;
    return std::nullopt;
}

pid_t spawn_pinned(const std::vector<std::string>& argv) {
    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    const auto cpu = first_allowed_cpu();

    int fds[2];
    if (pipe2(fds, O_CLOEXEC) != 0) throw Error(ErrorCode::LaunchError, std::strerror(errno));
    const pid_t pid = fork();
    if (pid < 0) {
        const int err = errno;
        close(fds[0]);
        close(fds[1]);
        throw Error(ErrorCode::LaunchError, std::strerror(err));
    }
    if (pid == 0) {
        close(fds[0]);
        if (cpu) {
            cpu_set_t set;
            CPU_ZERO(&set);
            CPU_SET(*cpu, &set);
            sched_setaffinity(0, sizeof(set), &set);
        }
        execvp(cargv[0], cargv.data());
        const int err = errno;
        [[maybe_unused]] auto n = write(fds[1], &err, sizeof(err));
        _exit(127);
    }
    close(fds[1]);
    int child_errno = 0;
    ssize_t n;
    do {
        n = read(fds[0], &child_errno, sizeof(child_errno));
    } while (n < 0 && errno == EINTR);
    close(fds[0]);
    if (n == static_cast<ssize_t>(sizeof(child_errno))) {
        int status = 0;
        waitpid(pid, &status, 0);
        throw Error(ErrorCode::LaunchError, argv.front() + ": " + std::strerror(child_errno));
    }
    return pid;
}

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double population_std(const std::vector<double>& xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

}  // namespace

void validate_run_spec(const RunSpec& spec) {
    if (spec.command.empty()) throw Error(ErrorCode::BadInput, "empty command");
    if (spec.sample_interval_ms <= 0) throw Error(ErrorCode::BadInput, "sample interval must be positive");
    if (spec.repetitions < 1) throw Error(ErrorCode::BadInput, "repetitions must be at least 1");
    if (spec.warmup_discard_s < 0) throw Error(ErrorCode::BadInput, "warmup discard must not be negative");
    if (!(spec.duration_limit_s > spec.warmup_discard_s))
        throw Error(ErrorCode::BadInput, "duration limit must exceed the warmup discard");
}

std::vector<std::string> split_command(std::string_view line) {
    std::vector<std::string> out;
    std::string current;
    bool in_token = false;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote) {
            if (c == quote) {
                quote = 0;
            } else if (c == '\\' && quote == '"' && i + 1 < line.size() &&
                       (line[i + 1] == '"' || line[i + 1] == '\\')) {
                current += line[++i];
            } else {
                current += c;
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
            in_token = true;
        } else if (c == '\\' && i + 1 < line.size()) {
            current += line[++i];
            in_token = true;
        } else if (c == ' ' || c == '\t' || c == '\n') {
            if (in_token) out.push_back(std::move(current));
            current.clear();
            in_token = false;
        } else {
            current += c;
            in_token = true;
        }
    }
    if (quote) throw Error(ErrorCode::BadInput, "unterminated quote in command");
    if (in_token) out.push_back(std::move(current));
    return out;
}

RunSeries run_measurement(const RunSpec& spec) {
    validate_run_spec(spec);
    auto argv = spec.command;
    argv.insert(argv.end(), spec.workload_args.begin(), spec.workload_args.end());

    RunSeries series;
    series.spec_id = spec.id;
    const auto t0 = Clock::now();
    const pid_t pid = spawn_pinned(argv);

    const auto interval = std::chrono::milliseconds(spec.sample_interval_ms);
    const auto limit = std::chrono::duration<double>(spec.duration_limit_s);
    const double warmup_ms = spec.warmup_discard_s * 1000.0;

    auto prev_t = t0;
    std::uint64_t prev_cpu = cpu_time_ns(pid).value_or(0);
    auto next = t0 + interval;
    int status = 0;
    bool reaped = false;
    while (!reaped) {
        std::this_thread::sleep_until(next);
        const auto now = Clock::now();
        const auto cpu = cpu_time_ns(pid);
        const auto rss = rss_bytes(pid);
        // A reading taken after the subject exited comes from a zombie; drop it.
        if (waitpid(pid, &status, WNOHANG) == pid) {
            reaped = true;
            break;
        }
        if (cpu && rss) {
            const double wall_ns = std::chrono::duration<double, std::nano>(now - prev_t).count();
            const double used = *cpu >= prev_cpu ? static_cast<double>(*cpu - prev_cpu) : 0.0;
            const double t_ms = std::chrono::duration<double, std::milli>(now - t0).count();
            if (t_ms >= warmup_ms) series.samples.push_back({t_ms, 100.0 * used / wall_ns, *rss});
            prev_cpu = *cpu;
            prev_t = now;
        }
        if (now - t0 >= limit) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            series.timed_out = true;
            reaped = true;
        }
        next += interval;
        if (next < now) next = now + interval;
    }
    series.exit_status = decode_status(status);
    return series;
}

std::vector<RunSeries> run_repeated(const RunSpec& spec) {
    validate_run_spec(spec);
    std::vector<RunSeries> out;
    for (int i = 0; i < spec.repetitions; ++i) out.push_back(run_measurement(spec));
    return out;
}

MeasurementSummary summarize(const std::vector<RunSeries>& series) {
    std::vector<double> cpu_means, mem_means;
    for (const auto& s : series) {
        if (s.samples.empty()) continue;
        double cpu = 0.0, mem = 0.0;
        for (const auto& sample : s.samples) {
            cpu += sample.cpu_pct;
            mem += static_cast<double>(sample.rss_bytes);
        }
        cpu_means.push_back(cpu / static_cast<double>(s.samples.size()));
        mem_means.push_back(mem / static_cast<double>(s.samples.size()));
    }
    if (cpu_means.empty()) throw Error(ErrorCode::NoRuns, "no run produced samples");
    MeasurementSummary out;
    out.run_count = cpu_means.size();
    out.mean_cpu_pct = mean_of(cpu_means);
    out.std_cpu_pct = population_std(cpu_means, out.mean_cpu_pct);
    out.mean_mem_bytes = mean_of(mem_means);
    out.std_mem_bytes = population_std(mem_means, out.mean_mem_bytes);
    return out;
}

DeltaReport relative_change(const MeasurementSummary& before, const MeasurementSummary& after) {
    if (before.mean_cpu_pct == 0.0) throw Error(ErrorCode::DegenerateBaseline, "before CPU mean is zero");
    if (before.mean_mem_bytes == 0.0) throw Error(ErrorCode::DegenerateBaseline, "before memory mean is zero");
    return {100.0 * (before.mean_cpu_pct - after.mean_cpu_pct) / before.mean_cpu_pct,
            100.0 * (before.mean_mem_bytes - after.mean_mem_bytes) / before.mean_mem_bytes};
}

PerSmellImpact normalize_per_instance(const DeltaReport& delta, long instance_count) {
    if (instance_count < 1)
        throw Error(ErrorCode::NoInstances, "instance count " + std::to_string(instance_count));
    const auto n = static_cast<double>(instance_count);
    return {delta.dcpu_pct / n, delta.dmem_pct / n};
}

std::string runs_csv(const std::vector<RunSeries>& series) {
    std::string out = "run_id,t_ms,cpu_pct,rss_bytes\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        for (const auto& s : series[i].samples)
            out += text::csv_line({std::to_string(i + 1), text::format_fixed(s.t_ms, 3),
                                   text::format_fixed(s.cpu_pct, 3), std::to_string(s.rss_bytes)});
    return out;
}

std::string summary_json(const MeasurementSummary& s) {
    nlohmann::ordered_json j;
    j["mean_cpu_pct"] = s.mean_cpu_pct;
    j["std_cpu_pct"] = s.std_cpu_pct;
    j["mean_mem_bytes"] = s.mean_mem_bytes;
    j["std_mem_bytes"] = s.std_mem_bytes;
    j["run_count"] = s.run_count;
    j["std_convention"] = "population";
    j["cpu_basis"] = "one-logical-core";
    j["parallel_runs"] = false;
    return j.dump(2) + "\n";
}

ImpactRecord measure_impact(const RunSpec& before, const RunSpec& after, const std::string& app,
                            AppCategory category, SmellKind kind, long instance_count) {
    const auto before_summary = summarize(run_repeated(before));
    const auto after_summary = summarize(run_repeated(after));
    const auto delta = relative_change(before_summary, after_summary);
    ImpactRecord r;
    r.app = app;
    r.category = category;
    r.kind = kind;
    r.instance_count = instance_count;
    r.dcpu_total_pct = delta.dcpu_pct;
    r.dmem_total_pct = delta.dmem_pct;
    if (instance_count >= 1) {
        const auto per = normalize_per_instance(delta, instance_count);
        r.dcpu_per_instance = per.dcpu_per_instance;
        r.dmem_per_instance = per.dmem_per_instance;
    }
    validate_record(r);
    return r;
}

}  // namespace smellwatt
