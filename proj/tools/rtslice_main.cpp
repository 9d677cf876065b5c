#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtslice/admission.hpp"
#include "rtslice/config.hpp"
#include "rtslice/errors.hpp"
#include "rtslice/joblog.hpp"
#include "rtslice/sim.hpp"
#include "rtslice/stats.hpp"
#include "rtslice/testcase.hpp"

namespace {

using namespace rtslice;

constexpr int kOk = 0;
constexpr int kRejected = 1;  // infeasible plan, risk rejection, --strict misses
constexpr int kBadInput = 2;  // configuration or format errors

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

cli::ExperimentConfig load_config_file(const std::string& path) {
    return cli::load_config(slurp(path));
}

void print_assignment(const admission::SliceAssignment& assignment) {
    for (const auto& slice : assignment.slices) {
        std::printf("slice %s (capacity %s): utilization %s, tasks:", slice.slice_id.c_str(),
                    slice.capacity.to_string().c_str(), slice.utilization.to_string().c_str());
        if (slice.task_ids.empty()) std::printf(" -");
        for (const auto& id : slice.task_ids) std::printf(" %s", id.c_str());
        std::printf("\n");
    }
}

void print_report(const stats::GroupReport& report, const std::string& format) {
    if (format == "delimited") {
        std::fputs(stats::render_delimited({report}).c_str(), stdout);
        return;
    }
    std::fputs(stats::render_table({report}, report.system.empty()
                                                 ? std::vector<std::string>{}
                                                 : std::vector<std::string>{report.system})
                   .c_str(),
               stdout);
    std::printf("misses:");
    for (const auto& [id, count] : report.misses) {
        std::printf(" %s=%lld", id.c_str(), static_cast<long long>(count));
    }
    std::printf(" total=%lld\n", static_cast<long long>(report.total_misses));
}

/// Risk check from the configured profile: each task's run-time model is the
/// programmed runtime plus the profile's environment noise.
admission::RiskVerdict risk_verdict(const cli::ExperimentConfig& config) {
    std::map<std::string, admission::RuntimeDistribution> dists;
    const auto& env = config.profile.noise.env_runtime;
    for (const auto& task : config.tasks.tasks) {
        dists[task.id] = admission::RuntimeDistribution::normal(
            static_cast<double>(task.runtime) + env.model_mean(), env.model_sd());
    }
    return admission::admit_with_risk(config.tasks, dists, config.profile.noise,
                                      {*config.risk});
}

int cmd_plan(const std::string& config_path, const std::string& format) {
    const auto config = load_config_file(config_path);
    admission::SliceAssignment assignment;
    try {
        assignment = admission::partition(config.tasks, config.slices, config.pins);
    } catch (const Infeasible& e) {
        std::printf("verdict: infeasible (%s)\n", e.what());
        return kRejected;
    }
    if (format != "delimited") print_assignment(assignment);
    std::printf("verdict: accept (utilization %.6f)\n", model::utilization(config.tasks));
    if (config.risk) {
        const auto risk = risk_verdict(config);
        for (const auto& [id, p] : risk.per_task) {
            std::printf("risk %s: %.6g\n", id.c_str(), p);
        }
        std::printf("risk combined: %.6g (policy %.6g) -> %s\n", risk.combined, *config.risk,
                    risk.accepted ? "accept" : "reject");
        if (!risk.accepted) return kRejected;
    }
    return kOk;
}

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<micros_t> duration;
    std::optional<std::string> profile;
};

int run_and_report(cli::ExperimentConfig config, const RunOverrides& overrides,
                   const std::string& out_path, const std::string& format, bool strict,
                   const std::string& label) {
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.duration) config.duration = *overrides.duration;
    if (overrides.profile) config.profile = cli::resolve_profile(*overrides.profile);

    sim::SimConfig sim_config;
    sim_config.profile = config.profile;
    sim_config.duration = config.duration;
    sim_config.seed = config.seed;
    sim_config.quantum = config.quantum;
    sim_config.release_offsets = config.release_offsets;
    try {
        sim_config.assignment = admission::partition(config.tasks, config.slices, config.pins);
    } catch (const Infeasible& e) {
        std::fprintf(stderr, "warning: %s; simulating the overload anyway\n", e.what());
        admission::SliceLoad all{config.slices.front().id, {},
                                 model::utilization_exact(config.tasks),
                                 config.slices.front().capacity};
        for (const auto& t : config.tasks.tasks) all.task_ids.push_back(t.id);
        sim_config.assignment.slices = {std::move(all)};
    }

    const sim::Trace trace = sim::simulate(sim_config, config.tasks);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + out_path + "'");
        out << cli::write_joblog(trace);
    }
    const auto report =
        stats::group_report(label, cli::measured_runtimes(trace), config.profile.name);
    print_report(report, format);
    if (strict && report.total_misses > 0) return kRejected;
    return kOk;
}

int cmd_analyze(const std::vector<std::string>& logs, micros_t cycle, const std::string& label,
                const std::string& format) {
    const sim::Trace trace = cli::ingest_logs(logs);
    const auto report = stats::group_report(label, cli::measured_runtimes(trace));
    if (format != "delimited") {
        for (const auto& task : trace.tasks) {
            if (task.records.empty()) continue;
            std::vector<micros_t> runs;
            runs.reserve(task.records.size());
            for (const auto& rec : task.records) runs.push_back(rec.finish - rec.start);
            const auto s = stats::summarize(runs);
            std::printf("%s: n=%zu min=%lld max=%lld mean=%.2f median=%.1f sd=%.2f misses=%lld\n",
                        task.task_id.c_str(), s.count, static_cast<long long>(s.min),
                        static_cast<long long>(s.max), s.mean, s.median, s.sd,
                        static_cast<long long>(task.miss_count));
        }
    }
    print_report(report, format);
    const auto firing = cli::firing_latencies(trace);
    const auto threshold = stats::threshold_check(firing, cycle);
    std::printf("firing threshold %.1f us (cycle %lld): %zu/%zu above (ratio %.3g)\n",
                threshold.threshold_us, static_cast<long long>(cycle), threshold.overshoots,
                threshold.total, threshold.ratio);
    return kOk;
}

int cmd_report(const std::string& in_path) {
    const auto reports = stats::parse_delimited(slurp(in_path));
    std::vector<std::string> systems;  // parsed rows carry no system column
    std::fputs(stats::render_table(reports, systems).c_str(), stdout);
    return kOk;
}

int cmd_testcase(const cli::TestCaseParams& params, const std::string& out_path,
                 const std::string& format, bool strict) {
    const auto run = cli::run_testcase(params);
    if (format != "delimited") {
        std::printf("%s on %s: %s\n", run.report.label.c_str(), params.system.c_str(),
                    run.verdict.reason.c_str());
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + out_path + "'");
        out << cli::write_joblog(run.trace);
    }
    print_report(run.report, format);
    if (strict && run.report.total_misses > 0) return kRejected;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rtslice - planner, admission control and EDF simulation for "
                 "periodic real-time containers on CPU slices"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "text";
    std::string in_path = "-";
    std::vector<std::string> log_paths;
    std::string label = "analyzed";
    bool strict = false;
    micros_t cycle = 100'000;
    RunOverrides overrides;
    std::uint64_t seed_flag = 0;
    micros_t duration_flag = 0;
    std::string profile_flag;
    cli::TestCaseParams tc;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"text", "delimited"}));
    };

    auto* plan = app.add_subcommand("plan", "Admission test and slice partitioning only");
    plan->add_option("--config", config_path, "Experiment config file")->required();
    add_format(plan);

    auto* simulate = app.add_subcommand("simulate", "Plan, simulate and report");
    simulate->add_option("--config", config_path, "Experiment config file")->required();
    auto* seed_opt = simulate->add_option("--seed", seed_flag, "Override the config seed");
    auto* dur_opt =
        simulate->add_option("--duration", duration_flag, "Override the duration (us)");
    auto* prof_opt =
        simulate->add_option("--profile", profile_flag, "Override the noise profile");
    simulate->add_option("--out", out_path, "Write the job log here");
    simulate->add_flag("--strict", strict, "Exit 1 when any deadline is missed");
    add_format(simulate);

    auto* analyze = app.add_subcommand("analyze", "Ingest job logs and report statistics");
    analyze->add_option("--log", log_paths, "Job log file(s)")->required();
    analyze->add_option("--cycle", cycle, "Cycle time for the firing threshold (us)");
    analyze->add_option("--label", label, "Configuration label for the report row");
    add_format(analyze);

    auto* report = app.add_subcommand("report", "Render delimited report rows as a table");
    report->add_option("--in", in_path, "Delimited report file ('-' for stdin)");

    auto* testcase = app.add_subcommand("testcase", "Run a built-in measured workload");
    testcase->add_option("--case", tc.number, "Test case number")->required()
        ->check(CLI::Range(1, 4));
    testcase->add_option("--system,--profile", tc.system,
                         "System profile (BM, T3, T3U, C5, none)");
    testcase->add_option("--scale", tc.scale, "Container count (0 = case maximum)");
    testcase->add_option("--duration", tc.duration, "Simulated duration (us)");
    testcase->add_option("--seed", tc.seed, "Noise seed");
    testcase->add_flag("--spike", tc.firing_spike, "Enable the rare firing-outlier mixture");
    testcase->add_option("--out", out_path, "Write the job log here");
    testcase->add_flag("--strict", strict, "Exit 1 when any deadline is missed");
    add_format(testcase);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (plan->parsed()) return cmd_plan(config_path, format);
        if (simulate->parsed()) {
            if (*seed_opt) overrides.seed = seed_flag;
            if (*dur_opt) overrides.duration = duration_flag;
            if (*prof_opt) overrides.profile = profile_flag;
            return run_and_report(load_config_file(config_path), overrides, out_path, format,
                                  strict, "simulated");
        }
        if (analyze->parsed()) return cmd_analyze(log_paths, cycle, label, format);
        if (report->parsed()) return cmd_report(in_path);
        if (testcase->parsed()) return cmd_testcase(tc, out_path, format, strict);
    } catch (const Infeasible& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRejected;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kBadInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kBadInput;
    }
    return kOk;
}
