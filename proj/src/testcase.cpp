#include "rtslice/testcase.hpp"

#include <cstdio>

#include "rtslice/errors.hpp"

namespace rtslice::cli {

namespace {

model::TaskSpec periodic(const std::string& id, micros_t runtime, micros_t period) {
    return {id, period, period, runtime, runtime};
}

}  // namespace

model::TaskSet testcase_tasks(int number, int scale) {
    model::TaskSet set;
    auto check_scale = [&](int lo, int hi) {
        if (scale == 0) scale = hi;
        if (scale < lo || scale > hi) {
            throw ConfigError("test case " + std::to_string(number) + " supports " +
                              std::to_string(lo) + ".." + std::to_string(hi) +
                              " containers, got " + std::to_string(scale));
        }
    };
    switch (number) {
        case 1:
            check_scale(4, 10);
            for (int i = 0; i < scale; ++i) {
                set.tasks.push_back(periodic("c" + std::to_string(i), 900, 10'000));
            }
            break;
        case 2:
            check_scale(1, 2);
            for (int i = 0; i < scale; ++i) {
                set.tasks.push_back(periodic("c" + std::to_string(i), 2'500, 5'000));
            }
            break;
        case 3: {
            check_scale(1, 3);
            // Ordered so that load grows with the unit count the way the
            // measured rows do: <60%, <90%, ~100%.
            const model::TaskSpec pool[] = {periodic("c0", 2'500, 5'000),
                                            periodic("c1", 3'000, 9'000),
                                            periodic("c2", 900, 10'000)};
            for (int i = 0; i < scale; ++i) set.tasks.push_back(pool[i]);
            break;
        }
        case 4:
            check_scale(4, 10);
            for (int i = 0; i < scale; ++i) {
                set.tasks.push_back(periodic("c" + std::to_string(i), 10'000, 100'000));
            }
            break;
        default:
            throw ConfigError("unknown test case " + std::to_string(number) +
                              " (built-ins are 1..4)");
    }
    return set;
}

std::vector<stats::TaskSamples> measured_runtimes(const sim::Trace& trace) {
    std::vector<stats::TaskSamples> out;
    for (const auto& task : trace.tasks) {
        stats::TaskSamples samples;
        samples.task_id = task.task_id;
        samples.miss_count = task.miss_count;
        samples.samples.reserve(task.records.size());
        for (const auto& rec : task.records) {
            samples.samples.push_back(rec.finish - rec.start);
        }
        out.push_back(std::move(samples));
    }
    return out;
}

std::vector<micros_t> firing_latencies(const sim::Trace& trace) {
    std::vector<micros_t> out;
    out.reserve(trace.record_count());
    for (const auto& task : trace.tasks) {
        for (const auto& rec : task.records) out.push_back(rec.firing_latency);
    }
    return out;
}

TestCaseRun run_testcase(const TestCaseParams& params) {
    TestCaseRun run;
    run.config.tasks = testcase_tasks(params.number, params.scale);
    run.config.slices = {{"s0", Ratio(1, 1)}};
    run.config.profile = resolve_profile(params.system);
    if (params.firing_spike) {
        run.config.profile = run.config.profile.with_firing_spike();
    }
    run.config.duration = params.duration;
    run.config.seed = params.seed;

    run.verdict = admission::edf_feasible(run.config.tasks, run.config.slices.front());

    sim::SimConfig sim_config;
    sim_config.profile = run.config.profile;
    sim_config.duration = run.config.duration;
    sim_config.seed = run.config.seed;
    try {
        sim_config.assignment = admission::partition(run.config.tasks, run.config.slices);
    } catch (const Infeasible& e) {
        std::fprintf(stderr, "warning: %s; simulating the overload anyway\n", e.what());
        admission::SliceLoad all{"s0", {}, model::utilization_exact(run.config.tasks),
                                 Ratio(1, 1)};
        for (const auto& t : run.config.tasks.tasks) all.task_ids.push_back(t.id);
        sim_config.assignment.slices = {std::move(all)};
    }

    run.trace = sim::simulate(sim_config, run.config.tasks);

    const std::string label =
        "case" + std::to_string(params.number) + "-" +
        std::to_string(static_cast<int>(run.config.tasks.tasks.size())) + "u";
    run.report = stats::group_report(label, measured_runtimes(run.trace), params.system);
    return run;
}

}  // namespace rtslice::cli
