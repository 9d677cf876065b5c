#pragma once

#include <cstdint>
#include <string>

#include "rtslice/config.hpp"
#include "rtslice/sim.hpp"
#include "rtslice/stats.hpp"

namespace rtslice::cli {

/// Built-in workload configurations mirroring the four measured test cases:
///   1 - lower bound: N x (900 us runtime, 10 ms period), N in [4, 10]
///   2 - upper bound: N x (2.5 ms runtime, 5 ms period), N in [1, 2]
///   3 - diversity:   prefix of {2.5/5 ms, 3/9 ms, 0.9/10 ms}, N in [1, 3]
///   4 - simulation:  N x (10 ms runtime, 100 ms period), N in [4, 10]
struct TestCaseParams {
    int number = 1;
    std::string system = "C5";  // BM | T3 | T3U | C5 | none
    int scale = 0;              // container count; 0 means the case maximum
    micros_t duration = 60'000'000;
    std::uint64_t seed = 42;
    /// Enables the rare firing-outlier mixture on the chosen profile.
    bool firing_spike = false;
};

struct TestCaseRun {
    ExperimentConfig config;
    admission::Verdict verdict;  // on the single full-capacity slice
    sim::Trace trace;
    stats::GroupReport report;
};

/// Builds the task set for a case at the given scale. Throws ConfigError for
/// unknown cases or scales outside the case's range.
model::TaskSet testcase_tasks(int number, int scale);

/// Plans (overload bypasses admission with a warning on stderr), simulates
/// and reports one built-in case.
TestCaseRun run_testcase(const TestCaseParams& params);

/// Measured run-times (finish - start) per container, ready for group_report.
std::vector<stats::TaskSamples> measured_runtimes(const sim::Trace& trace);

/// Per-container firing latencies pooled across the trace.
std::vector<micros_t> firing_latencies(const sim::Trace& trace);

}  // namespace rtslice::cli
