#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rtslice/ratio.hpp"

namespace rtslice::stats {

struct SummaryStats {
    std::size_t count = 0;
    micros_t min = 0;
    micros_t max = 0;
    double mean = 0.0;
    double median = 0.0;
    double sd = 0.0;  // n-1 divisor; 0 for a single sample
};

/// Order statistics plus mean/sd. Throws Error on empty input. The median of
/// an even-length sample is the midpoint of the two central values.
SummaryStats summarize(std::span<const micros_t> samples);

/// One container's measured run-times within a configuration.
struct TaskSamples {
    std::string task_id;
    std::vector<micros_t> samples;
    std::int64_t miss_count = 0;
};

/// One report row: pooled average, the per-container |mean - median| skew
/// range, and the deviation of the container with the highest skew.
struct GroupReport {
    std::string label;
    std::string system;  // optional column grouping for rendering
    double avg = 0.0;    // pooled over all records of all containers
    double skw_min = 0.0;
    double skw_max = 0.0;
    double sd_mx = 0.0;
    std::vector<std::pair<std::string, std::int64_t>> misses;
    std::int64_t total_misses = 0;
    /// Mirrors the starred rows: set when some container produced no records.
    bool incomplete_log = false;
};

GroupReport group_report(const std::string& label, const std::vector<TaskSamples>& tasks,
                         const std::string& system = "");

struct ThresholdReport {
    double threshold_us = 0.0;  // cycle / 10
    std::size_t overshoots = 0;
    std::size_t total = 0;
    double ratio = 0.0;
};

/// Counts firing latencies strictly above one tenth of the cycle time.
ThresholdReport threshold_check(std::span<const micros_t> firing_latencies, micros_t cycle);

/// Plain-text table, one row per configuration label with AVG / SKW / SD_MX
/// columns per system; starred rows mark incomplete logs.
std::string render_table(const std::vector<GroupReport>& reports,
                         const std::vector<std::string>& systems);

/// Machine-readable form:
///   label,avg_us,skw_min_us,skw_max_us,sd_mx_us,misses,starred
std::string render_delimited(const std::vector<GroupReport>& reports);

/// Parses rows produced by render_delimited (header required).
std::vector<GroupReport> parse_delimited(const std::string& text);

}  // namespace rtslice::stats
