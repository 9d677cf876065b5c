#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtslice/admission.hpp"
#include "rtslice/noise.hpp"
#include "rtslice/task.hpp"

namespace rtslice::sim {

struct SimConfig {
    admission::SliceAssignment assignment;
    noise::SystemProfile profile = noise::zero_profile();
    micros_t duration = 0;
    std::uint64_t seed = 0;
    /// Release offset per task id; tasks not listed release at t = 0.
    std::map<std::string, micros_t> release_offsets;
    /// Wake-up granularity in microseconds. 0 means ideal event-driven
    /// dispatch; 1000 mimics a fixed 1 kHz scheduler tick.
    micros_t quantum = 0;
};

struct TaskTrace {
    std::string task_id;
    std::string slice_id;
    std::vector<model::JobRecord> records;
    std::int64_t miss_count = 0;

    bool operator==(const TaskTrace&) const = default;
};

struct Trace {
    std::vector<TaskTrace> tasks;  // slice order, placement order within
    micros_t duration = 0;
    /// Set when the trace was ingested from external logs; noise fields are
    /// then unknown and reported as zero.
    bool external = false;

    const TaskTrace* find(const std::string& task_id) const;
    std::size_t record_count() const;

    bool operator==(const Trace&) const = default;
};

/// A ready job as seen by the dispatcher.
struct ReadyJob {
    micros_t deadline_abs = 0;
    micros_t release = 0;
    std::string_view task_id;
};

/// EDF pick: earliest absolute deadline, ties by earlier release, then
/// lexicographic task id. Returns the index of the chosen job.
std::size_t pick_next(std::span<const ReadyJob> ready);

/// Simulates preemptive EDF per slice over config.duration. Jobs release
/// every period (plus offset) while release < duration; a released job always
/// runs to completion, past its deadline if need be, and is then flagged
/// missed. Noise streams are derived from (seed, slice id) so slices are
/// independent of each other and of simulation order.
Trace simulate(const SimConfig& config, const model::TaskSet& tasks);

struct MissCounts {
    std::vector<std::pair<std::string, std::int64_t>> per_task;
    std::int64_t total = 0;
};

MissCounts count_misses(const Trace& trace);

}  // namespace rtslice::sim
