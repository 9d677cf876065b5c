#pragma once

#include <string>
#include <vector>

#include "rtslice/ratio.hpp"

namespace rtslice::model {

/// One container's periodic timing contract. Durations are integer
/// microseconds; the valid chain is runtime <= wcet <= deadline <= period.
struct TaskSpec {
    std::string id;
    micros_t period = 0;
    micros_t deadline = 0;  // relative to release; defaults to period in configs
    micros_t wcet = 0;
    micros_t runtime = 0;  // programmed busy-loop time

    bool implicit_deadline() const { return deadline == period; }
    Ratio utilization() const { return Ratio(wcet, period); }
    Ratio density() const { return Ratio(wcet, deadline); }

    bool operator==(const TaskSpec&) const = default;
};

/// One executed instance of a task, decomposed so that
///   total == firing_latency + env_noise + task_noise + runtime
/// holds exactly in integer microseconds.
struct JobRecord {
    std::string task_id;
    std::int64_t job_index = 0;
    micros_t release = 0;
    micros_t start = 0;
    micros_t finish = 0;
    micros_t firing_latency = 0;  // start - release
    micros_t env_noise = 0;
    micros_t task_noise = 0;  // preemption gaps between start and finish
    micros_t runtime = 0;
    micros_t total = 0;  // finish - release
    micros_t deadline_abs = 0;
    bool missed = false;

    bool operator==(const JobRecord&) const = default;
};

struct TaskSet {
    std::vector<TaskSpec> tasks;

    const TaskSpec* find(const std::string& id) const;

    bool operator==(const TaskSet&) const = default;
};

/// Returns the spec unchanged iff every invariant holds; otherwise throws
/// ConstraintViolation naming the violated inequality.
const TaskSpec& validate(const TaskSpec& task);

/// Validates every task plus set-level invariants (non-empty, unique ids).
const TaskSet& validate(const TaskSet& set);

/// Sum of wcet/period as an exact rational.
Ratio utilization_exact(const TaskSet& set);

/// Sum of wcet/period, as a plain double for reporting.
double utilization(const TaskSet& set);

/// Sum of wcet/deadline (the density bound used for constrained deadlines).
Ratio density_exact(const TaskSet& set);

/// Least common multiple of all periods. Throws HyperperiodOverflow when the
/// lcm leaves the 64-bit range.
micros_t hyperperiod(const TaskSet& set);

}  // namespace rtslice::model
