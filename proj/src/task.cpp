#include "rtslice/task.hpp"

#include <limits>
#include <numeric>
#include <unordered_set>

#include "rtslice/errors.hpp"

namespace rtslice::model {

const TaskSpec* TaskSet::find(const std::string& id) const {
    for (const auto& t : tasks) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

const TaskSpec& validate(const TaskSpec& task) {
    if (task.id.empty()) throw ConstraintViolation("task id must not be empty");
    auto positive = [&](micros_t v, const char* name) {
        if (v <= 0) {
            throw ConstraintViolation("task '" + task.id + "': " + name +
                                      " must be positive, got " + std::to_string(v));
        }
    };
    positive(task.runtime, "runtime");
    positive(task.wcet, "wcet");
    positive(task.deadline, "deadline");
    positive(task.period, "period");
    if (task.runtime > task.wcet) {
        throw ConstraintViolation("task '" + task.id + "': runtime > wcet (" +
                                  std::to_string(task.runtime) + " > " +
                                  std::to_string(task.wcet) + ")");
    }
    if (task.wcet > task.deadline) {
        throw ConstraintViolation("task '" + task.id + "': wcet > deadline (" +
                                  std::to_string(task.wcet) + " > " +
                                  std::to_string(task.deadline) + ")");
    }
    if (task.deadline > task.period) {
        throw ConstraintViolation("task '" + task.id + "': deadline > period (" +
                                  std::to_string(task.deadline) + " > " +
                                  std::to_string(task.period) + ")");
    }
    return task;
}

const TaskSet& validate(const TaskSet& set) {
    if (set.tasks.empty()) throw ConstraintViolation("task set must not be empty");
    std::unordered_set<std::string> seen;
    for (const auto& task : set.tasks) {
        validate(task);
        if (!seen.insert(task.id).second) {
            throw ConstraintViolation("duplicate task id '" + task.id + "'");
        }
    }
    return set;
}

Ratio utilization_exact(const TaskSet& set) {
    Ratio sum;
    for (const auto& task : set.tasks) sum += task.utilization();
    return sum;
}

double utilization(const TaskSet& set) { return utilization_exact(set).value(); }

Ratio density_exact(const TaskSet& set) {
    Ratio sum;
    for (const auto& task : set.tasks) sum += task.density();
    return sum;
}

micros_t hyperperiod(const TaskSet& set) {
    micros_t lcm = 1;
    for (const auto& task : set.tasks) {
        const micros_t g = std::gcd(lcm, task.period);
        const micros_t step = lcm / g;
        if (task.period != 0 && step > std::numeric_limits<micros_t>::max() / task.period) {
            throw HyperperiodOverflow("hyperperiod exceeds 64-bit microseconds");
        }
        lcm = step * task.period;
    }
    return lcm;
}

}  // namespace rtslice::model
