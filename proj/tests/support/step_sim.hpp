#pragma once

// Brute-force EDF reference used as an independent oracle for the
// event-driven simulator: advance one microsecond at a time, release jobs on
// the tick, always run the ready job with the earliest absolute deadline
// (ties by release, then task id). Zero noise, single slice.

#include <cstdint>
#include <string>
#include <vector>

namespace step_sim {

struct Task {
    std::string id;
    std::int64_t runtime;
    std::int64_t period;
    std::int64_t deadline;  // relative
    std::int64_t offset = 0;
};

struct Record {
    std::int64_t release;
    std::int64_t start;
    std::int64_t finish;
    std::int64_t deadline_abs;
    bool missed;
};

struct Job {
    std::size_t task;
    std::int64_t release;
    std::int64_t deadline_abs;
    std::int64_t remaining;
    std::int64_t start = -1;
};

/// Runs until every job released before `horizon` has completed. Returns the
/// per-task records in release order.
inline std::vector<std::vector<Record>> run(const std::vector<Task>& tasks,
                                            std::int64_t horizon) {
    std::vector<std::vector<Record>> records(tasks.size());
    std::vector<std::int64_t> next_release;
    for (const auto& t : tasks) next_release.push_back(t.offset);

    std::vector<Job> pending;
    std::int64_t t = 0;
    while (true) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (next_release[i] < horizon && next_release[i] == t) {
                pending.push_back({i, t, t + tasks[i].deadline, tasks[i].runtime});
                next_release[i] += tasks[i].period;
            }
        }
        // Pick EDF among released jobs.
        std::size_t best = pending.size();
        for (std::size_t j = 0; j < pending.size(); ++j) {
            if (pending[j].release > t) continue;
            if (best == pending.size()) {
                best = j;
                continue;
            }
            const Job& a = pending[j];
            const Job& b = pending[best];
            const bool better =
                a.deadline_abs != b.deadline_abs ? a.deadline_abs < b.deadline_abs
                : a.release != b.release         ? a.release < b.release
                                                 : tasks[a.task].id < tasks[b.task].id;
            if (better) best = j;
        }
        if (best < pending.size()) {
            Job& job = pending[best];
            if (job.start < 0) job.start = t;
            if (--job.remaining == 0) {
                records[job.task].push_back(
                    {job.release, job.start, t + 1, job.deadline_abs, t + 1 > job.deadline_abs});
                pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
            }
        } else {
            bool more_releases = false;
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                more_releases |= next_release[i] < horizon;
            }
            if (!more_releases && pending.empty()) break;
        }
        ++t;
    }
    return records;
}

}  // namespace step_sim
