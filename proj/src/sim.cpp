#include "rtslice/sim.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

#include "rtslice/errors.hpp"

namespace rtslice::sim {

namespace {

constexpr micros_t kNever = std::numeric_limits<micros_t>::max();

struct JobState {
    std::size_t task = 0;  // index into the slice's task list
    std::int64_t index = 0;
    micros_t release = 0;
    micros_t deadline_abs = 0;
    micros_t firing_sample = 0;
    micros_t env_sample = 0;
    micros_t service_total = 0;
    micros_t remaining = 0;
    micros_t start = 0;
    bool started = false;
};

// Release events draw noise samples, so they carry a fixed rank below
// eligibility events to pin the rng consumption order at equal timestamps.
enum class EventKind : int { Release = 0, Eligible = 1 };

struct Event {
    micros_t time;
    EventKind kind;
    std::size_t task;
    std::int64_t job;
    std::size_t slot = 0;  // jobs[] index, set on Eligible events

    bool operator>(const Event& other) const {
        if (time != other.time) return time > other.time;
        if (kind != other.kind) return kind > other.kind;
        if (task != other.task) return task > other.task;
        return job > other.job;
    }
};

struct EdfOrder {
    const std::vector<std::size_t>* lex_rank;
    const std::vector<JobState>* jobs;

    bool operator()(std::size_t a, std::size_t b) const {
        const JobState& ja = (*jobs)[a];
        const JobState& jb = (*jobs)[b];
        if (ja.deadline_abs != jb.deadline_abs) return ja.deadline_abs < jb.deadline_abs;
        if (ja.release != jb.release) return ja.release < jb.release;
        if (ja.task != jb.task) return (*lex_rank)[ja.task] < (*lex_rank)[jb.task];
        return ja.index < jb.index;
    }
};

micros_t round_up(micros_t t, micros_t quantum) {
    if (quantum <= 0) return t;
    const micros_t rem = t % quantum;
    return rem == 0 ? t : t + (quantum - rem);
}

void simulate_slice(const admission::SliceLoad& slice, const model::TaskSet& tasks,
                    const SimConfig& config, std::vector<TaskTrace>& out) {
    std::vector<const model::TaskSpec*> specs;
    std::vector<micros_t> offsets;
    for (const auto& id : slice.task_ids) {
        const auto* spec = tasks.find(id);
        if (spec == nullptr) {
            throw ConfigError("assignment references unknown task '" + id + "'");
        }
        specs.push_back(spec);
        const auto it = config.release_offsets.find(id);
        offsets.push_back(it == config.release_offsets.end() ? 0 : it->second);
    }

    // Tie-break rank: position of each task id in lexicographic order.
    std::vector<std::size_t> by_id(specs.size());
    for (std::size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
    std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
        return specs[a]->id < specs[b]->id;
    });
    std::vector<std::size_t> lex_rank(specs.size());
    for (std::size_t pos = 0; pos < by_id.size(); ++pos) lex_rank[by_id[pos]] = pos;

    noise::Rng rng(config.seed, "slice/" + slice.slice_id);

    std::vector<JobState> jobs;
    std::vector<std::vector<model::JobRecord>> records(specs.size());

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (offsets[i] < config.duration) {
            events.push({offsets[i], EventKind::Release, i, 0});
        }
    }

    EdfOrder order{&lex_rank, &jobs};
    std::set<std::size_t, EdfOrder> ready(order);

    std::size_t running = static_cast<std::size_t>(-1);
    micros_t running_since = 0;
    micros_t now = 0;

    auto complete = [&](std::size_t j, micros_t t) {
        JobState& job = jobs[j];
        const auto& spec = *specs[job.task];
        model::JobRecord rec;
        rec.task_id = spec.id;
        rec.job_index = job.index;
        rec.release = job.release;
        rec.start = job.start;
        rec.finish = t;
        rec.firing_latency = job.start - job.release;
        rec.env_noise = job.env_sample;
        rec.task_noise = (t - job.start) - job.service_total;
        rec.runtime = spec.runtime;
        rec.total = t - job.release;
        rec.deadline_abs = job.deadline_abs;
        rec.missed = t > job.deadline_abs;
        records[job.task].push_back(std::move(rec));
    };

    auto drain_events = [&](micros_t t) {
        while (!events.empty() && events.top().time <= t) {
            const Event ev = events.top();
            events.pop();
            if (ev.kind == EventKind::Release) {
                const auto& spec = *specs[ev.task];
                const auto [firing, env] = config.profile.noise.sample(rng);
                JobState job;
                job.task = ev.task;
                job.index = ev.job;
                job.release = ev.time;
                job.deadline_abs = ev.time + spec.deadline;
                job.firing_sample = firing;
                job.env_sample = env;
                job.service_total = spec.runtime + env;
                job.remaining = job.service_total;
                jobs.push_back(job);
                const micros_t eligible = round_up(ev.time + firing, config.quantum);
                events.push({eligible, EventKind::Eligible, ev.task, ev.job, jobs.size() - 1});
                const micros_t next_release = ev.time + spec.period;
                if (next_release < config.duration) {
                    events.push({next_release, EventKind::Release, ev.task, ev.job + 1});
                }
            } else {
                ready.insert(ev.slot);
            }
        }
    };

    auto dispatch = [&](micros_t t) {
        if (running != static_cast<std::size_t>(-1) || ready.empty()) return;
        const std::size_t j = *ready.begin();
        ready.erase(ready.begin());
        JobState& job = jobs[j];
        if (!job.started) {
            job.started = true;
            job.start = t;
        }
        running = j;
        running_since = t;
    };

    while (true) {
        const micros_t t_event = events.empty() ? kNever : events.top().time;
        const micros_t t_complete =
            running == static_cast<std::size_t>(-1) ? kNever
                                                    : running_since + jobs[running].remaining;
        if (t_event == kNever && t_complete == kNever) {
            if (ready.empty()) break;
            dispatch(now);
            continue;
        }
        if (t_complete <= t_event) {
            now = t_complete;
            const std::size_t done = running;
            running = static_cast<std::size_t>(-1);
            jobs[done].remaining = 0;
            complete(done, now);
            drain_events(now);
            dispatch(now);
        } else {
            now = t_event;
            drain_events(now);
            if (running != static_cast<std::size_t>(-1) && !ready.empty()) {
                const std::size_t best = *ready.begin();
                if (jobs[best].deadline_abs < jobs[running].deadline_abs) {
                    JobState& preempted = jobs[running];
                    preempted.remaining -= now - running_since;
                    const std::size_t old = running;
                    running = static_cast<std::size_t>(-1);
                    ready.insert(old);
                    dispatch(now);
                }
            } else {
                dispatch(now);
            }
        }
    }

    for (std::size_t i = 0; i < specs.size(); ++i) {
        TaskTrace tt;
        tt.task_id = specs[i]->id;
        tt.slice_id = slice.slice_id;
        tt.records = std::move(records[i]);
        // Firing spikes can reorder completions within a task; keep records
        // in release order.
        std::sort(tt.records.begin(), tt.records.end(),
                  [](const model::JobRecord& a, const model::JobRecord& b) {
                      return a.job_index < b.job_index;
                  });
        for (const auto& rec : tt.records) {
            if (rec.missed) ++tt.miss_count;
        }
        out.push_back(std::move(tt));
    }
}

}  // namespace

const TaskTrace* Trace::find(const std::string& task_id) const {
    for (const auto& t : tasks) {
        if (t.task_id == task_id) return &t;
    }
    return nullptr;
}

std::size_t Trace::record_count() const {
    std::size_t n = 0;
    for (const auto& t : tasks) n += t.records.size();
    return n;
}

std::size_t pick_next(std::span<const ReadyJob> ready) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < ready.size(); ++i) {
        const ReadyJob& a = ready[i];
        const ReadyJob& b = ready[best];
        if (a.deadline_abs != b.deadline_abs) {
            if (a.deadline_abs < b.deadline_abs) best = i;
        } else if (a.release != b.release) {
            if (a.release < b.release) best = i;
        } else if (a.task_id < b.task_id) {
            best = i;
        }
    }
    return best;
}

Trace simulate(const SimConfig& config, const model::TaskSet& tasks) {
    if (config.duration <= 0) throw ConfigError("duration must be positive");
    if (config.quantum < 0) throw ConfigError("quantum must be >= 0");
    Trace trace;
    trace.duration = config.duration;
    for (const auto& slice : config.assignment.slices) {
        simulate_slice(slice, tasks, config, trace.tasks);
    }
    return trace;
}

MissCounts count_misses(const Trace& trace) {
    MissCounts counts;
    for (const auto& task : trace.tasks) {
        counts.per_task.emplace_back(task.task_id, task.miss_count);
        counts.total += task.miss_count;
    }
    return counts;
}

}  // namespace rtslice::sim
