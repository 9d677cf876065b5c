#include "rtslice/admission.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rtslice/errors.hpp"

namespace rtslice::admission {

namespace {

double normal_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

bool all_implicit(const model::TaskSet& set) {
    return std::all_of(set.tasks.begin(), set.tasks.end(),
                       [](const model::TaskSpec& t) { return t.implicit_deadline(); });
}

}  // namespace

Verdict edf_feasible(const model::TaskSet& set, const ResourceSlice& slice) {
    Verdict v;
    v.utilization = model::utilization_exact(set);
    if (all_implicit(set)) {
        if (v.utilization <= slice.capacity) {
            v.feasibility = Feasibility::Accept;
            v.reason = "utilization " + v.utilization.to_string() + " <= capacity " +
                       slice.capacity.to_string();
        } else {
            v.feasibility = Feasibility::Reject;
            v.reason = "utilization " + v.utilization.to_string() + " > capacity " +
                       slice.capacity.to_string();
        }
        return v;
    }
    v.density = model::density_exact(set);
    if (*v.density <= slice.capacity) {
        v.feasibility = Feasibility::Accept;
        v.reason = "density " + v.density->to_string() + " <= capacity " +
                   slice.capacity.to_string();
    } else if (v.utilization > slice.capacity) {
        v.feasibility = Feasibility::Reject;
        v.reason = "utilization " + v.utilization.to_string() + " > capacity " +
                   slice.capacity.to_string();
    } else {
        v.feasibility = Feasibility::InconclusiveReject;
        v.reason = "density " + v.density->to_string() + " > capacity " +
                   slice.capacity.to_string() + " while utilization " +
                   v.utilization.to_string() + " fits; density test is only sufficient";
    }
    return v;
}

const SliceLoad* SliceAssignment::find(const std::string& slice_id) const {
    for (const auto& s : slices) {
        if (s.slice_id == slice_id) return &s;
    }
    return nullptr;
}

const SliceLoad* SliceAssignment::slice_of(const std::string& task_id) const {
    for (const auto& s : slices) {
        for (const auto& id : s.task_ids) {
            if (id == task_id) return &s;
        }
    }
    return nullptr;
}

SliceAssignment partition(const model::TaskSet& set, const std::vector<ResourceSlice>& slices) {
    return partition(set, slices, {});
}

SliceAssignment partition(const model::TaskSet& set, const std::vector<ResourceSlice>& slices,
                          const std::map<std::string, std::string>& pins) {
    model::validate(set);
    if (slices.empty()) throw ConfigError("partition needs at least one slice");

    SliceAssignment assignment;
    std::vector<model::TaskSet> placed(slices.size());
    for (const auto& slice : slices) {
        assignment.slices.push_back({slice.id, {}, Ratio(), slice.capacity});
    }

    auto place = [&](std::size_t i, const model::TaskSpec& task) {
        model::TaskSet candidate = placed[i];
        candidate.tasks.push_back(task);
        if (!edf_feasible(candidate, slices[i]).accepted()) return false;
        placed[i] = std::move(candidate);
        assignment.slices[i].task_ids.push_back(task.id);
        assignment.slices[i].utilization += task.utilization();
        return true;
    };

    std::vector<std::string> unplaced;
    std::vector<const model::TaskSpec*> order;
    order.reserve(set.tasks.size());
    for (const auto& t : set.tasks) {
        const auto pin = pins.find(t.id);
        if (pin == pins.end()) {
            order.push_back(&t);
            continue;
        }
        bool pinned = false;
        for (std::size_t i = 0; i < slices.size(); ++i) {
            if (slices[i].id != pin->second) continue;
            pinned = place(i, t);
            break;
        }
        if (!pinned) unplaced.push_back(t.id);
    }

    // First-fit decreasing over the unpinned remainder, ties by id.
    std::sort(order.begin(), order.end(), [](const model::TaskSpec* a, const model::TaskSpec* b) {
        const auto ua = a->utilization();
        const auto ub = b->utilization();
        if (ua != ub) return ua > ub;
        return a->id < b->id;
    });
    for (const auto* task : order) {
        bool done = false;
        for (std::size_t i = 0; i < slices.size() && !done; ++i) {
            done = place(i, *task);
        }
        if (!done) unplaced.push_back(task->id);
    }
    if (!unplaced.empty()) {
        std::string msg = "no feasible slice for task(s):";
        for (const auto& id : unplaced) msg += " " + id;
        throw Infeasible(msg, std::move(unplaced));
    }
    return assignment;
}

RuntimeDistribution RuntimeDistribution::normal(double mean, double sd) {
    if (sd < 0.0) throw InvalidStats("sd must be >= 0");
    RuntimeDistribution d;
    d.kind = Kind::Normal;
    d.mean = mean;
    d.sd = sd;
    d.sample_count = 0;
    return d;
}

RuntimeDistribution RuntimeDistribution::as_empirical() const {
    if (samples.empty()) throw InsufficientSamples("no samples retained for empirical view");
    RuntimeDistribution d = *this;
    d.kind = Kind::Empirical;
    return d;
}

RuntimeDistribution RuntimeDistribution::as_normal() const {
    RuntimeDistribution d = *this;
    d.kind = Kind::Normal;
    return d;
}

RuntimeDistribution fit_runtime_distribution(std::vector<micros_t> samples) {
    if (samples.size() < 2) {
        throw InsufficientSamples("curve fitting needs at least 2 samples, got " +
                                  std::to_string(samples.size()));
    }
    std::sort(samples.begin(), samples.end());
    RuntimeDistribution d;
    d.kind = RuntimeDistribution::Kind::Normal;
    d.sample_count = samples.size();
    double sum = 0.0;
    for (micros_t v : samples) sum += static_cast<double>(v);
    d.mean = sum / static_cast<double>(samples.size());
    double sq = 0.0;
    for (micros_t v : samples) {
        const double delta = static_cast<double>(v) - d.mean;
        sq += delta * delta;
    }
    d.sd = std::sqrt(sq / static_cast<double>(samples.size() - 1));
    d.samples = std::move(samples);
    return d;
}

double miss_probability(const model::TaskSpec& task, const RuntimeDistribution& dist,
                        const noise::NoiseModel& firing, const MonteCarloOptions& opts) {
    const double deadline = static_cast<double>(task.deadline);
    const auto& fdist = firing.firing;

    const bool firing_constant =
        !fdist.has_spike() && (fdist.kind() == noise::Distribution::Kind::Constant ||
                               (fdist.kind() == noise::Distribution::Kind::TruncatedNormal &&
                                fdist.normal_sd() == 0.0));
    if (dist.kind == RuntimeDistribution::Kind::Normal && firing_constant) {
        const double f = fdist.model_mean();
        const double slack = deadline - f - dist.mean;
        if (dist.sd == 0.0) return slack < 0.0 ? 1.0 : 0.0;
        return normal_tail(slack / dist.sd);
    }

    if (dist.kind == RuntimeDistribution::Kind::Empirical && dist.samples.empty()) {
        throw InsufficientSamples("empirical run-time model has no samples");
    }

    // Monte Carlo over firing + runtime; seeded so results reproduce.
    noise::Rng rng(opts.seed, "miss-probability/" + task.id);
    std::size_t over = 0;
    for (std::size_t i = 0; i < opts.draws; ++i) {
        const double f = static_cast<double>(fdist.sample(rng));
        double c;
        if (dist.kind == RuntimeDistribution::Kind::Normal) {
            c = dist.mean + dist.sd * rng.gauss();
        } else {
            const auto idx = static_cast<std::size_t>(
                rng.uniform() * static_cast<double>(dist.samples.size()));
            c = static_cast<double>(dist.samples[std::min(idx, dist.samples.size() - 1)]);
        }
        if (f + c > deadline) ++over;
    }
    return static_cast<double>(over) / static_cast<double>(opts.draws);
}

RiskVerdict admit_with_risk(const model::TaskSet& set,
                            const std::map<std::string, RuntimeDistribution>& dists,
                            const noise::NoiseModel& firing, const RiskPolicy& policy,
                            const MonteCarloOptions& opts) {
    if (policy.max_miss_probability < 0.0 || policy.max_miss_probability > 1.0) {
        throw InvalidStats("risk policy must lie in [0, 1]");
    }
    RiskVerdict verdict;
    double survive = 1.0;
    for (const auto& task : set.tasks) {
        const auto it = dists.find(task.id);
        if (it == dists.end()) throw MissingDistribution(task.id);
        const double p = miss_probability(task, it->second, firing, opts);
        verdict.per_task[task.id] = p;
        survive *= 1.0 - p;
    }
    verdict.combined = 1.0 - survive;
    verdict.accepted = verdict.combined <= policy.max_miss_probability;
    return verdict;
}

}  // namespace rtslice::admission
