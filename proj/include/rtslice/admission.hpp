#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtslice/noise.hpp"
#include "rtslice/ratio.hpp"
#include "rtslice/task.hpp"

namespace rtslice::admission {

/// A fixed fraction of one CPU's time, addressed like a dedicated unit.
struct ResourceSlice {
    std::string id;
    Ratio capacity{1, 1};  // in (0, 1]

    bool operator==(const ResourceSlice&) const = default;
};

enum class Feasibility {
    Accept,
    Reject,
    /// The density test (a sufficient condition only) failed while the
    /// utilization bound still held; EDF may or may not work.
    InconclusiveReject,
};

struct Verdict {
    Feasibility feasibility = Feasibility::Reject;
    Ratio utilization;
    std::optional<Ratio> density;  // set when some task has deadline < period
    std::string reason;

    bool accepted() const { return feasibility == Feasibility::Accept; }
};

/// Uniprocessor EDF feasibility on one slice. Exact (utilization <= capacity)
/// when every deadline equals its period; density bound otherwise.
Verdict edf_feasible(const model::TaskSet& set, const ResourceSlice& slice);

struct SliceLoad {
    std::string slice_id;
    std::vector<std::string> task_ids;  // placement order
    Ratio utilization;
    Ratio capacity;
};

struct SliceAssignment {
    std::vector<SliceLoad> slices;

    const SliceLoad* find(const std::string& slice_id) const;
    /// Slice holding the given task, or nullptr.
    const SliceLoad* slice_of(const std::string& task_id) const;
};

/// First-fit-decreasing by utilization (ties broken by task id) across the
/// given slices. Throws Infeasible listing every task that fits nowhere.
SliceAssignment partition(const model::TaskSet& set, const std::vector<ResourceSlice>& slices);

/// Same, but tasks listed in `pins` are placed on their named slice first.
SliceAssignment partition(const model::TaskSet& set, const std::vector<ResourceSlice>& slices,
                          const std::map<std::string, std::string>& pins);

/// Fitted run-time model: the sorted samples are kept alongside the normal
/// fit so either view can be used.
struct RuntimeDistribution {
    enum class Kind { Empirical, Normal };

    Kind kind = Kind::Normal;
    std::vector<micros_t> samples;  // sorted; empty for synthetic normals
    double mean = 0.0;
    double sd = 0.0;  // n-1 divisor
    std::size_t sample_count = 0;

    static RuntimeDistribution normal(double mean, double sd);

    RuntimeDistribution as_empirical() const;
    RuntimeDistribution as_normal() const;
};

/// Curve fit over observed run-times; needs at least two samples.
RuntimeDistribution fit_runtime_distribution(std::vector<micros_t> samples);

struct MonteCarloOptions {
    std::size_t draws = 200'000;
    std::uint64_t seed = 0x5eed5eed5eedull;
};

/// P(firing + runtime > deadline). Closed form when the run-time model is
/// normal and the firing model degenerate; seeded Monte Carlo otherwise.
double miss_probability(const model::TaskSpec& task, const RuntimeDistribution& dist,
                        const noise::NoiseModel& firing, const MonteCarloOptions& opts = {});

struct RiskPolicy {
    double max_miss_probability = 0.0;  // in [0, 1]
};

struct RiskVerdict {
    std::map<std::string, double> per_task;
    double combined = 0.0;  // 1 - prod(1 - p_i), independence assumed
    bool accepted = false;
};

/// Risk-bounded admission: per-task miss probabilities combined into a
/// schedule failure probability, accepted iff within the policy boundary.
/// Throws MissingDistribution when a task has no fitted model.
RiskVerdict admit_with_risk(const model::TaskSet& set,
                            const std::map<std::string, RuntimeDistribution>& dists,
                            const noise::NoiseModel& firing, const RiskPolicy& policy,
                            const MonteCarloOptions& opts = {});

}  // namespace rtslice::admission
