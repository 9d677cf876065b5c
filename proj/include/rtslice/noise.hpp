#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rtslice/ratio.hpp"

namespace rtslice::noise {

/// Deterministic random stream. Wraps mt19937_64 but derives doubles and
/// normal variates itself, so identical seeds give bit-identical sample
/// sequences regardless of the standard library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, const std::string& stream_tag);

    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal via Box-Muller.
    double gauss();
    std::uint64_t bits() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

/// One non-negative latency distribution in integer microseconds. The base
/// shape is constant, truncated normal on [0, max], or empirical resampling;
/// an optional spike mixture overlays a rare fixed-size outlier on top.
class Distribution {
  public:
    enum class Kind { Constant, TruncatedNormal, Empirical };

    static Distribution constant(micros_t value);
    static Distribution truncated_normal(double mean, double sd, micros_t max);
    static Distribution empirical(std::vector<micros_t> samples);

    /// Returns a copy that yields `value` with probability `probability`
    /// instead of a base draw.
    Distribution with_spike(double probability, micros_t value) const;

    micros_t sample(Rng& rng) const;

    Kind kind() const { return kind_; }
    bool has_spike() const { return spike_probability_ > 0.0; }
    double spike_probability() const { return spike_probability_; }
    micros_t spike_value() const { return spike_value_; }
    micros_t max_value() const;
    bool is_zero() const;

    /// Analytic mean of the sampled distribution (truncation and spike
    /// included); this is what long-run sample averages converge to.
    double model_mean() const;
    double model_sd() const;

    micros_t constant_value() const { return value_; }
    double normal_mean() const { return mean_; }
    double normal_sd() const { return sd_; }
    micros_t normal_max() const { return max_; }
    const std::vector<micros_t>& samples() const { return samples_; }

    bool operator==(const Distribution&) const = default;

  private:
    Kind kind_ = Kind::Constant;
    micros_t value_ = 0;
    double mean_ = 0.0;
    double sd_ = 0.0;
    micros_t max_ = 0;
    std::vector<micros_t> samples_;
    double spike_probability_ = 0.0;
    micros_t spike_value_ = 0;

    micros_t base_sample(Rng& rng) const;
    double base_mean() const;
    double base_second_moment() const;
};

/// Stochastic models for the two noise terms a job experiences: wake-up
/// (firing) latency and run-time inflation from the environment.
struct NoiseModel {
    Distribution firing = Distribution::constant(0);
    Distribution env_runtime = Distribution::constant(0);

    /// Draws (firing, env_runtime), in that order.
    std::pair<micros_t, micros_t> sample(Rng& rng) const;

    bool operator==(const NoiseModel&) const = default;
};

struct SystemProfile {
    std::string name;
    NoiseModel noise;

    /// Copy with the rare firing outlier enabled: probability 9.6e-6 per job
    /// and a 49 ms stall, the measured T3 worst case.
    SystemProfile with_firing_spike(double probability = 9.6e-6,
                                    micros_t value = 49'000) const;

    bool operator==(const SystemProfile&) const = default;
};

/// Noise-free profile, for feasibility baselines.
SystemProfile zero_profile();

/// Calibration presets for the measured systems: bare-metal (BM), AWS T3,
/// T3 Unlimited and AWS C5.
SystemProfile bare_metal_profile();
SystemProfile t3_profile();
SystemProfile t3_unlimited_profile();
SystemProfile c5_profile();

/// Lookup by preset name (BM, T3, T3U, C5, none). Throws ConfigError for
/// unknown names.
SystemProfile profile_by_name(const std::string& name);
const std::vector<std::string>& profile_names();

struct LatencyStats {
    double mean = 0.0;
    double sd = 0.0;
    micros_t max = 0;
};

struct RuntimeStats {
    double mean_offset = 0.0;
    double sd = 0.0;
    micros_t max = 0;
};

/// Builds a profile of truncated-normal models from summary statistics.
/// Throws InvalidStats when sd < 0 or max < mean.
SystemProfile calibrate_profile(const std::string& name, const LatencyStats& firing,
                                const RuntimeStats& runtime);

}  // namespace rtslice::noise
