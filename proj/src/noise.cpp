#include "rtslice/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rtslice/errors.hpp"

namespace rtslice::noise {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

double phi_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi); }
double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

Rng::Rng(std::uint64_t seed, const std::string& stream_tag) : engine_() {
    const std::uint64_t tag = fnv1a(stream_tag);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(kTwoPi * u2);
}

Distribution Distribution::constant(micros_t value) {
    if (value < 0) throw InvalidStats("constant latency must be >= 0");
    Distribution d;
    d.kind_ = Kind::Constant;
    d.value_ = value;
    return d;
}

Distribution Distribution::truncated_normal(double mean, double sd, micros_t max) {
    if (sd < 0.0) throw InvalidStats("sd must be >= 0");
    if (mean < 0.0 || static_cast<double>(max) < mean) {
        throw InvalidStats("truncated normal requires 0 <= mean <= max");
    }
    Distribution d;
    d.kind_ = Kind::TruncatedNormal;
    d.mean_ = mean;
    d.sd_ = sd;
    d.max_ = max;
    return d;
}

Distribution Distribution::empirical(std::vector<micros_t> samples) {
    if (samples.empty()) throw InvalidStats("empirical distribution needs samples");
    for (micros_t v : samples) {
        if (v < 0) throw InvalidStats("empirical samples must be >= 0");
    }
    Distribution d;
    d.kind_ = Kind::Empirical;
    d.samples_ = std::move(samples);
    return d;
}

Distribution Distribution::with_spike(double probability, micros_t value) const {
    if (probability < 0.0 || probability > 1.0) throw InvalidStats("spike probability in [0,1]");
    if (value < 0) throw InvalidStats("spike value must be >= 0");
    Distribution d = *this;
    d.spike_probability_ = probability;
    d.spike_value_ = value;
    return d;
}

micros_t Distribution::base_sample(Rng& rng) const {
    switch (kind_) {
        case Kind::Constant:
            return value_;
        case Kind::TruncatedNormal: {
            if (sd_ == 0.0) return std::llround(mean_);
            const double hi = static_cast<double>(max_);
            double draw;
            do {
                draw = mean_ + sd_ * rng.gauss();
            } while (draw < 0.0 || draw > hi);
            return std::clamp<micros_t>(std::llround(draw), 0, max_);
        }
        case Kind::Empirical: {
            const auto idx = static_cast<std::size_t>(rng.uniform() *
                                                      static_cast<double>(samples_.size()));
            return samples_[std::min(idx, samples_.size() - 1)];
        }
    }
    return 0;
}

micros_t Distribution::sample(Rng& rng) const {
    if (spike_probability_ > 0.0 && rng.uniform() < spike_probability_) return spike_value_;
    return base_sample(rng);
}

micros_t Distribution::max_value() const {
    micros_t base = 0;
    switch (kind_) {
        case Kind::Constant:
            base = value_;
            break;
        case Kind::TruncatedNormal:
            base = sd_ == 0.0 ? std::llround(mean_) : max_;
            break;
        case Kind::Empirical:
            base = *std::max_element(samples_.begin(), samples_.end());
            break;
    }
    return has_spike() ? std::max(base, spike_value_) : base;
}

bool Distribution::is_zero() const { return max_value() == 0; }

double Distribution::base_mean() const {
    switch (kind_) {
        case Kind::Constant:
            return static_cast<double>(value_);
        case Kind::TruncatedNormal: {
            if (sd_ == 0.0) return static_cast<double>(std::llround(mean_));
            const double alpha = (0.0 - mean_) / sd_;
            const double beta = (static_cast<double>(max_) - mean_) / sd_;
            const double z = phi_cdf(beta) - phi_cdf(alpha);
            return mean_ + sd_ * (phi_pdf(alpha) - phi_pdf(beta)) / z;
        }
        case Kind::Empirical: {
            double sum = 0.0;
            for (micros_t v : samples_) sum += static_cast<double>(v);
            return sum / static_cast<double>(samples_.size());
        }
    }
    return 0.0;
}

double Distribution::base_second_moment() const {
    switch (kind_) {
        case Kind::Constant:
            return static_cast<double>(value_) * static_cast<double>(value_);
        case Kind::TruncatedNormal: {
            if (sd_ == 0.0) {
                const double m = static_cast<double>(std::llround(mean_));
                return m * m;
            }
            const double alpha = (0.0 - mean_) / sd_;
            const double beta = (static_cast<double>(max_) - mean_) / sd_;
            const double z = phi_cdf(beta) - phi_cdf(alpha);
            const double mean = base_mean();
            const double var =
                sd_ * sd_ *
                (1.0 + (alpha * phi_pdf(alpha) - beta * phi_pdf(beta)) / z -
                 ((phi_pdf(alpha) - phi_pdf(beta)) / z) * ((phi_pdf(alpha) - phi_pdf(beta)) / z));
            return var + mean * mean;
        }
        case Kind::Empirical: {
            double sum = 0.0;
            for (micros_t v : samples_) sum += static_cast<double>(v) * static_cast<double>(v);
            return sum / static_cast<double>(samples_.size());
        }
    }
    return 0.0;
}

double Distribution::model_mean() const {
    const double base = base_mean();
    if (!has_spike()) return base;
    return (1.0 - spike_probability_) * base +
           spike_probability_ * static_cast<double>(spike_value_);
}

double Distribution::model_sd() const {
    double m2 = base_second_moment();
    if (has_spike()) {
        m2 = (1.0 - spike_probability_) * m2 +
             spike_probability_ * static_cast<double>(spike_value_) *
                 static_cast<double>(spike_value_);
    }
    const double mean = model_mean();
    const double var = m2 - mean * mean;
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

std::pair<micros_t, micros_t> NoiseModel::sample(Rng& rng) const {
    const micros_t f = firing.sample(rng);
    const micros_t e = env_runtime.sample(rng);
    return {f, e};
}

SystemProfile SystemProfile::with_firing_spike(double probability, micros_t value) const {
    SystemProfile p = *this;
    p.noise.firing = p.noise.firing.with_spike(probability, value);
    return p;
}

SystemProfile zero_profile() {
    return {"none", {Distribution::constant(0), Distribution::constant(0)}};
}

// Run-time inflation offsets and spreads come from the ten-unit measurement
// rows (933/11.66 BM, 904/14.81 T3, 914/5.50 C5 against the programmed
// 900 us); firing models reflect the observed latency peaks per machine.
// T3-class instances show a near-zero mode with occasional steal events, so
// their env model is a rare-burst mixture rather than a truncated normal:
// 0.068 * 59 us reproduces the +4 us mean and ~14.8 us deviation.
SystemProfile bare_metal_profile() {
    return {"BM", {Distribution::truncated_normal(8.0, 3.0, 100),
                   Distribution::truncated_normal(33.0, 11.66, 103)}};
}

SystemProfile t3_profile() {
    return {"T3", {Distribution::truncated_normal(10.0, 3.0, 114),
                   Distribution::constant(0).with_spike(0.068, 59)}};
}

SystemProfile t3_unlimited_profile() {
    return {"T3U", {Distribution::truncated_normal(9.0, 3.0, 114),
                    Distribution::constant(0).with_spike(0.05, 40)}};
}

SystemProfile c5_profile() {
    return {"C5", {Distribution::truncated_normal(9.0, 3.0, 60),
                   Distribution::truncated_normal(14.0, 5.5, 47)}};
}

SystemProfile profile_by_name(const std::string& name) {
    if (name == "BM") return bare_metal_profile();
    if (name == "T3") return t3_profile();
    if (name == "T3U") return t3_unlimited_profile();
    if (name == "C5") return c5_profile();
    if (name == "none" || name == "zero") return zero_profile();
    throw ConfigError("unknown system profile '" + name + "'");
}

const std::vector<std::string>& profile_names() {
    static const std::vector<std::string> names{"BM", "T3", "T3U", "C5", "none"};
    return names;
}

SystemProfile calibrate_profile(const std::string& name, const LatencyStats& firing,
                                const RuntimeStats& runtime) {
    if (firing.sd < 0.0 || runtime.sd < 0.0) throw InvalidStats("sd must be >= 0");
    if (static_cast<double>(firing.max) < firing.mean) {
        throw InvalidStats("firing max must be >= mean");
    }
    if (static_cast<double>(runtime.max) < runtime.mean_offset) {
        throw InvalidStats("runtime max must be >= mean offset");
    }
    SystemProfile profile;
    profile.name = name;
    profile.noise.firing = Distribution::truncated_normal(firing.mean, firing.sd, firing.max);
    profile.noise.env_runtime =
        Distribution::truncated_normal(runtime.mean_offset, runtime.sd, runtime.max);
    return profile;
}

}  // namespace rtslice::noise
