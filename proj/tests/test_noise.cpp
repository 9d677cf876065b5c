#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rtslice/errors.hpp"
#include "rtslice/noise.hpp"

using namespace rtslice;
using noise::Distribution;
using noise::Rng;

TEST_CASE("constant model samples its value") {
    const noise::NoiseModel zero{Distribution::constant(0), Distribution::constant(0)};
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const auto [firing, env] = zero.sample(rng);
        CHECK(firing == 0);
        CHECK(env == 0);
    }
}

TEST_CASE("truncated normal stays inside [0, max]") {
    const auto dist = Distribution::truncated_normal(10.0, 3.0, 114);
    Rng rng(2);
    micros_t lo = 1'000'000, hi = -1;
    for (int i = 0; i < 100'000; ++i) {
        const micros_t v = dist.sample(rng);
        CHECK(v >= 0);
        CHECK(v <= 114);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi > lo);  // actually random
}

TEST_CASE("degenerate empirical model is constant") {
    const auto dist = Distribution::empirical({5, 5, 5});
    Rng rng(3);
    for (int i = 0; i < 1'000; ++i) CHECK(dist.sample(rng) == 5);
}

TEST_CASE("sampled mean tracks the analytic model mean") {
    const Distribution dists[] = {
        Distribution::truncated_normal(14.0, 5.5, 47),
        Distribution::truncated_normal(33.0, 11.66, 103),
        Distribution::truncated_normal(4.0, 14.81, 93),  // heavy left truncation
        Distribution::constant(0).with_spike(0.068, 59),
        Distribution::empirical({1, 2, 3, 4, 10}),
    };
    int tag = 0;
    for (const auto& dist : dists) {
        Rng rng(100 + tag++);
        const int n = 200'000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += static_cast<double>(dist.sample(rng));
        const double mean = sum / n;
        const double tolerance =
            3.0 * (dist.model_sd() + 0.5) / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(mean - dist.model_mean()) <= tolerance);
    }
}

TEST_CASE("identical seeds give identical streams") {
    const auto dist = Distribution::truncated_normal(10.0, 3.0, 114).with_spike(0.01, 5'000);
    Rng a(42), b(42);
    for (int i = 0; i < 10'000; ++i) CHECK(dist.sample(a) == dist.sample(b));

    Rng tagged_a(42, "slice/s0"), tagged_b(42, "slice/s0"), other(42, "slice/s1");
    bool diverged = false;
    for (int i = 0; i < 1'000; ++i) {
        const micros_t va = dist.sample(tagged_a);
        CHECK(va == dist.sample(tagged_b));
        diverged |= va != dist.sample(other);
    }
    CHECK(diverged);
}

TEST_CASE("spike mixture fires at its configured rate") {
    const auto dist = Distribution::constant(1).with_spike(0.01, 49'000);
    Rng rng(7);
    int spikes = 0;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
        if (dist.sample(rng) == 49'000) ++spikes;
    }
    // Binomial(2e5, 0.01): mean 2000, sd ~44.5; allow 5 sigma.
    CHECK(spikes > 2000 - 223);
    CHECK(spikes < 2000 + 223);
}

TEST_CASE("presets match the measured ten-unit calibration rows") {
    const auto c5 = noise::c5_profile();
    CHECK(c5.noise.env_runtime.model_mean() == doctest::Approx(14.0).epsilon(0.1));
    CHECK(c5.noise.env_runtime.model_sd() == doctest::Approx(5.5).epsilon(0.15));

    const auto t3 = noise::t3_profile();
    CHECK(t3.noise.env_runtime.model_mean() == doctest::Approx(4.0).epsilon(0.1));
    CHECK(t3.noise.env_runtime.model_sd() == doctest::Approx(14.81).epsilon(0.15));

    const auto bm = noise::bare_metal_profile();
    CHECK(bm.noise.env_runtime.model_mean() == doctest::Approx(33.0).epsilon(0.1));
    CHECK(bm.noise.env_runtime.model_sd() == doctest::Approx(11.66).epsilon(0.15));

    // Firing latency peaks never exceed the measured caps.
    CHECK(t3.noise.firing.max_value() == 114);
    CHECK(bm.noise.firing.max_value() <= 100);
}

TEST_CASE("profile lookup and the optional firing outlier") {
    CHECK(noise::profile_by_name("C5") == noise::c5_profile());
    CHECK(noise::profile_by_name("none").noise.env_runtime.is_zero());
    CHECK_THROWS_AS(noise::profile_by_name("BOGUS"), ConfigError);

    const auto spiky = noise::t3_profile().with_firing_spike();
    CHECK(spiky.noise.firing.spike_probability() == doctest::Approx(9.6e-6));
    CHECK(spiky.noise.firing.spike_value() == 49'000);
    CHECK(spiky.noise.firing.max_value() == 49'000);
}

TEST_CASE("calibrate_profile builds truncated normals and validates stats") {
    const auto profile = noise::calibrate_profile("lab", {10.0, 3.0, 114}, {14.0, 5.5, 47});
    CHECK(profile.name == "lab");
    CHECK(profile.noise.firing.kind() == Distribution::Kind::TruncatedNormal);
    CHECK(profile.noise.env_runtime.model_mean() == doctest::Approx(14.0).epsilon(0.1));

    CHECK_THROWS_AS(noise::calibrate_profile("bad", {10.0, -1.0, 114}, {14.0, 5.5, 47}),
                    InvalidStats);
    CHECK_THROWS_AS(noise::calibrate_profile("bad", {10.0, 3.0, 5}, {14.0, 5.5, 47}),
                    InvalidStats);
}
