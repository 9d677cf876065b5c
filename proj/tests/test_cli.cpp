#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "rtslice/config.hpp"
#include "rtslice/errors.hpp"
#include "rtslice/joblog.hpp"
#include "rtslice/testcase.hpp"

using namespace rtslice;

namespace {

const char* kSampleConfig = R"(# two containers on one slice
[experiment]
duration = 2000000
seed = 7
profile = C5

[slice s0]
capacity = 1.0

[task c0]
period = 10000
wcet = 900
runtime = 900

[task c1]
period = 5000
deadline = 4000
wcet = 2500
runtime = 2400
offset = 100
slice = s0
)";

}  // namespace

TEST_CASE("load_config parses sections, defaults and pins") {
    const auto config = cli::load_config(kSampleConfig);
    CHECK(config.duration == 2'000'000);
    CHECK(config.seed == 7);
    CHECK(config.profile.name == "C5");
    REQUIRE(config.tasks.tasks.size() == 2);
    CHECK(config.tasks.tasks[0].deadline == 10'000);  // defaulted to the period
    CHECK(config.tasks.tasks[1].deadline == 4'000);
    CHECK(config.tasks.tasks[1].wcet == 2'500);
    CHECK(config.release_offsets.at("c1") == 100);
    CHECK(config.pins.at("c1") == "s0");
    REQUIRE(config.slices.size() == 1);
    CHECK(config.slices[0].capacity == Ratio(1, 1));
}

TEST_CASE("load_config errors carry line numbers and validation delegates") {
    CHECK_THROWS_AS(cli::load_config("[task a]\nperiod = ten\n"), ParseError);
    try {
        cli::load_config("[task a]\nperiod = ten\n");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(cli::load_config("[experiment]\nbogus = 1\n"), ParseError);
    CHECK_THROWS_AS(cli::load_config("period = 10\n"), ParseError);  // key outside section
    CHECK_THROWS_AS(cli::load_config(""), ParseError);               // no tasks

    // wcet above the period turns up as a constraint violation.
    CHECK_THROWS_AS(
        cli::load_config("[task a]\nperiod = 1000\nwcet = 2000\nruntime = 100\n"),
        ConstraintViolation);

    CHECK_THROWS_AS(
        cli::load_config("[task a]\nperiod = 1000\nwcet = 100\nruntime = 100\nslice = sX\n"),
        ParseError);

    CHECK_THROWS_AS(
        cli::load_config("[slice s0]\ncapacity = 0.5\n[slice s0]\ncapacity = 0.5\n"
                         "[task a]\nperiod = 1000\nwcet = 100\nruntime = 100\n"),
        ParseError);
}

TEST_CASE("config round-trips through render_config") {
    const auto config = cli::load_config(kSampleConfig);
    CHECK(cli::load_config(cli::render_config(config)) == config);

    // Custom profile with spikes and an empirical distribution.
    const char* custom = R"([experiment]
duration = 1000
seed = 1

[task t]
period = 1000
wcet = 10
runtime = 10

[profile]
name = lab
firing = truncated_normal 10.5 3.25 114
env = empirical 0 1 2 5
firing_spike = 9.6e-06 49000
)";
    const auto parsed = cli::load_config(custom);
    CHECK(parsed.profile.name == "lab");
    CHECK(parsed.profile.noise.firing.spike_probability() == doctest::Approx(9.6e-6));
    CHECK(cli::load_config(cli::render_config(parsed)) == parsed);
}

TEST_CASE("round-trip is stable under fuzzed configs") {
    std::mt19937_64 rng(43);
    for (int round = 0; round < 200; ++round) {
        cli::ExperimentConfig config;
        config.duration = 1 + static_cast<micros_t>(rng() % 1'000'000);
        config.seed = rng();
        config.quantum = rng() % 2 == 0 ? 0 : 1'000;
        if (rng() % 3 == 0) config.risk = static_cast<double>(rng() % 1'000) / 1'000.0;
        const int slices = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < slices; ++i) {
            config.slices.push_back(
                {"s" + std::to_string(i), Ratio(1 + static_cast<std::int64_t>(rng() % 4), 4)});
        }
        const int tasks = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < tasks; ++i) {
            const micros_t period = 1'000 * static_cast<micros_t>(1 + rng() % 20);
            const micros_t runtime = 1 + static_cast<micros_t>(rng() % period);
            model::TaskSpec t{"t" + std::to_string(i), period, period, runtime, runtime};
            if (rng() % 4 == 0) t.deadline = runtime + static_cast<micros_t>(
                                                 rng() % (period - runtime + 1));
            config.tasks.tasks.push_back(t);
            if (rng() % 4 == 0) {
                config.release_offsets[t.id] = 1 + static_cast<micros_t>(rng() % 5'000);
            }
            if (rng() % 4 == 0) {
                config.pins[t.id] = "s" + std::to_string(rng() % slices);
            }
        }
        config.profile = rng() % 2 == 0 ? noise::c5_profile()
                                        : noise::SystemProfile{"fuzz",
                                              {noise::Distribution::constant(rng() % 100),
                                               noise::Distribution::truncated_normal(
                                                   5.0, 2.0, 50 + rng() % 50)}};
        CAPTURE(round);
        CHECK(cli::load_config(cli::render_config(config)) == config);
    }
}

TEST_CASE("built-in cases match the measured parameters") {
    const auto case1 = cli::testcase_tasks(1, 10);
    CHECK(case1.tasks.size() == 10);
    CHECK(case1.tasks[0].runtime == 900);
    CHECK(case1.tasks[0].period == 10'000);
    CHECK(model::utilization_exact(case1) == Ratio(9, 10));

    const auto case2 = cli::testcase_tasks(2, 2);
    CHECK(model::utilization_exact(case2) == Ratio(1, 1));

    const auto case3 = cli::testcase_tasks(3, 3);
    REQUIRE(case3.tasks.size() == 3);
    CHECK(model::utilization_exact(case3) == Ratio(277, 300));
    CHECK(case3.find("c0")->runtime == 2'500);
    CHECK(case3.find("c2")->runtime == 900);

    const auto case4 = cli::testcase_tasks(4, 10);
    CHECK(case4.tasks[0].runtime == 10'000);
    CHECK(case4.tasks[0].period == 100'000);
    CHECK(model::utilization_exact(case4) == Ratio(1, 1));

    CHECK_THROWS_AS(cli::testcase_tasks(5, 1), ConfigError);
    CHECK_THROWS_AS(cli::testcase_tasks(1, 3), ConfigError);
    CHECK_THROWS_AS(cli::testcase_tasks(2, 4), ConfigError);
}

TEST_CASE("run_testcase plans, simulates and reports") {
    cli::TestCaseParams params;
    params.number = 1;
    params.system = "C5";
    params.scale = 10;
    params.duration = 5'000'000;
    const auto run = cli::run_testcase(params);
    CHECK(run.verdict.accepted());
    CHECK(run.verdict.utilization == Ratio(9, 10));
    CHECK(run.report.label == "case1-10u");
    CHECK(run.report.system == "C5");
    CHECK(run.report.total_misses == 0);
    CHECK(run.trace.record_count() == 10 * 500);

    cli::TestCaseParams boundary;
    boundary.number = 2;
    boundary.scale = 2;
    boundary.duration = 1'000'000;
    const auto upper = cli::run_testcase(boundary);
    CHECK(upper.verdict.accepted());  // U = 1.0 is the exact EDF boundary
    CHECK(upper.verdict.utilization == Ratio(1, 1));

    CHECK_THROWS_AS(cli::run_testcase({9, "C5", 1, 1'000, 1, false}), ConfigError);
    CHECK_THROWS_AS(cli::run_testcase({1, "VAX", 10, 1'000, 1, false}), ConfigError);
}

TEST_CASE("run_testcase is reproducible for equal arguments") {
    cli::TestCaseParams params;
    params.number = 3;
    params.system = "T3";
    params.scale = 3;
    params.duration = 2'000'000;
    params.seed = 99;
    const auto a = cli::run_testcase(params);
    const auto b = cli::run_testcase(params);
    CHECK(a.trace == b.trace);
    CHECK(cli::write_joblog(a.trace) == cli::write_joblog(b.trace));
}

TEST_CASE("job logs round-trip what the format can carry") {
    cli::TestCaseParams params;
    params.number = 2;
    params.scale = 2;
    params.system = "BM";
    params.duration = 500'000;
    const auto run = cli::run_testcase(params);
    const std::string text = cli::write_joblog(run.trace);
    const auto back = cli::ingest_log(text);
    CHECK(back.external);
    REQUIRE(back.tasks.size() == run.trace.tasks.size());
    for (std::size_t i = 0; i < back.tasks.size(); ++i) {
        const auto& in = run.trace.tasks[i];
        const auto& out = back.tasks[i];
        CHECK(out.task_id == in.task_id);
        CHECK(out.miss_count == in.miss_count);
        REQUIRE(out.records.size() == in.records.size());
        for (std::size_t k = 0; k < in.records.size(); ++k) {
            CHECK(out.records[k].release == in.records[k].release);
            CHECK(out.records[k].start == in.records[k].start);
            CHECK(out.records[k].finish == in.records[k].finish);
            CHECK(out.records[k].deadline_abs == in.records[k].deadline_abs);
            CHECK(out.records[k].missed == in.records[k].missed);
            CHECK(out.records[k].firing_latency == in.records[k].firing_latency);
            CHECK(out.records[k].total == in.records[k].total);
            // The noise split is not in the format; the identity still holds.
            CHECK(out.records[k].total == out.records[k].firing_latency +
                                              out.records[k].env_noise +
                                              out.records[k].task_noise + out.records[k].runtime);
        }
    }
}

TEST_CASE("ingest_log validates shape and consistency") {
    const std::string header = "container,job,release_us,start_us,end_us,deadline_us,miss\n";
    const auto empty = cli::ingest_log(header);
    CHECK(empty.tasks.empty());
    CHECK(empty.record_count() == 0);

    const auto one = cli::ingest_log(header + "a,0,0,10,910,10000,0\n");
    REQUIRE(one.tasks.size() == 1);
    CHECK(one.tasks[0].records[0].firing_latency == 10);
    CHECK(one.tasks[0].records[0].total == 910);
    CHECK(one.tasks[0].records[0].runtime == 900);
    CHECK_FALSE(one.tasks[0].records[0].missed);

    CHECK_THROWS_AS(cli::ingest_log("bogus\n"), FormatError);
    CHECK_THROWS_AS(cli::ingest_log(header + "a,0,0,10\n"), FormatError);
    CHECK_THROWS_AS(cli::ingest_log(header + "a,0,0,x,910,10000,0\n"), FormatError);
    CHECK_THROWS_AS(cli::ingest_log(header + "a,0,0,900,10,10000,0\n"), InconsistentRecord);
    CHECK_THROWS_AS(cli::ingest_log(header + "a,0,50,10,910,10000,0\n"), InconsistentRecord);
    CHECK_THROWS_AS(cli::ingest_log(header + "a,0,0,10,910,10000,1\n"), InconsistentRecord);
    CHECK_THROWS_AS(cli::ingest_log(header + "a,0,0,10,910,10000,0\na,0,0,10,910,10000,0\n"),
                    FormatError);  // non-monotone job index
}

TEST_CASE("profiles resolve from the profile directory") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rtslice_profiles_test";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "lab.profile");
        out << "[profile]\nfiring = constant 5\nenv = constant 2\n";
    }
    setenv("RTSLICE_PROFILE_DIR", dir.c_str(), 1);
    const auto profile = cli::resolve_profile("lab");
    CHECK(profile.name == "lab");
    CHECK(profile.noise.firing.constant_value() == 5);
    CHECK(profile.noise.env_runtime.constant_value() == 2);
    CHECK_THROWS_AS(cli::resolve_profile("missing"), ConfigError);
    unsetenv("RTSLICE_PROFILE_DIR");
    CHECK_THROWS_AS(cli::resolve_profile("lab"), ConfigError);
    fs::remove_all(dir);

    CHECK(cli::resolve_profile("T3U").name == "T3U");
}
