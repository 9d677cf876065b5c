#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rtslice/admission.hpp"
#include "rtslice/config.hpp"
#include "rtslice/errors.hpp"
#include "rtslice/joblog.hpp"
#include "rtslice/noise.hpp"
#include "rtslice/sim.hpp"
#include "rtslice/stats.hpp"
#include "rtslice/task.hpp"
#include "rtslice/testcase.hpp"

namespace py = pybind11;
using namespace rtslice;

namespace {

model::TaskSet to_set(const std::vector<model::TaskSpec>& tasks) {
    return model::TaskSet{tasks};
}

std::vector<admission::ResourceSlice> to_slices(
    const std::vector<std::pair<std::string, std::string>>& slices) {
    std::vector<admission::ResourceSlice> out;
    for (const auto& [id, capacity] : slices) {
        out.push_back({id, Ratio::from_decimal(capacity)});
    }
    return out;
}

sim::Trace simulate_tasks(const std::vector<model::TaskSpec>& tasks, const std::string& profile,
                          micros_t duration, std::uint64_t seed, micros_t quantum, bool spike) {
    const model::TaskSet set = to_set(tasks);
    sim::SimConfig config;
    config.profile = cli::resolve_profile(profile);
    if (spike) config.profile = config.profile.with_firing_spike();
    config.duration = duration;
    config.seed = seed;
    config.quantum = quantum;
    try {
        config.assignment = admission::partition(set, {{"s0", Ratio(1, 1)}});
    } catch (const Infeasible&) {
        admission::SliceLoad all{"s0", {}, model::utilization_exact(set), Ratio(1, 1)};
        for (const auto& t : set.tasks) all.task_ids.push_back(t.id);
        config.assignment.slices = {std::move(all)};
    }
    return sim::simulate(config, set);
}

}  // namespace

PYBIND11_MODULE(_rtslice, m) {
    m.doc() = "EDF planning, admission control and simulation for periodic "
              "real-time containers on CPU slices";

    py::register_exception<ConstraintViolation>(m, "ConstraintViolation", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<Infeasible>(m, "Infeasible", PyExc_RuntimeError);

    py::class_<model::TaskSpec>(m, "TaskSpec")
        .def(py::init([](std::string id, micros_t period, micros_t wcet, micros_t runtime,
                         std::optional<micros_t> deadline) {
                 return model::TaskSpec{std::move(id), period, deadline.value_or(period), wcet,
                                        runtime};
             }),
             py::arg("id"), py::arg("period"), py::arg("wcet"), py::arg("runtime"),
             py::arg("deadline") = std::nullopt)
        .def_readwrite("id", &model::TaskSpec::id)
        .def_readwrite("period", &model::TaskSpec::period)
        .def_readwrite("deadline", &model::TaskSpec::deadline)
        .def_readwrite("wcet", &model::TaskSpec::wcet)
        .def_readwrite("runtime", &model::TaskSpec::runtime)
        .def("__repr__", [](const model::TaskSpec& t) {
            return "TaskSpec(" + t.id + ", p=" + std::to_string(t.period) +
                   ", d=" + std::to_string(t.deadline) + ", w=" + std::to_string(t.wcet) +
                   ", t=" + std::to_string(t.runtime) + ")";
        });

    py::class_<model::JobRecord>(m, "JobRecord")
        .def_readonly("task_id", &model::JobRecord::task_id)
        .def_readonly("job_index", &model::JobRecord::job_index)
        .def_readonly("release", &model::JobRecord::release)
        .def_readonly("start", &model::JobRecord::start)
        .def_readonly("finish", &model::JobRecord::finish)
        .def_readonly("firing_latency", &model::JobRecord::firing_latency)
        .def_readonly("env_noise", &model::JobRecord::env_noise)
        .def_readonly("task_noise", &model::JobRecord::task_noise)
        .def_readonly("runtime", &model::JobRecord::runtime)
        .def_readonly("total", &model::JobRecord::total)
        .def_readonly("deadline_abs", &model::JobRecord::deadline_abs)
        .def_readonly("missed", &model::JobRecord::missed);

    py::class_<sim::TaskTrace>(m, "TaskTrace")
        .def_readonly("task_id", &sim::TaskTrace::task_id)
        .def_readonly("slice_id", &sim::TaskTrace::slice_id)
        .def_readonly("records", &sim::TaskTrace::records)
        .def_readonly("miss_count", &sim::TaskTrace::miss_count);

    py::class_<sim::Trace>(m, "Trace")
        .def_readonly("tasks", &sim::Trace::tasks)
        .def_readonly("duration", &sim::Trace::duration)
        .def_readonly("external", &sim::Trace::external)
        .def_property_readonly("total_misses",
                               [](const sim::Trace& t) { return sim::count_misses(t).total; })
        .def("record_count", &sim::Trace::record_count);

    py::class_<stats::SummaryStats>(m, "SummaryStats")
        .def_readonly("count", &stats::SummaryStats::count)
        .def_readonly("min", &stats::SummaryStats::min)
        .def_readonly("max", &stats::SummaryStats::max)
        .def_readonly("mean", &stats::SummaryStats::mean)
        .def_readonly("median", &stats::SummaryStats::median)
        .def_readonly("sd", &stats::SummaryStats::sd);

    py::class_<stats::GroupReport>(m, "GroupReport")
        .def_readonly("label", &stats::GroupReport::label)
        .def_readonly("system", &stats::GroupReport::system)
        .def_readonly("avg", &stats::GroupReport::avg)
        .def_readonly("skw_min", &stats::GroupReport::skw_min)
        .def_readonly("skw_max", &stats::GroupReport::skw_max)
        .def_readonly("sd_mx", &stats::GroupReport::sd_mx)
        .def_readonly("misses", &stats::GroupReport::misses)
        .def_readonly("total_misses", &stats::GroupReport::total_misses)
        .def_readonly("incomplete_log", &stats::GroupReport::incomplete_log);

    py::class_<admission::RuntimeDistribution>(m, "RuntimeDistribution")
        .def_readonly("mean", &admission::RuntimeDistribution::mean)
        .def_readonly("sd", &admission::RuntimeDistribution::sd)
        .def_readonly("sample_count", &admission::RuntimeDistribution::sample_count)
        .def_readonly("samples", &admission::RuntimeDistribution::samples)
        .def_static("normal", &admission::RuntimeDistribution::normal, py::arg("mean"),
                    py::arg("sd"));

    m.def("validate", [](const model::TaskSpec& t) { return model::validate(t); },
          "Checks runtime <= wcet <= deadline <= period and positivity");
    m.def("utilization",
          [](const std::vector<model::TaskSpec>& tasks) {
              return model::utilization(to_set(tasks));
          });
    m.def("hyperperiod", [](const std::vector<model::TaskSpec>& tasks) {
        return model::hyperperiod(to_set(tasks));
    });

    m.def(
        "edf_feasible",
        [](const std::vector<model::TaskSpec>& tasks, const std::string& capacity) {
            const auto v =
                admission::edf_feasible(to_set(tasks), {"slice", Ratio::from_decimal(capacity)});
            py::dict out;
            out["accepted"] = v.accepted();
            out["feasibility"] = v.feasibility == admission::Feasibility::Accept ? "accept"
                                 : v.feasibility == admission::Feasibility::Reject
                                     ? "reject"
                                     : "inconclusive-reject";
            out["utilization"] = v.utilization.value();
            out["reason"] = v.reason;
            return out;
        },
        py::arg("tasks"), py::arg("capacity") = "1.0");

    m.def("partition",
          [](const std::vector<model::TaskSpec>& tasks,
             const std::vector<std::pair<std::string, std::string>>& slices) {
              const auto assignment = admission::partition(to_set(tasks), to_slices(slices));
              py::dict out;
              for (const auto& slice : assignment.slices) {
                  out[py::str(slice.slice_id)] = slice.task_ids;
              }
              return out;
          },
          py::arg("tasks"),
          py::arg("slices") = std::vector<std::pair<std::string, std::string>>{{"s0", "1.0"}});

    m.def("fit_runtime_distribution", [](std::vector<micros_t> samples) {
        return admission::fit_runtime_distribution(std::move(samples));
    });

    m.def(
        "miss_probability",
        [](const model::TaskSpec& task, const admission::RuntimeDistribution& dist,
           const std::string& profile) {
            return admission::miss_probability(task, dist,
                                               cli::resolve_profile(profile).noise);
        },
        py::arg("task"), py::arg("dist"), py::arg("profile") = "none");

    m.def(
        "admit_with_risk",
        [](const std::vector<model::TaskSpec>& tasks,
           const std::map<std::string, admission::RuntimeDistribution>& dists,
           const std::string& profile, double max_miss_probability) {
            const auto v = admission::admit_with_risk(to_set(tasks), dists,
                                                      cli::resolve_profile(profile).noise,
                                                      {max_miss_probability});
            py::dict out;
            out["per_task"] = v.per_task;
            out["combined"] = v.combined;
            out["accepted"] = v.accepted;
            return out;
        },
        py::arg("tasks"), py::arg("dists"), py::arg("profile"),
        py::arg("max_miss_probability"));

    m.def("profile_names", [] { return noise::profile_names(); });

    m.def("simulate", &simulate_tasks, py::arg("tasks"), py::arg("profile") = "none",
          py::arg("duration") = 1'000'000, py::arg("seed") = 42, py::arg("quantum") = 0,
          py::arg("spike") = false,
          "Single-slice EDF simulation of the given tasks");

    m.def(
        "run_testcase",
        [](int case_number, const std::string& system, int scale, micros_t duration,
           std::uint64_t seed, bool spike) {
            cli::TestCaseParams params{case_number, system, scale, duration, seed, spike};
            auto run = cli::run_testcase(params);
            return py::make_tuple(run.report, run.trace);
        },
        py::arg("case_number"), py::arg("system") = "C5", py::arg("scale") = 0,
        py::arg("duration") = 60'000'000, py::arg("seed") = 42, py::arg("spike") = false);

    m.def("summarize", [](const std::vector<micros_t>& samples) {
        return stats::summarize(samples);
    });

    m.def(
        "threshold_check",
        [](const std::vector<micros_t>& latencies, micros_t cycle) {
            const auto r = stats::threshold_check(latencies, cycle);
            py::dict out;
            out["threshold_us"] = r.threshold_us;
            out["overshoots"] = r.overshoots;
            out["total"] = r.total;
            out["ratio"] = r.ratio;
            return out;
        },
        py::arg("latencies"), py::arg("cycle"));

    m.def("write_joblog", &cli::write_joblog);
    m.def("ingest_log", &cli::ingest_log, py::arg("text"), py::arg("filename") = "<log>");
    m.def("load_config", [](const std::string& text) {
        const auto config = cli::load_config(text);
        py::dict out;
        out["tasks"] = config.tasks.tasks;
        out["duration"] = config.duration;
        out["seed"] = config.seed;
        out["profile"] = config.profile.name;
        return out;
    });
}
