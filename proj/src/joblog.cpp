#include "rtslice/joblog.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rtslice/errors.hpp"

namespace rtslice::cli {

std::string write_joblog(const sim::Trace& trace) {
    std::string out = kJobLogHeader;
    out += "\n";
    for (const auto& task : trace.tasks) {
        for (const auto& rec : task.records) {
            out += rec.task_id;
            out += ",";
            out += std::to_string(rec.job_index);
            out += ",";
            out += std::to_string(rec.release);
            out += ",";
            out += std::to_string(rec.start);
            out += ",";
            out += std::to_string(rec.finish);
            out += ",";
            out += std::to_string(rec.deadline_abs);
            out += ",";
            out += rec.missed ? "1" : "0";
            out += "\n";
        }
    }
    return out;
}

sim::Trace ingest_log(const std::string& text, const std::string& filename) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty log", filename, 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kJobLogHeader) {
        throw FormatError("bad header, want '" + std::string(kJobLogHeader) + "'", filename, 1);
    }

    sim::Trace trace;
    trace.external = true;

    auto task_of = [&](const std::string& id) -> sim::TaskTrace& {
        for (auto& t : trace.tasks) {
            if (t.task_id == id) return t;
        }
        trace.tasks.push_back({id, "", {}, 0});
        return trace.tasks.back();
    };

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (fields.size() != 7) {
            throw FormatError("expected 7 fields, got " + std::to_string(fields.size()), filename,
                              lineno);
        }
        auto as_int = [&](const std::string& f) {
            std::int64_t v = 0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
                throw FormatError("unparsable integer '" + f + "'", filename, lineno);
            }
            return v;
        };

        model::JobRecord rec;
        rec.task_id = fields[0];
        rec.job_index = as_int(fields[1]);
        rec.release = as_int(fields[2]);
        rec.start = as_int(fields[3]);
        rec.finish = as_int(fields[4]);
        rec.deadline_abs = as_int(fields[5]);
        const std::int64_t miss = as_int(fields[6]);
        if (miss != 0 && miss != 1) {
            throw FormatError("miss flag must be 0 or 1", filename, lineno);
        }
        if (rec.finish < rec.start) {
            throw InconsistentRecord(filename + ":" + std::to_string(lineno) +
                                     ": end before start");
        }
        if (rec.start < rec.release) {
            throw InconsistentRecord(filename + ":" + std::to_string(lineno) +
                                     ": start before release");
        }
        rec.missed = miss == 1;
        if (rec.missed != (rec.finish > rec.deadline_abs)) {
            throw InconsistentRecord(filename + ":" + std::to_string(lineno) +
                                     ": miss flag contradicts finish vs deadline");
        }
        rec.firing_latency = rec.start - rec.release;
        rec.total = rec.finish - rec.release;
        // External logs carry no noise decomposition; attribute the measured
        // run wholly to runtime.
        rec.env_noise = 0;
        rec.task_noise = 0;
        rec.runtime = rec.finish - rec.start;

        sim::TaskTrace& task = task_of(rec.task_id);
        if (!task.records.empty() && rec.job_index <= task.records.back().job_index) {
            throw FormatError("job indices for container '" + rec.task_id +
                                  "' are not strictly increasing",
                              filename, lineno);
        }
        if (rec.missed) ++task.miss_count;
        if (rec.finish > trace.duration) trace.duration = rec.finish;
        task.records.push_back(std::move(rec));
    }
    return trace;
}

sim::Trace ingest_logs(const std::vector<std::string>& paths) {
    sim::Trace merged;
    merged.external = true;
    for (const auto& path : paths) {
        std::ifstream file(path);
        if (!file) throw FormatError("cannot open file", path, 0);
        std::ostringstream buf;
        buf << file.rdbuf();
        sim::Trace one = ingest_log(buf.str(), path);
        for (auto& task : one.tasks) {
            bool appended = false;
            for (auto& existing : merged.tasks) {
                if (existing.task_id == task.task_id) {
                    if (!existing.records.empty() && !task.records.empty() &&
                        task.records.front().job_index <= existing.records.back().job_index) {
                        throw FormatError("job indices for container '" + task.task_id +
                                              "' are not strictly increasing across files",
                                          path, 0);
                    }
                    existing.miss_count += task.miss_count;
                    for (auto& rec : task.records) existing.records.push_back(std::move(rec));
                    appended = true;
                    break;
                }
            }
            if (!appended) merged.tasks.push_back(std::move(task));
        }
        if (one.duration > merged.duration) merged.duration = one.duration;
    }
    return merged;
}

}  // namespace rtslice::cli
