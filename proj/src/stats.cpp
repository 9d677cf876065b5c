#include "rtslice/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rtslice/errors.hpp"

namespace rtslice::stats {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string format_skew(const GroupReport& r) {
    const auto lo = static_cast<long long>(std::llround(r.skw_min));
    const auto hi = static_cast<long long>(std::llround(r.skw_max));
    std::string s = lo == hi ? std::to_string(lo) : std::to_string(lo) + "/" + std::to_string(hi);
    if (r.incomplete_log) s += "*";
    return s;
}

std::string format_sd(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

SummaryStats summarize(std::span<const micros_t> samples) {
    if (samples.empty()) throw Error("summarize needs at least one sample");
    SummaryStats s;
    s.count = samples.size();
    std::vector<micros_t> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 == 1
                   ? static_cast<double>(sorted[mid])
                   : (static_cast<double>(sorted[mid - 1]) + static_cast<double>(sorted[mid])) / 2.0;
    double sum = 0.0;
    for (micros_t v : samples) sum += static_cast<double>(v);
    s.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double sq = 0.0;
        for (micros_t v : samples) {
            const double d = static_cast<double>(v) - s.mean;
            sq += d * d;
        }
        s.sd = std::sqrt(sq / static_cast<double>(samples.size() - 1));
    }
    return s;
}

GroupReport group_report(const std::string& label, const std::vector<TaskSamples>& tasks,
                         const std::string& system) {
    GroupReport report;
    report.label = label;
    report.system = system;

    double pooled_sum = 0.0;
    std::size_t pooled_count = 0;
    bool first_skew = true;
    double max_skew = 0.0;
    double sd_at_max = 0.0;
    for (const auto& task : tasks) {
        report.misses.emplace_back(task.task_id, task.miss_count);
        report.total_misses += task.miss_count;
        if (task.samples.empty()) {
            report.incomplete_log = true;
            continue;
        }
        const SummaryStats s = summarize(task.samples);
        pooled_sum += s.mean * static_cast<double>(s.count);
        pooled_count += s.count;
        const double skew = std::abs(s.mean - s.median);
        if (first_skew) {
            report.skw_min = report.skw_max = skew;
            max_skew = skew;
            sd_at_max = s.sd;
            first_skew = false;
        } else {
            report.skw_min = std::min(report.skw_min, skew);
            report.skw_max = std::max(report.skw_max, skew);
            if (skew > max_skew || (skew == max_skew && s.sd > sd_at_max)) {
                max_skew = skew;
                sd_at_max = s.sd;
            }
        }
    }
    if (pooled_count == 0) {
        report.incomplete_log = true;
        return report;
    }
    report.avg = pooled_sum / static_cast<double>(pooled_count);
    report.sd_mx = sd_at_max;
    return report;
}

ThresholdReport threshold_check(std::span<const micros_t> firing_latencies, micros_t cycle) {
    if (cycle <= 0) throw Error("cycle must be positive");
    ThresholdReport r;
    r.threshold_us = static_cast<double>(cycle) / 10.0;
    r.total = firing_latencies.size();
    for (micros_t v : firing_latencies) {
        // Strictly above cycle/10, compared exactly in integers.
        if (v * 10 > cycle) ++r.overshoots;
    }
    r.ratio = r.total == 0 ? 0.0
                           : static_cast<double>(r.overshoots) / static_cast<double>(r.total);
    return r;
}

std::string render_table(const std::vector<GroupReport>& reports,
                         const std::vector<std::string>& systems) {
    // Group rows by label in first-seen order; columns follow `systems`, or a
    // single unnamed group when no report carries a system.
    std::vector<std::string> labels;
    for (const auto& r : reports) {
        if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) {
            labels.push_back(r.label);
        }
    }
    std::vector<std::string> columns = systems;
    if (columns.empty()) columns.push_back("");

    auto cell = [&](const std::string& label, const std::string& system) -> const GroupReport* {
        for (const auto& r : reports) {
            if (r.label == label && r.system == system) return &r;
        }
        return nullptr;
    };

    std::size_t label_width = std::string("Configuration").size();
    for (const auto& l : labels) label_width = std::max(label_width, l.size());

    std::ostringstream out;
    out << "Configuration" << std::string(label_width - 13, ' ');
    for (const auto& sys : columns) {
        const std::string head = sys.empty() ? "AVG      SKW      SD_MX"
                                             : sys + ": AVG  SKW      SD_MX";
        out << "  | " << head;
    }
    out << "\n";
    for (const auto& label : labels) {
        out << label << std::string(label_width - label.size(), ' ');
        for (const auto& sys : columns) {
            out << "  | ";
            const GroupReport* r = cell(label, sys);
            if (r == nullptr) {
                out << "-";
                continue;
            }
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%-8lld %-8s %s",
                          static_cast<long long>(std::llround(r->avg)),
                          format_skew(*r).c_str(), format_sd(r->sd_mx).c_str());
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

std::string render_delimited(const std::vector<GroupReport>& reports) {
    std::string out = "label,avg_us,skw_min_us,skw_max_us,sd_mx_us,misses,starred\n";
    for (const auto& r : reports) {
        out += r.label + "," + format_double(r.avg) + "," + format_double(r.skw_min) + "," +
               format_double(r.skw_max) + "," + format_double(r.sd_mx) + "," +
               std::to_string(r.total_misses) + "," + (r.incomplete_log ? "1" : "0") + "\n";
    }
    return out;
}

std::vector<GroupReport> parse_delimited(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        line != "label,avg_us,skw_min_us,skw_max_us,sd_mx_us,misses,starred") {
        throw FormatError("missing or malformed report header", "<report>", 1);
    }
    std::vector<GroupReport> reports;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
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
            throw FormatError("expected 7 fields, got " + std::to_string(fields.size()),
                              "<report>", lineno);
        }
        try {
            GroupReport r;
            r.label = fields[0];
            r.avg = std::stod(fields[1]);
            r.skw_min = std::stod(fields[2]);
            r.skw_max = std::stod(fields[3]);
            r.sd_mx = std::stod(fields[4]);
            r.total_misses = std::stoll(fields[5]);
            r.incomplete_log = fields[6] == "1";
            reports.push_back(std::move(r));
        } catch (const std::exception&) {
            throw FormatError("unparsable numeric field", "<report>", lineno);
        }
    }
    return reports;
}

}  // namespace rtslice::stats
