#include "rtslice/config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rtslice/errors.hpp"

namespace rtslice::cli {

namespace {

std::string trim(std::string_view text) {
    std::size_t begin = text.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r");
    return std::string(text.substr(begin, end - begin + 1));
}

std::string strip_comment(const std::string& line) {
    // '#' starts a comment at line start or after whitespace.
    if (!line.empty() && line[0] == '#') return "";
    for (std::size_t i = 1; i < line.size(); ++i) {
        if (line[i] == '#' && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
            return line.substr(0, i);
        }
    }
    return line;
}

std::vector<std::string> tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::int64_t parse_int(const std::string& text, int line) {
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ParseError("expected an integer, got '" + text + "'", line);
    }
    return v;
}

std::uint64_t parse_uint(const std::string& text, int line) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ParseError("expected an unsigned integer, got '" + text + "'", line);
    }
    return v;
}

double parse_double(const std::string& text, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + text + "'", line);
    }
}

noise::Distribution parse_distribution(const std::string& value, int line) {
    const auto parts = tokens(value);
    if (parts.empty()) throw ParseError("empty distribution", line);
    try {
        if (parts[0] == "constant" && parts.size() == 2) {
            return noise::Distribution::constant(parse_int(parts[1], line));
        }
        if (parts[0] == "truncated_normal" && parts.size() == 4) {
            return noise::Distribution::truncated_normal(parse_double(parts[1], line),
                                                         parse_double(parts[2], line),
                                                         parse_int(parts[3], line));
        }
        if (parts[0] == "empirical" && parts.size() >= 2) {
            std::vector<micros_t> samples;
            for (std::size_t i = 1; i < parts.size(); ++i) {
                samples.push_back(parse_int(parts[i], line));
            }
            return noise::Distribution::empirical(std::move(samples));
        }
    } catch (const InvalidStats& e) {
        throw ParseError(e.what(), line);
    }
    throw ParseError("unknown distribution '" + value +
                         "' (want constant/truncated_normal/empirical)",
                     line);
}

std::string render_distribution(const noise::Distribution& dist) {
    char buf[128];
    switch (dist.kind()) {
        case noise::Distribution::Kind::Constant:
            return "constant " + std::to_string(dist.constant_value());
        case noise::Distribution::Kind::TruncatedNormal:
            std::snprintf(buf, sizeof(buf), "truncated_normal %.17g %.17g %lld",
                          dist.normal_mean(), dist.normal_sd(),
                          static_cast<long long>(dist.normal_max()));
            return buf;
        case noise::Distribution::Kind::Empirical: {
            std::string out = "empirical";
            for (micros_t v : dist.samples()) out += " " + std::to_string(v);
            return out;
        }
    }
    return "constant 0";
}

struct TaskEntry {
    model::TaskSpec spec;
    bool deadline_set = false;
    micros_t offset = 0;
    std::string pin;
};

struct ProfileDraft {
    std::string name = "custom";
    noise::Distribution firing = noise::Distribution::constant(0);
    noise::Distribution env = noise::Distribution::constant(0);
    bool any = false;
};

}  // namespace

ExperimentConfig load_config(const std::string& text) {
    ExperimentConfig config;
    config.slices.clear();

    enum class Section { None, Experiment, Slice, Task, Profile };
    Section section = Section::None;
    std::string section_arg;
    std::vector<TaskEntry> task_entries;
    TaskEntry* current_task = nullptr;
    admission::ResourceSlice* current_slice = nullptr;
    ProfileDraft profile_draft;
    std::string profile_name;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", lineno);
            const auto header = tokens(line.substr(1, line.size() - 2));
            if (header.empty()) throw ParseError("empty section header", lineno);
            const std::string& kind = header[0];
            section_arg = header.size() > 1 ? header[1] : "";
            if (kind == "experiment" && header.size() == 1) {
                section = Section::Experiment;
            } else if (kind == "slice" && header.size() == 2) {
                section = Section::Slice;
                config.slices.push_back({section_arg, Ratio(1, 1)});
                current_slice = &config.slices.back();
            } else if (kind == "task" && header.size() == 2) {
                section = Section::Task;
                task_entries.emplace_back();
                current_task = &task_entries.back();
                current_task->spec.id = section_arg;
            } else if (kind == "profile" && header.size() == 1) {
                section = Section::Profile;
                profile_draft.any = true;
            } else {
                throw ParseError("unknown section '" + line + "'", lineno);
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError("expected 'key = value'", lineno);

        switch (section) {
            case Section::None:
                throw ParseError("key outside any section", lineno);
            case Section::Experiment:
                if (key == "duration") {
                    config.duration = parse_int(value, lineno);
                } else if (key == "seed") {
                    config.seed = parse_uint(value, lineno);
                } else if (key == "quantum") {
                    config.quantum = parse_int(value, lineno);
                } else if (key == "risk") {
                    config.risk = parse_double(value, lineno);
                } else if (key == "profile") {
                    profile_name = value;
                } else {
                    throw ParseError("unknown experiment key '" + key + "'", lineno);
                }
                break;
            case Section::Slice:
                if (key == "capacity") {
                    try {
                        current_slice->capacity = Ratio::from_decimal(value);
                    } catch (const std::exception& e) {
                        throw ParseError(e.what(), lineno);
                    }
                } else {
                    throw ParseError("unknown slice key '" + key + "'", lineno);
                }
                break;
            case Section::Task:
                if (key == "period") {
                    current_task->spec.period = parse_int(value, lineno);
                } else if (key == "deadline") {
                    current_task->spec.deadline = parse_int(value, lineno);
                    current_task->deadline_set = true;
                } else if (key == "wcet") {
                    current_task->spec.wcet = parse_int(value, lineno);
                } else if (key == "runtime") {
                    current_task->spec.runtime = parse_int(value, lineno);
                } else if (key == "offset") {
                    current_task->offset = parse_int(value, lineno);
                } else if (key == "slice") {
                    current_task->pin = value;
                } else {
                    throw ParseError("unknown task key '" + key + "'", lineno);
                }
                break;
            case Section::Profile:
                if (key == "name") {
                    profile_draft.name = value;
                } else if (key == "firing") {
                    profile_draft.firing = parse_distribution(value, lineno);
                } else if (key == "env") {
                    profile_draft.env = parse_distribution(value, lineno);
                } else if (key == "firing_spike" || key == "env_spike") {
                    const auto parts = tokens(value);
                    if (parts.size() != 2) {
                        throw ParseError("spike wants '<probability> <value>'", lineno);
                    }
                    const double p = parse_double(parts[0], lineno);
                    const micros_t v = parse_int(parts[1], lineno);
                    try {
                        if (key == "firing_spike") {
                            profile_draft.firing = profile_draft.firing.with_spike(p, v);
                        } else {
                            profile_draft.env = profile_draft.env.with_spike(p, v);
                        }
                    } catch (const InvalidStats& e) {
                        throw ParseError(e.what(), lineno);
                    }
                } else {
                    throw ParseError("unknown profile key '" + key + "'", lineno);
                }
                break;
        }
    }

    if (task_entries.empty()) throw ParseError("config defines no tasks", 0);
    for (auto& entry : task_entries) {
        if (!entry.deadline_set) entry.spec.deadline = entry.spec.period;
        config.tasks.tasks.push_back(entry.spec);
        if (entry.offset != 0) config.release_offsets[entry.spec.id] = entry.offset;
        if (!entry.pin.empty()) config.pins[entry.spec.id] = entry.pin;
    }
    if (config.slices.empty()) config.slices.push_back({"s0", Ratio(1, 1)});
    for (std::size_t i = 0; i < config.slices.size(); ++i) {
        const auto& slice = config.slices[i];
        if (slice.capacity <= Ratio(0, 1) || slice.capacity > Ratio(1, 1)) {
            throw ParseError("slice '" + slice.id + "' capacity must lie in (0, 1]", 0);
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (config.slices[j].id == slice.id) {
                throw ParseError("duplicate slice id '" + slice.id + "'", 0);
            }
        }
    }

    if (profile_draft.any) {
        if (!profile_name.empty() && profile_name != profile_draft.name) {
            throw ParseError("config names profile '" + profile_name +
                                 "' but defines '" + profile_draft.name + "'",
                             0);
        }
        config.profile = {profile_draft.name, {profile_draft.firing, profile_draft.env}};
    } else if (!profile_name.empty()) {
        config.profile = resolve_profile(profile_name);
    }

    model::validate(config.tasks);
    for (const auto& [task_id, slice_id] : config.pins) {
        bool found = false;
        for (const auto& slice : config.slices) found |= slice.id == slice_id;
        if (!found) {
            throw ParseError("task '" + task_id + "' pinned to unknown slice '" + slice_id + "'",
                             0);
        }
    }
    if (config.risk && (*config.risk < 0.0 || *config.risk > 1.0)) {
        throw ParseError("risk must lie in [0, 1]", 0);
    }
    return config;
}

std::string render_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "duration = " << config.duration << "\n";
    out << "seed = " << config.seed << "\n";
    if (config.quantum != 0) out << "quantum = " << config.quantum << "\n";
    if (config.risk) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", *config.risk);
        out << "risk = " << buf << "\n";
    }

    bool preset = false;
    for (const auto& name : noise::profile_names()) {
        if (config.profile == noise::profile_by_name(name)) {
            out << "profile = " << name << "\n";
            preset = true;
            break;
        }
    }

    for (const auto& slice : config.slices) {
        out << "\n[slice " << slice.id << "]\n";
        out << "capacity = " << slice.capacity.to_string() << "\n";
    }

    for (const auto& task : config.tasks.tasks) {
        out << "\n[task " << task.id << "]\n";
        out << "period = " << task.period << "\n";
        if (task.deadline != task.period) out << "deadline = " << task.deadline << "\n";
        out << "wcet = " << task.wcet << "\n";
        out << "runtime = " << task.runtime << "\n";
        if (const auto it = config.release_offsets.find(task.id);
            it != config.release_offsets.end() && it->second != 0) {
            out << "offset = " << it->second << "\n";
        }
        if (const auto it = config.pins.find(task.id); it != config.pins.end()) {
            out << "slice = " << it->second << "\n";
        }
    }

    if (!preset) {
        char buf[40];
        out << "\n[profile]\n";
        out << "name = " << config.profile.name << "\n";
        const auto& firing = config.profile.noise.firing;
        const auto& env = config.profile.noise.env_runtime;
        out << "firing = " << render_distribution(firing) << "\n";
        out << "env = " << render_distribution(env) << "\n";
        if (firing.has_spike()) {
            std::snprintf(buf, sizeof(buf), "%.17g", firing.spike_probability());
            out << "firing_spike = " << buf << " " << firing.spike_value() << "\n";
        }
        if (env.has_spike()) {
            std::snprintf(buf, sizeof(buf), "%.17g", env.spike_probability());
            out << "env_spike = " << buf << " " << env.spike_value() << "\n";
        }
    }
    return out.str();
}

noise::SystemProfile resolve_profile(const std::string& name) {
    for (const auto& preset : noise::profile_names()) {
        if (name == preset || (name == "zero" && preset == "none")) {
            return noise::profile_by_name(name);
        }
    }
    const char* dir = std::getenv("RTSLICE_PROFILE_DIR");
    if (dir != nullptr && *dir != '\0') {
        const std::filesystem::path path = std::filesystem::path(dir) / (name + ".profile");
        std::ifstream file(path);
        if (file) {
            std::ostringstream buf;
            buf << file.rdbuf();
            // A profile file is just the [profile] section; parse it through
            // the config machinery with a placeholder task.
            ExperimentConfig probe = load_config(
                buf.str() + "\n[task probe]\nperiod = 1000\nwcet = 1\nruntime = 1\n");
            noise::SystemProfile profile = probe.profile;
            profile.name = name;
            return profile;
        }
    }
    throw ConfigError("unknown system profile '" + name + "'");
}

}  // namespace rtslice::cli
