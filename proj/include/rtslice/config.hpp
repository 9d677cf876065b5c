#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtslice/admission.hpp"
#include "rtslice/noise.hpp"
#include "rtslice/task.hpp"

namespace rtslice::cli {

/// A full experiment: tasks, slices, noise profile and run parameters.
/// Parsed from a flat, line-oriented section/key format:
///
///   [experiment]
///   duration = 60000000
///   seed = 42
///   profile = C5
///
///   [slice s0]
///   capacity = 1.0
///
///   [task c0]
///   period = 10000
///   wcet = 900
///   runtime = 900
///
/// An optional [profile] section defines a custom noise model; deadline
/// defaults to period when omitted.
struct ExperimentConfig {
    model::TaskSet tasks;
    std::vector<admission::ResourceSlice> slices;
    noise::SystemProfile profile = noise::zero_profile();
    micros_t duration = 60'000'000;
    std::uint64_t seed = 42;
    micros_t quantum = 0;
    std::map<std::string, micros_t> release_offsets;
    /// Explicit task -> slice pins; unpinned tasks go through partition().
    std::map<std::string, std::string> pins;
    std::optional<double> risk;  // max acceptable miss probability

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates a config. ParseError carries the offending line;
/// task validation failures surface as ConstraintViolation.
ExperimentConfig load_config(const std::string& text);

/// Canonical text form; load_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

/// Resolves a profile name: built-in presets first, then
/// "$RTSLICE_PROFILE_DIR/<name>.profile" (a file holding a [profile] section).
noise::SystemProfile resolve_profile(const std::string& name);

}  // namespace rtslice::cli
