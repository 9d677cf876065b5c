#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rtslice {

/// Base class for all rtslice errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A task's timing parameters break the runtime <= wcet <= deadline <= period
/// chain, or a duration is non-positive, or a task id collides.
struct ConstraintViolation : Error {
    using Error::Error;
};

/// lcm of the periods does not fit in 64-bit microseconds; callers should cap
/// their simulation horizon instead.
struct HyperperiodOverflow : Error {
    using Error::Error;
};

struct InsufficientSamples : Error {
    using Error::Error;
};

struct InvalidStats : Error {
    using Error::Error;
};

struct MissingDistribution : Error {
    explicit MissingDistribution(const std::string& task_id)
        : Error("no runtime distribution for task '" + task_id + "'"), task_id(task_id) {}
    std::string task_id;
};

/// partition() could not place every task; lists the ones left over.
struct Infeasible : Error {
    Infeasible(const std::string& msg, std::vector<std::string> tasks)
        : Error(msg), unplaced(std::move(tasks)) {}
    std::vector<std::string> unplaced;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, int line)
        : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

struct FormatError : Error {
    FormatError(const std::string& msg, const std::string& file, int line)
        : Error(file + ":" + std::to_string(line) + ": " + msg), file(file), line(line) {}
    std::string file;
    int line;
};

struct InconsistentRecord : Error {
    using Error::Error;
};

}  // namespace rtslice
