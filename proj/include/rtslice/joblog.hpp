#pragma once

#include <string>
#include <vector>

#include "rtslice/sim.hpp"

namespace rtslice::cli {

/// Delimited job-log header; the on-disk format is exactly one record per
/// line below it.
inline constexpr const char* kJobLogHeader =
    "container,job,release_us,start_us,end_us,deadline_us,miss";

/// Serializes a trace, grouped per container with ascending job indices.
std::string write_joblog(const sim::Trace& trace);

/// Parses one log into a trace. Noise fields are unknown for external logs
/// and come back zero with the trace flagged external; firing latency is
/// start - release and runtime end - start. Throws FormatError (bad syntax,
/// non-monotone job indices) or InconsistentRecord (end < start, start <
/// release, miss flag contradicting the deadline).
sim::Trace ingest_log(const std::string& text, const std::string& filename = "<log>");

/// Reads and merges several log files.
sim::Trace ingest_logs(const std::vector<std::string>& paths);

}  // namespace rtslice::cli
