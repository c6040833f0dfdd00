#pragma once

#include <iosfwd>

#include "nlqw/io.hpp"

namespace nlqw {

/// Time series of a single walk, one row every `record_stride` steps
/// (t = stride, 2*stride, ...).
void run_walk(const RunConfig& config, std::ostream& out);

/// Site probabilities inside the light cone [-t, t] around the origin at
/// every snapshot time, rows sorted by (t, n).
void run_profile(const RunConfig& config, std::ostream& out);

/// Diagram table of a sweep, row-major in (theta, chi).
void run_sweep_table(const RunConfig& config, std::ostream& out);

/// Dispatches on config.mode and writes config.output_path (plus the
/// metadata sidecar in sweep mode). Throws ConfigError for bad settings and
/// std::runtime_error when a file cannot be written.
void run(const RunConfig& config);

}  // namespace nlqw
