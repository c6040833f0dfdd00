#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlqw/observables.hpp"
#include "nlqw/spinor_field.hpp"
#include "nlqw/sweep.hpp"

namespace nlqw {

inline constexpr std::string_view kVersion = "1.0.0";

/// Invalid run configuration. `field()` names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Mode { walk, sweep, profile };
enum class Format { csv, ndjson };

std::string_view to_string(Mode m);
std::string_view to_string(Format f);
Mode mode_from_string(std::string_view s);
Format format_from_string(std::string_view s);

struct RunConfig {
  Mode mode = Mode::walk;
  std::optional<WalkParams> walk;
  std::optional<SweepSpec> sweep;
  std::filesystem::path output_path;
  Format format = Format::csv;
  std::vector<std::int64_t> snapshot_times;
  std::int64_t record_stride = 1;
  int workers = 1;  ///< execution only; never affects output bytes

  /// Throws ConfigError.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a real number: a decimal literal or a multiple of pi written as
/// `pi`, `pi/4`, `2pi/3`, `2*pi/3`. Throws ConfigError tagged with `field`.
double parse_real(std::string_view text, std::string_view field);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

/// Reads a JSON RunConfig document. Keys missing from the document keep the
/// RunConfig defaults. Throws ConfigError.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// JSON document that parse_config() maps back to the same RunConfig
/// (workers excluded).
std::string config_to_json(const RunConfig& config);

// Table schemas. CSV headers are exactly:
//   walk:    t,ipr,sp,norm
//   profile: t,n,p
//   sweep:   theta,chi,ipr_bar,ipr_norm,sp_bar,regime
// NDJSON carries the same fields, one object per line, in the same order.

struct ProfileRow {
  std::int64_t t = 0;
  std::int64_t n = 0;  ///< site offset from the origin
  double p = 0.0;

  friend bool operator==(const ProfileRow&, const ProfileRow&) = default;
};

/// Sweep rows as stored on disk (variability is not part of the schema).
struct SweepRow {
  double theta = 0.0;
  double chi = 0.0;
  double ipr_bar = 0.0;
  double ipr_norm = 0.0;
  double sp_bar = 0.0;
  Regime regime = Regime::spreading;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

SweepRow to_row(const SweepCell& cell);

void write_walk_header(std::ostream& out, Format format);
void write_walk_row(std::ostream& out, Format format,
                    const TimeSeriesRecord& r);
void write_profile_header(std::ostream& out, Format format);
void write_profile_row(std::ostream& out, Format format, const ProfileRow& r);
void write_sweep_header(std::ostream& out, Format format);
void write_sweep_row(std::ostream& out, Format format, const SweepRow& r);

/// Parsers for the files written above. Throw std::runtime_error with a
/// line number on malformed input.
std::vector<TimeSeriesRecord> read_walk(std::istream& in, Format format);
std::vector<ProfileRow> read_profile(std::istream& in, Format format);
std::vector<SweepRow> read_sweep(std::istream& in, Format format);

/// Sidecar path next to a sweep table: same stem, `.meta.json`.
std::filesystem::path metadata_path(const std::filesystem::path& table);

/// Metadata written next to a sweep table. Itself a valid config document.
std::string sweep_metadata(const RunConfig& config);

}  // namespace nlqw
