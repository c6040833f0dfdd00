#include "nlqw/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace nlqw {

using ordered_json = nlohmann::ordered_json;

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::walk:
      return "walk";
    case Mode::sweep:
      return "sweep";
    case Mode::profile:
      return "profile";
  }
  return "?";
}

std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "ndjson"; }

Mode mode_from_string(std::string_view s) {
  if (s == "walk") return Mode::walk;
  if (s == "sweep") return Mode::sweep;
  if (s == "profile") return Mode::profile;
  throw ConfigError("mode", "expected walk, profile or sweep, got '" +
                                std::string(s) + "'");
}

Format format_from_string(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "ndjson") return Format::ndjson;
  throw ConfigError("format", "expected csv or ndjson, got '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// numbers

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::optional<double> parse_decimal(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_integer(std::string_view s) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

double parse_real(std::string_view text, std::string_view field) {
  const std::string_view s = trim(text);
  const auto fail = [&]() -> ConfigError {
    return ConfigError(std::string(field),
                       "cannot parse '" + std::string(text) + "' as a number");
  };
  const auto pi_at = s.find("pi");
  if (pi_at == std::string_view::npos) {
    if (auto v = parse_decimal(s)) return *v;
    throw fail();
  }
  std::string_view coeff = trim(s.substr(0, pi_at));
  std::string_view rest = trim(s.substr(pi_at + 2));
  if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
  double k = 1.0;
  if (!coeff.empty()) {
    auto v = parse_decimal(coeff);
    if (!v) throw fail();
    k = *v;
  }
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw fail();
    auto v = parse_decimal(rest.substr(1));
    if (!v || *v == 0.0) throw fail();
    divisor = *v;
  }
  return k * std::numbers::pi / divisor;
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_real: conversion failed");
  return {buf, ptr};
}

// ---------------------------------------------------------------------------
// config

void RunConfig::validate() const {
  switch (mode) {
    case Mode::walk:
    case Mode::profile:
      if (!walk) throw ConfigError("walk", "required in " + std::string(to_string(mode)) + " mode");
      if (sweep) throw ConfigError("sweep", "not allowed in " + std::string(to_string(mode)) + " mode");
      try {
        walk->validate();
      } catch (const ConfigError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ConfigError("walk", e.what());
      }
      break;
    case Mode::sweep:
      if (!sweep) throw ConfigError("sweep", "required in sweep mode");
      if (walk) throw ConfigError("walk", "not allowed in sweep mode");
      try {
        sweep->validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError("sweep", e.what());
      }
      break;
  }
  if (record_stride < 1) throw ConfigError("record_stride", "must be >= 1");
  if (workers < 1) throw ConfigError("workers", "must be >= 1");
  if (mode == Mode::profile) {
    if (snapshot_times.empty())
      throw ConfigError("snapshot_times", "at least one time is required");
    for (auto t : snapshot_times)
      if (t < 0 || t > walk->steps)
        throw ConfigError("snapshot_times",
                          "time " + std::to_string(t) + " outside [0, steps]");
  }
}

namespace {

double json_real(const ordered_json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_real(j.get<std::string>(), field);
  throw ConfigError(field, "expected a number or numeric string");
}

std::int64_t json_int(const ordered_json& j, const std::string& field) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  throw ConfigError(field, "expected an integer");
}

std::string json_string(const ordered_json& j, const std::string& field) {
  if (j.is_string()) return j.get<std::string>();
  throw ConfigError(field, "expected a string");
}

template <typename Fn>
void for_each_key(const ordered_json& obj, const std::string& where, Fn&& fn) {
  if (!obj.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string field = where.empty() ? key : where + "." + key;
    if (!fn(key, value, field)) throw ConfigError(field, "unknown key");
  }
}

template <typename T>
T wrap(const std::string& field, T (*fn)(std::string_view), const std::string& s) {
  try {
    return fn(s);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

WalkParams parse_walk(const ordered_json& j, const std::string& where) {
  WalkParams w;
  for_each_key(j, where, [&](const std::string& key, const ordered_json& v,
                             const std::string& field) {
    if (key == "theta") w.theta = json_real(v, field);
    else if (key == "chi") w.chi = json_real(v, field);
    else if (key == "steps") w.steps = json_int(v, field);
    else if (key == "initial")
      w.initial = wrap(field, initial_state_from_string, json_string(v, field));
    else if (key == "margin") w.margin = json_int(v, field);
    else return false;
    return true;
  });
  return w;
}

Grid parse_grid(const ordered_json& j, const std::string& where) {
  Grid g;
  for_each_key(j, where, [&](const std::string& key, const ordered_json& v,
                             const std::string& field) {
    if (key == "min") g.min = json_real(v, field);
    else if (key == "max") g.max = json_real(v, field);
    else if (key == "count") g.count = json_int(v, field);
    else return false;
    return true;
  });
  return g;
}

SweepSpec parse_sweep(const ordered_json& j, const std::string& where) {
  SweepSpec s;
  for_each_key(j, where, [&](const std::string& key, const ordered_json& v,
                             const std::string& field) {
    if (key == "theta_range") s.theta = parse_grid(v, field);
    else if (key == "chi_range") s.chi = parse_grid(v, field);
    else if (key == "steps") s.steps = json_int(v, field);
    else if (key == "initial")
      s.initial = wrap(field, initial_state_from_string, json_string(v, field));
    else if (key == "margin") s.margin = json_int(v, field);
    else if (key == "window") {
      for_each_key(v, field, [&](const std::string& k, const ordered_json& x,
                                 const std::string& f) {
        if (k == "start_frac") s.averaging.start_fraction = json_real(x, f);
        else if (k == "sampling")
          s.averaging.sampling = wrap(f, sampling_from_string, json_string(x, f));
        else return false;
        return true;
      });
    } else if (key == "thresholds") {
      for_each_key(v, field, [&](const std::string& k, const ordered_json& x,
                                 const std::string& f) {
        if (k == "trapped_sp") s.thresholds.trapped_sp = json_real(x, f);
        else if (k == "spreading_ipr") s.thresholds.spreading_ipr = json_real(x, f);
        else if (k == "chaotic_variability")
          s.thresholds.chaotic_variability = json_real(x, f);
        else return false;
        return true;
      });
    } else {
      return false;
    }
    return true;
  });
  return s;
}

ordered_json grid_json(const Grid& g) {
  return {{"min", g.min}, {"max", g.max}, {"count", g.count}};
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["mode"] = to_string(c.mode);
  if (c.walk) {
    j["walk"] = {{"theta", c.walk->theta},
                 {"chi", c.walk->chi},
                 {"steps", c.walk->steps},
                 {"initial", to_string(c.walk->initial)},
                 {"margin", c.walk->margin}};
  }
  if (c.sweep) {
    const SweepSpec& s = *c.sweep;
    j["sweep"] = {
        {"theta_range", grid_json(s.theta)},
        {"chi_range", grid_json(s.chi)},
        {"steps", s.steps},
        {"initial", to_string(s.initial)},
        {"margin", s.margin},
        {"window",
         {{"start_frac", s.averaging.start_fraction},
          {"sampling", to_string(s.averaging.sampling)}}},
        {"thresholds",
         {{"trapped_sp", s.thresholds.trapped_sp},
          {"spreading_ipr", s.thresholds.spreading_ipr},
          {"chaotic_variability", s.thresholds.chaotic_variability}}}};
  }
  j["output_path"] = c.output_path.generic_string();
  j["format"] = to_string(c.format);
  if (c.mode == Mode::profile) j["snapshot_times"] = c.snapshot_times;
  if (c.mode == Mode::walk) j["record_stride"] = c.record_stride;
  return j;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", e.what());
  }
  RunConfig c;
  for_each_key(doc, "", [&](const std::string& key, const ordered_json& v,
                            const std::string& field) {
    if (key == "mode") c.mode = mode_from_string(json_string(v, field));
    else if (key == "walk") c.walk = parse_walk(v, field);
    else if (key == "sweep") c.sweep = parse_sweep(v, field);
    else if (key == "output_path") c.output_path = json_string(v, field);
    else if (key == "format") c.format = format_from_string(json_string(v, field));
    else if (key == "snapshot_times") {
      if (!v.is_array()) throw ConfigError(field, "expected an array");
      c.snapshot_times.clear();
      for (const auto& t : v) c.snapshot_times.push_back(json_int(t, field));
    } else if (key == "record_stride") c.record_stride = json_int(v, field);
    else if (key == "workers") c.workers = static_cast<int>(json_int(v, field));
    else if (key == "artifact_version") (void)json_string(v, field);
    else return false;
    return true;
  });
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& config) {
  return config_json(config).dump(2) + "\n";
}

std::filesystem::path metadata_path(const std::filesystem::path& table) {
  auto p = table;
  p.replace_extension(".meta.json");
  return p;
}

std::string sweep_metadata(const RunConfig& config) {
  ordered_json j;
  j["artifact_version"] = kVersion;
  const ordered_json body = config_json(config);
  for (const auto& [key, value] : body.items()) j[key] = value;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// tables

SweepRow to_row(const SweepCell& c) {
  return {c.theta, c.chi, c.ipr_bar, c.ipr_norm, c.sp_bar, c.regime};
}

void write_walk_header(std::ostream& out, Format format) {
  if (format == Format::csv) out << "t,ipr,sp,norm\n";
}

void write_walk_row(std::ostream& out, Format format, const TimeSeriesRecord& r) {
  if (format == Format::csv) {
    out << r.t << ',' << format_real(r.ipr) << ',' << format_real(r.sp) << ','
        << format_real(r.norm) << '\n';
  } else {
    out << "{\"t\":" << r.t << ",\"ipr\":" << format_real(r.ipr)
        << ",\"sp\":" << format_real(r.sp) << ",\"norm\":" << format_real(r.norm)
        << "}\n";
  }
}

void write_profile_header(std::ostream& out, Format format) {
  if (format == Format::csv) out << "t,n,p\n";
}

void write_profile_row(std::ostream& out, Format format, const ProfileRow& r) {
  if (format == Format::csv) {
    out << r.t << ',' << r.n << ',' << format_real(r.p) << '\n';
  } else {
    out << "{\"t\":" << r.t << ",\"n\":" << r.n << ",\"p\":" << format_real(r.p)
        << "}\n";
  }
}

void write_sweep_header(std::ostream& out, Format format) {
  if (format == Format::csv) out << "theta,chi,ipr_bar,ipr_norm,sp_bar,regime\n";
}

void write_sweep_row(std::ostream& out, Format format, const SweepRow& r) {
  if (format == Format::csv) {
    out << format_real(r.theta) << ',' << format_real(r.chi) << ','
        << format_real(r.ipr_bar) << ',' << format_real(r.ipr_norm) << ','
        << format_real(r.sp_bar) << ',' << to_string(r.regime) << '\n';
  } else {
    out << "{\"theta\":" << format_real(r.theta)
        << ",\"chi\":" << format_real(r.chi)
        << ",\"ipr_bar\":" << format_real(r.ipr_bar)
        << ",\"ipr_norm\":" << format_real(r.ipr_norm)
        << ",\"sp_bar\":" << format_real(r.sp_bar) << ",\"regime\":\""
        << to_string(r.regime) << "\"}\n";
  }
}

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

// Splits CSV data rows after checking the header; calls fn(fields, line).
template <typename Fn>
void read_csv(std::istream& in, std::string_view header, std::size_t columns,
              Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) malformed(1, "missing header");
  ++number;
  if (line != header)
    malformed(number, "expected header '" + std::string(header) + "', got '" +
                          line + "'");
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++number;
    fields.clear();
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != columns)
      malformed(number, "expected " + std::to_string(columns) + " fields, got " +
                            std::to_string(fields.size()));
    fn(fields, number);
  }
}

template <typename Fn>
void read_ndjson(std::istream& in, std::initializer_list<std::string_view> keys,
                 Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      malformed(number, e.what());
    }
    if (!j.is_object() || j.size() != keys.size())
      malformed(number, "unexpected object shape");
    auto it = j.begin();
    for (std::string_view k : keys) {
      if (it.key() != k) malformed(number, "expected key '" + std::string(k) + "'");
      ++it;
    }
    fn(j, number);
  }
}

double field_real(std::string_view s, std::size_t line) {
  if (auto v = parse_decimal(s)) return *v;
  malformed(line, "bad number '" + std::string(s) + "'");
}

std::int64_t field_int(std::string_view s, std::size_t line) {
  if (auto v = parse_integer(s)) return *v;
  malformed(line, "bad integer '" + std::string(s) + "'");
}

double json_number(const ordered_json& j, const char* key, std::size_t line) {
  const auto& v = j.at(key);
  if (!v.is_number()) malformed(line, std::string(key) + " is not a number");
  return v.get<double>();
}

std::int64_t json_integer(const ordered_json& j, const char* key, std::size_t line) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) malformed(line, std::string(key) + " is not an integer");
  return v.get<std::int64_t>();
}

Regime row_regime(std::string_view s, std::size_t line) {
  try {
    return regime_from_string(s);
  } catch (const std::invalid_argument& e) {
    malformed(line, e.what());
  }
}

}  // namespace

std::vector<TimeSeriesRecord> read_walk(std::istream& in, Format format) {
  std::vector<TimeSeriesRecord> rows;
  if (format == Format::csv) {
    read_csv(in, "t,ipr,sp,norm", 4, [&](const auto& f, std::size_t line) {
      rows.push_back({field_int(f[0], line), field_real(f[1], line),
                      field_real(f[2], line), field_real(f[3], line)});
    });
  } else {
    read_ndjson(in, {"t", "ipr", "sp", "norm"}, [&](const ordered_json& j, std::size_t line) {
      rows.push_back({json_integer(j, "t", line), json_number(j, "ipr", line),
                      json_number(j, "sp", line), json_number(j, "norm", line)});
    });
  }
  return rows;
}

std::vector<ProfileRow> read_profile(std::istream& in, Format format) {
  std::vector<ProfileRow> rows;
  if (format == Format::csv) {
    read_csv(in, "t,n,p", 3, [&](const auto& f, std::size_t line) {
      rows.push_back({field_int(f[0], line), field_int(f[1], line),
                      field_real(f[2], line)});
    });
  } else {
    read_ndjson(in, {"t", "n", "p"}, [&](const ordered_json& j, std::size_t line) {
      rows.push_back({json_integer(j, "t", line), json_integer(j, "n", line),
                      json_number(j, "p", line)});
    });
  }
  return rows;
}

std::vector<SweepRow> read_sweep(std::istream& in, Format format) {
  std::vector<SweepRow> rows;
  if (format == Format::csv) {
    read_csv(in, "theta,chi,ipr_bar,ipr_norm,sp_bar,regime", 6,
             [&](const auto& f, std::size_t line) {
               rows.push_back({field_real(f[0], line), field_real(f[1], line),
                               field_real(f[2], line), field_real(f[3], line),
                               field_real(f[4], line), row_regime(f[5], line)});
             });
  } else {
    read_ndjson(in, {"theta", "chi", "ipr_bar", "ipr_norm", "sp_bar", "regime"},
                [&](const ordered_json& j, std::size_t line) {
                  const auto& r = j.at("regime");
                  if (!r.is_string()) malformed(line, "regime is not a string");
                  rows.push_back({json_number(j, "theta", line),
                                  json_number(j, "chi", line),
                                  json_number(j, "ipr_bar", line),
                                  json_number(j, "ipr_norm", line),
                                  json_number(j, "sp_bar", line),
                                  row_regime(r.get<std::string>(), line)});
                });
  }
  return rows;
}

}  // namespace nlqw
