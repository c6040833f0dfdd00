// nlqw: command-line driver for nonlinear quantum walk simulations.
//
//   nlqw walk    --theta pi/3 --chi 0.6 --steps 10000 --stride 10 --out walk.csv
//   nlqw profile --theta pi/4 --chi 0.3 --steps 1000 --snapshots 500,1000 --out p.csv
//   nlqw sweep   --steps 2000 --workers 8 --out diagram.csv
//
// Exit status: 0 success, 2 configuration error, 1 runtime error.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlqw/io.hpp"
#include "nlqw/run.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 1;

struct Flags {
  std::string config;
  std::optional<std::string> theta, chi, window_start_frac;
  std::optional<std::int64_t> steps, margin, stride;
  std::optional<std::string> initial, format, out, sampling;
  std::optional<int> workers;
  std::optional<std::string> snapshots;
  std::optional<std::string> theta_min, theta_max, chi_min, chi_max;
  std::optional<std::int64_t> theta_count, chi_count;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "JSON run configuration");
  cmd.add_option("--steps", f.steps, "time steps T");
  cmd.add_option("--initial", f.initial, "initial coin state: symmetric|right");
  cmd.add_option("--margin", f.margin, "extra sites beyond the light cone");
  cmd.add_option("--format", f.format, "output format: csv|ndjson");
  cmd.add_option("--out", f.out, "output path");
  cmd.add_option("--workers", f.workers, "worker threads (sweep)");
}

void add_walk(CLI::App& cmd, Flags& f) {
  cmd.add_option("--theta", f.theta, "coin angle, e.g. 1.047 or pi/3");
  cmd.add_option("--chi", f.chi, "nonlinear strength");
}

nlqw::InitialState initial_of(const std::string& s) {
  try {
    return nlqw::initial_state_from_string(s);
  } catch (const std::invalid_argument& e) {
    throw nlqw::ConfigError("initial", e.what());
  }
}

std::vector<std::int64_t> parse_times(const std::string& list) {
  std::vector<std::int64_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw nlqw::ConfigError("snapshot_times", "bad time '" + item + "'");
    }
  }
  return out;
}

nlqw::RunConfig build(nlqw::Mode mode, const Flags& f) {
  nlqw::RunConfig c;
  if (!f.config.empty()) {
    c = nlqw::load_config(f.config);
    if (c.mode != mode)
      throw nlqw::ConfigError("mode", "config file is for '" +
                                          std::string(nlqw::to_string(c.mode)) + "'");
  }
  c.mode = mode;
  if (f.format) c.format = nlqw::format_from_string(*f.format);
  if (f.out) c.output_path = *f.out;
  if (f.workers) c.workers = *f.workers;
  if (f.stride) c.record_stride = *f.stride;
  if (f.snapshots) c.snapshot_times = parse_times(*f.snapshots);

  if (mode == nlqw::Mode::sweep) {
    if (!c.sweep) c.sweep.emplace();
    auto& s = *c.sweep;
    if (f.steps) s.steps = *f.steps;
    if (f.margin) s.margin = *f.margin;
    if (f.initial) s.initial = initial_of(*f.initial);
    if (f.window_start_frac)
      s.averaging.start_fraction = nlqw::parse_real(*f.window_start_frac, "window-start-frac");
    if (f.sampling) {
      try {
        s.averaging.sampling = nlqw::sampling_from_string(*f.sampling);
      } catch (const std::invalid_argument& e) {
        throw nlqw::ConfigError("sampling", e.what());
      }
    }
    if (f.theta_min) s.theta.min = nlqw::parse_real(*f.theta_min, "theta-min");
    if (f.theta_max) s.theta.max = nlqw::parse_real(*f.theta_max, "theta-max");
    if (f.theta_count) s.theta.count = *f.theta_count;
    if (f.chi_min) s.chi.min = nlqw::parse_real(*f.chi_min, "chi-min");
    if (f.chi_max) s.chi.max = nlqw::parse_real(*f.chi_max, "chi-max");
    if (f.chi_count) s.chi.count = *f.chi_count;
  } else {
    if (!c.walk) c.walk.emplace();
    auto& w = *c.walk;
    if (f.theta) w.theta = nlqw::parse_real(*f.theta, "theta");
    if (f.chi) w.chi = nlqw::parse_real(*f.chi, "chi");
    if (f.steps) w.steps = *f.steps;
    if (f.margin) w.margin = *f.margin;
    if (f.initial) w.initial = initial_of(*f.initial);
  }
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear discrete-time quantum walk simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nlqw::kVersion));

  Flags walk_flags, profile_flags, sweep_flags;

  auto* walk = app.add_subcommand("walk", "time series of IPR, SP and norm");
  add_common(*walk, walk_flags);
  add_walk(*walk, walk_flags);
  walk->add_option("--stride", walk_flags.stride, "record every k-th step");

  auto* profile = app.add_subcommand("profile", "probability profiles at chosen times");
  add_common(*profile, profile_flags);
  add_walk(*profile, profile_flags);
  profile->add_option("--snapshots", profile_flags.snapshots,
                      "comma-separated snapshot times");

  auto* sweep = app.add_subcommand("sweep", "chi-theta diagram of long-time averages");
  add_common(*sweep, sweep_flags);
  sweep->add_option("--window-start-frac", sweep_flags.window_start_frac,
                    "averaging window starts at this fraction of T");
  sweep->add_option("--sampling", sweep_flags.sampling,
                    "steps entering the average: return|all");
  sweep->add_option("--theta-min", sweep_flags.theta_min);
  sweep->add_option("--theta-max", sweep_flags.theta_max);
  sweep->add_option("--theta-count", sweep_flags.theta_count);
  sweep->add_option("--chi-min", sweep_flags.chi_min);
  sweep->add_option("--chi-max", sweep_flags.chi_max);
  sweep->add_option("--chi-count", sweep_flags.chi_count);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  nlqw::RunConfig config;
  try {
    if (walk->parsed()) config = build(nlqw::Mode::walk, walk_flags);
    else if (profile->parsed()) config = build(nlqw::Mode::profile, profile_flags);
    else config = build(nlqw::Mode::sweep, sweep_flags);
    if (config.output_path.empty()) throw nlqw::ConfigError("out", "required");
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    nlqw::run(config);
  } catch (const nlqw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
