#include "nlqw/run.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "nlqw/walk.hpp"

namespace nlqw {

void run_walk(const RunConfig& config, std::ostream& out) {
  config.validate();
  if (config.mode != Mode::walk) throw ConfigError("mode", "expected walk");
  write_walk_header(out, config.format);
  const std::int64_t stride = config.record_stride;
  evolve(*config.walk, [&](std::int64_t t, const SpinorField& field) {
    if (t % stride == 0) write_walk_row(out, config.format, observe(t, field));
    return Control::proceed;
  });
}

void run_profile(const RunConfig& config, std::ostream& out) {
  config.validate();
  if (config.mode != Mode::profile) throw ConfigError("mode", "expected profile");

  std::vector<std::int64_t> times = config.snapshot_times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  write_profile_header(out, config.format);
  auto dump = [&](std::int64_t t, const SpinorField& field) {
    const auto o = static_cast<std::int64_t>(field.origin());
    const auto a = field.a();
    const auto b = field.b();
    for (std::int64_t n = -t; n <= t; ++n) {
      const auto site = static_cast<std::size_t>(o + n);
      write_profile_row(out, config.format,
                        {t, n, std::norm(a[site]) + std::norm(b[site])});
    }
  };

  auto pending = times.begin();
  WalkParams params = *config.walk;
  if (*pending == 0) {
    dump(0, new_state(params));
    ++pending;
  }
  if (pending == times.end()) return;
  // No need to run past the last snapshot.
  params.steps = times.back();
  evolve(params, [&](std::int64_t t, const SpinorField& field) {
    if (t == *pending) {
      dump(t, field);
      if (++pending == times.end()) return Control::stop;
    }
    return Control::proceed;
  });
}

void run_sweep_table(const RunConfig& config, std::ostream& out) {
  config.validate();
  if (config.mode != Mode::sweep) throw ConfigError("mode", "expected sweep");
  const SweepTable table = run_sweep(*config.sweep, config.workers);
  write_sweep_header(out, config.format);
  for (const auto& cell : table.cells)
    write_sweep_row(out, config.format, to_row(cell));
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << bytes;
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

void run(const RunConfig& config) {
  config.validate();
  if (config.output_path.empty()) throw ConfigError("output_path", "required");

  // Render fully in memory so a failed run leaves no partial table behind.
  std::ostringstream body;
  switch (config.mode) {
    case Mode::walk:
      run_walk(config, body);
      break;
    case Mode::profile:
      run_profile(config, body);
      break;
    case Mode::sweep:
      run_sweep_table(config, body);
      break;
  }
  write_file(config.output_path, body.str());
  if (config.mode == Mode::sweep)
    write_file(metadata_path(config.output_path), sweep_metadata(config));
}

}  // namespace nlqw
