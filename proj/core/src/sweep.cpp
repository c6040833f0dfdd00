#include "nlqw/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>

#include "nlqw/walk.hpp"

namespace nlqw {

double Grid::at(std::int64_t i) const {
  if (i == 0) return min;
  if (i == count - 1) return max;
  const std::int64_t mirror = count - 1 - i;
  const auto linear = [this](std::int64_t k) {
    return min + (max - min) * static_cast<double>(k) /
                     static_cast<double>(count - 1);
  };
  // Upper half is the reflection of the lower half, so a grid over [0, pi]
  // pairs theta with exactly fl(pi - theta).
  if (i > mirror) return max - (linear(mirror) - min);
  return linear(i);
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::spreading:
      return "spreading";
    case Regime::mobile_soliton:
      return "mobile_soliton";
    case Regime::chaotic_like:
      return "chaotic_like";
    case Regime::self_trapped:
      return "self_trapped";
  }
  return "?";
}

Regime regime_from_string(std::string_view s) {
  for (Regime r : {Regime::spreading, Regime::mobile_soliton,
                   Regime::chaotic_like, Regime::self_trapped})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("regime: unknown name '" + std::string(s) + "'");
}

Regime classify_regime(double ipr_norm, double sp_bar, double variability,
                       const RegimeThresholds& thresholds) {
  if (sp_bar >= thresholds.trapped_sp) return Regime::self_trapped;
  if (ipr_norm >= thresholds.spreading_ipr) return Regime::spreading;
  if (variability >= thresholds.chaotic_variability) return Regime::chaotic_like;
  return Regime::mobile_soliton;
}

namespace {

void check_grid(const Grid& g, std::string_view name, double lo, double hi) {
  const std::string n(name);
  if (g.count < 2) throw std::invalid_argument(n + ".count: must be >= 2");
  if (!std::isfinite(g.min) || !std::isfinite(g.max))
    throw std::invalid_argument(n + ": bounds must be finite");
  if (!(g.min < g.max)) throw std::invalid_argument(n + ": min must be < max");
  if (g.min < lo || g.max > hi)
    throw std::invalid_argument(n + ": outside the allowed range");
}

}  // namespace

void SweepSpec::validate() const {
  check_grid(theta, "theta_range", 0.0, 2.0 * std::numbers::pi);
  check_grid(chi, "chi_range", 0.0, std::numeric_limits<double>::infinity());
  if (theta.count > 100000 || chi.count > 100000)
    throw std::invalid_argument("sweep: grid too large");
  WalkParams probe{theta.min, chi.min, steps, initial, margin};
  probe.validate();
  (void)trailing_window(steps, averaging.start_fraction);
}

LongTimeAverages cell_averages(const WalkParams& params,
                               const AveragingSpec& averaging) {
  const Window window = trailing_window(params.steps, averaging.start_fraction);
  std::vector<TimeSeriesRecord> records;
  records.reserve(static_cast<std::size_t>(window.end - window.start + 1));
  evolve(params, [&](std::int64_t t, const SpinorField& field) {
    if (t >= window.start && sampled(averaging.sampling, t))
      records.push_back(observe(t, field));
    return Control::proceed;
  });
  return time_average(records, window, averaging.sampling);
}

double chi_variability(const SweepTable& table, std::int64_t theta_index,
                       std::int64_t chi_index) {
  const double here = table.at(theta_index, chi_index).sp_bar;
  double ss = 0.0;
  int neighbours = 0;
  for (std::int64_t j : {chi_index - 1, chi_index + 1}) {
    if (j < 0 || j >= table.spec.chi.count) continue;
    const double d = here - table.at(theta_index, j).sp_bar;
    ss += d * d;
    ++neighbours;
  }
  return neighbours == 0 ? 0.0 : std::sqrt(ss / neighbours);
}

void finalize_table(SweepTable& table) {
  auto& cells = table.cells;
  if (cells.empty()) return;
  std::size_t argmax = 0;
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (cells[i].ipr_bar > cells[argmax].ipr_bar) argmax = i;
  const double peak = cells[argmax].ipr_bar;
  const double below_one = std::nextafter(1.0, 0.0);
  for (std::size_t i = 0; i < cells.size(); ++i)
    cells[i].ipr_norm =
        i == argmax ? 1.0 : std::min(cells[i].ipr_bar / peak, below_one);

  for (std::int64_t i = 0; i < table.spec.theta.count; ++i)
    for (std::int64_t j = 0; j < table.spec.chi.count; ++j) {
      auto& cell = cells[static_cast<std::size_t>(i * table.spec.chi.count + j)];
      cell.variability = chi_variability(table, i, j);
      cell.regime = classify_regime(cell.ipr_norm, cell.sp_bar,
                                    cell.variability, table.spec.thresholds);
    }
}

SweepError::SweepError(double theta, double chi, const std::string& what,
                       std::vector<SweepCell> completed)
    : std::runtime_error(what),
      theta_(theta),
      chi_(chi),
      completed_(std::move(completed)) {}

SweepTable run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  if (workers < 1) throw std::invalid_argument("workers: must be >= 1");

  const std::size_t total = spec.cell_count();
  std::vector<std::optional<SweepCell>> slots(total);

  struct Failure {
    std::size_t index;
    std::string message;
  };
  std::optional<Failure> failure;
  std::mutex failure_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto work = [&] {
    for (;;) {
      if (abort.load(std::memory_order_relaxed)) return;
      const std::size_t index = next.fetch_add(1);
      if (index >= total) return;
      const auto ti = static_cast<std::int64_t>(index) / spec.chi.count;
      const auto ci = static_cast<std::int64_t>(index) % spec.chi.count;
      SweepCell cell;
      cell.theta = spec.theta.at(ti);
      cell.chi = spec.chi.at(ci);
      try {
        const WalkParams params{cell.theta, cell.chi, spec.steps, spec.initial,
                                spec.margin};
        const LongTimeAverages avg = cell_averages(params, spec.averaging);
        cell.ipr_bar = avg.ipr_bar;
        cell.sp_bar = avg.sp_bar;
        slots[index] = cell;
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure || index < failure->index) failure = Failure{index, e.what()};
        abort = true;
      }
    }
  };

  const auto threads = static_cast<std::size_t>(workers);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }

  if (failure) {
    std::vector<SweepCell> done;
    for (const auto& s : slots)
      if (s) done.push_back(*s);
    const auto ti = static_cast<std::int64_t>(failure->index) / spec.chi.count;
    const auto ci = static_cast<std::int64_t>(failure->index) % spec.chi.count;
    const double theta = spec.theta.at(ti);
    const double chi = spec.chi.at(ci);
    throw SweepError(theta, chi,
                     "sweep cell (theta=" + std::to_string(theta) +
                         ", chi=" + std::to_string(chi) + ") failed: " +
                         failure->message + "; " + std::to_string(done.size()) +
                         " of " + std::to_string(total) + " cells completed",
                     std::move(done));
  }

  SweepTable table{spec, {}};
  table.cells.reserve(total);
  for (auto& s : slots) table.cells.push_back(*s);
  finalize_table(table);
  return table;
}

}  // namespace nlqw
