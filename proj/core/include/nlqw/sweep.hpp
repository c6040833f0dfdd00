#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlqw/observables.hpp"
#include "nlqw/spinor_field.hpp"

namespace nlqw {

/// Inclusive linear grid: count points from min to max.
struct Grid {
  double min = 0.0;
  double max = 1.0;
  std::int64_t count = 2;

  /// The i-th grid point. The last point is exactly `max`.
  double at(std::int64_t i) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

enum class Regime { spreading, mobile_soliton, chaotic_like, self_trapped };

std::string_view to_string(Regime r);
Regime regime_from_string(std::string_view s);

struct RegimeThresholds {
  double trapped_sp = 0.5;
  double spreading_ipr = 0.5;
  double chaotic_variability = 0.1;

  friend bool operator==(const RegimeThresholds&,
                         const RegimeThresholds&) = default;
};

/// First matching rule wins:
///   sp_bar >= trapped_sp                 -> self_trapped
///   ipr_norm >= spreading_ipr            -> spreading
///   variability >= chaotic_variability   -> chaotic_like
///   otherwise                            -> mobile_soliton
///
/// `variability` stands in for sensitivity to small changes of chi; see
/// chi_variability().
Regime classify_regime(double ipr_norm, double sp_bar, double variability,
                       const RegimeThresholds& thresholds = {});

struct AveragingSpec {
  double start_fraction = 0.8;
  Sampling sampling = Sampling::return_times;

  friend bool operator==(const AveragingSpec&, const AveragingSpec&) = default;
};

struct SweepSpec {
  Grid theta{0.0, 3.141592653589793, 21};
  Grid chi{0.0, 2.0, 21};
  std::int64_t steps = 2000;
  InitialState initial = InitialState::symmetric_circular;
  std::int64_t margin = 2;
  AveragingSpec averaging;
  RegimeThresholds thresholds;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  std::size_t cell_count() const {
    return static_cast<std::size_t>(theta.count * chi.count);
  }

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct SweepCell {
  double theta = 0.0;
  double chi = 0.0;
  double ipr_bar = 0.0;
  double sp_bar = 0.0;
  double ipr_norm = 0.0;
  double variability = 0.0;
  Regime regime = Regime::spreading;

  friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

/// Cells in row-major order: theta index outer, chi index inner.
struct SweepTable {
  SweepSpec spec;
  std::vector<SweepCell> cells;

  const SweepCell& at(std::int64_t theta_index, std::int64_t chi_index) const {
    return cells[static_cast<std::size_t>(theta_index * spec.chi.count +
                                          chi_index)];
  }
};

/// Long-time averages of one walk, as computed for each sweep cell.
LongTimeAverages cell_averages(const WalkParams& params,
                               const AveragingSpec& averaging);

/// Fills ipr_norm, variability and regime from ipr_bar and sp_bar of every
/// cell. ipr_norm is ipr_bar over the grid maximum; the first maximal cell in
/// row-major order gets exactly 1 and every other cell stays strictly below.
void finalize_table(SweepTable& table);

/// RMS difference of sp_bar against the neighbouring chi cells in the same
/// theta row (one or two neighbours).
double chi_variability(const SweepTable& table, std::int64_t theta_index,
                       std::int64_t chi_index);

/// A cell failed; carries the coordinates and every cell finished before the
/// sweep stopped.
class SweepError : public std::runtime_error {
 public:
  SweepError(double theta, double chi, const std::string& what,
             std::vector<SweepCell> completed);

  double theta() const { return theta_; }
  double chi() const { return chi_; }
  const std::vector<SweepCell>& completed() const { return completed_; }

 private:
  double theta_;
  double chi_;
  std::vector<SweepCell> completed_;
};

/// Runs every cell of `spec` on `workers` threads. Output is identical for
/// any worker count.
SweepTable run_sweep(const SweepSpec& spec, int workers = 1);

}  // namespace nlqw
