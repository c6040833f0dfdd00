#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "nlqw/spinor_field.hpp"

namespace nlqw {

/// Site probabilities P_n = |a_n|^2 + |b_n|^2 over the whole chain.
std::vector<double> probability_distribution(const SpinorField& field);

/// Inverse participation ratio 1 / sum_n P_n^2 on spin-summed site
/// probabilities. Throws std::domain_error for an all-zero field.
double ipr(const SpinorField& field);

/// Probability at the origin site, both spin components.
double survival_probability(const SpinorField& field);

struct TimeSeriesRecord {
  std::int64_t t = 0;
  double ipr = 1.0;
  double sp = 1.0;
  double norm = 1.0;

  friend bool operator==(const TimeSeriesRecord&,
                         const TimeSeriesRecord&) = default;
};

/// All three observables of `field` at step t.
TimeSeriesRecord observe(std::int64_t t, const SpinorField& field);

/// Inclusive step window [start, end].
struct Window {
  std::int64_t start = 0;
  std::int64_t end = 0;

  friend bool operator==(const Window&, const Window&) = default;
};

/// Which records inside the window enter an average.
///
/// A walk started from a single site moves every amplitude by exactly one
/// site per step, so the origin is empty on every odd step. `return_times`
/// keeps only even t, the steps on which the walker can be at the origin.
enum class Sampling { every_step, return_times };

std::string_view to_string(Sampling s);
Sampling sampling_from_string(std::string_view s);

inline bool sampled(Sampling s, std::int64_t t) {
  return s == Sampling::every_step || t % 2 == 0;
}

/// [ceil(start_fraction * steps), steps]. Throws std::invalid_argument unless
/// 0 <= start_fraction < 1 and the window is non-empty.
Window trailing_window(std::int64_t steps, double start_fraction);

struct LongTimeAverages {
  double ipr_bar = 0.0;
  double sp_bar = 0.0;
  Window window;
  std::size_t samples = 0;
};

/// Arithmetic means of ipr and sp over records with start <= t <= end that
/// pass `sampling`. Throws std::invalid_argument if start >= end, if the
/// window reaches past the series, or if no record is selected.
LongTimeAverages time_average(std::span<const TimeSeriesRecord> series,
                              Window window,
                              Sampling sampling = Sampling::every_step);

struct Sample {
  double t = 0.0;
  double value = 0.0;
};

struct PowerLawFit {
  double exponent = 0.0;
  double amplitude = 0.0;     ///< prefactor A in value = A * t^exponent
  double rms_residual = 0.0;  ///< in log space
  std::size_t points = 0;
};

/// Least-squares line through (log t, log value) for samples with t >= t_min.
/// Throws std::domain_error on a non-positive value or time in range and
/// std::invalid_argument when fewer than 10 points remain.
PowerLawFit fit_power_law(std::span<const Sample> series, double t_min);

}  // namespace nlqw
