#include "nlqw/observables.hpp"

#include <cmath>
#include <string>

namespace nlqw {

std::vector<double> probability_distribution(const SpinorField& field) {
  std::vector<double> p(field.size(), 0.0);
  const auto a = field.a();
  const auto b = field.b();
  const Support s = field.support();
  for (std::size_t n = s.begin; n < s.end; ++n)
    p[n] = std::norm(a[n]) + std::norm(b[n]);
  return p;
}

double ipr(const SpinorField& field) {
  const auto a = field.a();
  const auto b = field.b();
  const Support s = field.support();
  double sum_sq = 0.0;
  for (std::size_t n = s.begin; n < s.end; ++n) {
    const double p = std::norm(a[n]) + std::norm(b[n]);
    sum_sq += p * p;
  }
  if (sum_sq == 0.0) throw std::domain_error("ipr: field is identically zero");
  return 1.0 / sum_sq;
}

double survival_probability(const SpinorField& field) {
  const std::size_t o = field.origin();
  return std::norm(field.a()[o]) + std::norm(field.b()[o]);
}

TimeSeriesRecord observe(std::int64_t t, const SpinorField& field) {
  return {t, ipr(field), survival_probability(field), norm(field)};
}

std::string_view to_string(Sampling s) {
  return s == Sampling::every_step ? "all" : "return";
}

Sampling sampling_from_string(std::string_view s) {
  if (s == "all") return Sampling::every_step;
  if (s == "return") return Sampling::return_times;
  throw std::invalid_argument("sampling: expected 'all' or 'return', got '" +
                              std::string(s) + "'");
}

Window trailing_window(std::int64_t steps, double start_fraction) {
  if (!(start_fraction >= 0.0 && start_fraction < 1.0))
    throw std::invalid_argument("window-start-frac: must lie in [0, 1)");
  const auto start = static_cast<std::int64_t>(
      std::ceil(start_fraction * static_cast<double>(steps)));
  if (start >= steps)
    throw std::invalid_argument("window-start-frac: window is empty");
  return {start, steps};
}

LongTimeAverages time_average(std::span<const TimeSeriesRecord> series,
                              Window window, Sampling sampling) {
  if (window.start >= window.end)
    throw std::invalid_argument("time_average: window start must precede end");
  if (series.empty() || window.end > series.back().t)
    throw std::invalid_argument("time_average: window extends past the series");

  LongTimeAverages out;
  out.window = window;
  double ipr_sum = 0.0;
  double sp_sum = 0.0;
  for (const auto& r : series) {
    if (r.t < window.start || r.t > window.end || !sampled(sampling, r.t))
      continue;
    ipr_sum += r.ipr;
    sp_sum += r.sp;
    ++out.samples;
  }
  if (out.samples == 0)
    throw std::invalid_argument("time_average: no records in window");
  const auto count = static_cast<double>(out.samples);
  out.ipr_bar = ipr_sum / count;
  out.sp_bar = sp_sum / count;
  return out;
}

PowerLawFit fit_power_law(std::span<const Sample> series, double t_min) {
  std::vector<double> xs, ys;
  for (const auto& s : series) {
    if (s.t < t_min) continue;
    if (!(s.t > 0.0) || !(s.value > 0.0))
      throw std::domain_error("fit_power_law: non-positive sample at t=" +
                              std::to_string(s.t));
    xs.push_back(std::log(s.t));
    ys.push_back(std::log(s.value));
  }
  if (xs.size() < 10)
    throw std::invalid_argument("fit_power_law: need at least 10 points, have " +
                                std::to_string(xs.size()));

  // Centred sums keep the slope accurate when log t is large.
  const auto count = static_cast<double>(xs.size());
  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x_mean += xs[i];
    y_mean += ys[i];
  }
  x_mean /= count;
  y_mean /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
    sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("fit_power_law: all samples share one time");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = y_mean - fit.exponent * x_mean;
  fit.amplitude = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / count);
  fit.points = xs.size();
  return fit;
}

}  // namespace nlqw
