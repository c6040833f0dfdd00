#include "nlqw/spinor_field.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlqw {

std::string_view to_string(InitialState s) {
  switch (s) {
    case InitialState::symmetric_circular:
      return "symmetric";
    case InitialState::right_only:
      return "right";
  }
  return "?";
}

InitialState initial_state_from_string(std::string_view s) {
  if (s == "symmetric") return InitialState::symmetric_circular;
  if (s == "right") return InitialState::right_only;
  throw std::invalid_argument("initial: expected 'symmetric' or 'right', got '" +
                              std::string(s) + "'");
}

void WalkParams::validate() const {
  if (!std::isfinite(theta) || theta < 0.0 || theta > 2.0 * std::numbers::pi)
    throw std::invalid_argument("theta: must lie in [0, 2pi]");
  if (!std::isfinite(chi) || chi < 0.0)
    throw std::invalid_argument("chi: must be finite and >= 0");
  if (steps < 1) throw std::invalid_argument("steps: must be >= 1");
  if (margin < 0) throw std::invalid_argument("margin: must be >= 0");
  (void)lattice_size();
}

std::size_t WalkParams::lattice_size() const {
  // Each site holds two complex doubles; keep 2*N*sizeof(complex) in range.
  constexpr auto limit = static_cast<std::uint64_t>(
      std::numeric_limits<std::ptrdiff_t>::max() / (2 * sizeof(complex)));
  const auto s = static_cast<std::uint64_t>(steps);
  const auto m = static_cast<std::uint64_t>(margin);
  if (steps < 1 || margin < 0 || s > limit / 4 || m > limit / 4)
    throw std::invalid_argument("steps/margin: lattice size overflows");
  const std::uint64_t n = 2 * s + 2 * m + 1;
  if (n > limit) throw std::invalid_argument("steps/margin: lattice size overflows");
  return static_cast<std::size_t>(n);
}

SpinorField::SpinorField(std::size_t size, std::size_t origin)
    : a_(size), b_(size), origin_(origin), support_{origin, origin} {
  if (size < 3) throw std::invalid_argument("SpinorField: need at least 3 sites");
  if (origin >= size) throw std::invalid_argument("SpinorField: origin out of range");
}

SpinorField::SpinorField(std::vector<complex> a, std::vector<complex> b,
                         std::size_t origin)
    : a_(std::move(a)), b_(std::move(b)), origin_(origin) {
  if (a_.size() != b_.size())
    throw std::invalid_argument("SpinorField: component lengths differ");
  if (a_.size() < 3) throw std::invalid_argument("SpinorField: need at least 3 sites");
  if (origin_ >= a_.size())
    throw std::invalid_argument("SpinorField: origin out of range");
  support_ = {0, a_.size()};
}

std::span<complex> SpinorField::mutable_a() {
  support_ = {0, size()};
  return a_;
}

std::span<complex> SpinorField::mutable_b() {
  support_ = {0, size()};
  return b_;
}

void SpinorField::set(std::size_t site, complex a, complex b) {
  if (site >= size()) throw std::out_of_range("SpinorField::set: site out of range");
  a_[site] = a;
  b_[site] = b;
  if (support_.size() == 0) {
    support_ = {site, site + 1};
  } else {
    support_.begin = std::min(support_.begin, site);
    support_.end = std::max(support_.end, site + 1);
  }
}

void SpinorField::trim_support() {
  auto empty = [this](std::size_t n) {
    return a_[n] == complex{} && b_[n] == complex{};
  };
  std::size_t lo = support_.begin;
  std::size_t hi = support_.end;
  while (lo < hi && empty(lo)) ++lo;
  while (hi > lo && empty(hi - 1)) --hi;
  support_ = {lo, hi};
}

void SpinorField::apply_global_phase(double phase) {
  const complex factor = std::polar(1.0, phase);
  for (std::size_t n = support_.begin; n < support_.end; ++n) {
    a_[n] *= factor;
    b_[n] *= factor;
  }
}

SpinorField new_state(const WalkParams& params) {
  params.validate();
  const std::size_t n = params.lattice_size();
  SpinorField field(n, n / 2);
  switch (params.initial) {
    case InitialState::symmetric_circular: {
      const double h = 1.0 / std::numbers::sqrt2;
      field.set(field.origin(), {h, 0.0}, {0.0, h});
      break;
    }
    case InitialState::right_only:
      field.set(field.origin(), {1.0, 0.0}, {});
      break;
  }
  return field;
}

double norm(const SpinorField& field) {
  const auto a = field.a();
  const auto b = field.b();
  const Support s = field.support();
  double total = 0.0;
  for (std::size_t n = s.begin; n < s.end; ++n)
    total += std::norm(a[n]) + std::norm(b[n]);
  return total;
}

}  // namespace nlqw
