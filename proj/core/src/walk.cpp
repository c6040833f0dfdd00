#include "nlqw/walk.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace nlqw {

namespace {

std::string edge_message(std::size_t site, double amplitude) {
  return "light-cone violation: amplitude " + std::to_string(amplitude) +
         " leaves the chain at site " + std::to_string(site);
}

// e^{i 2 pi chi |z|^2} z, multiplied out by hand: the generic complex product
// goes through the NaN-recovering library routine.
inline complex kerr(complex z, double two_pi_chi) {
  const double re = z.real();
  const double im = z.imag();
  const double phase = two_pi_chi * (re * re + im * im);
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return {re * c - im * s, re * s + im * c};
}

// Subnormal amplitudes appear in the far tails of long walks and make every
// arithmetic operation on them very slow. Their probabilities are far below
// double resolution, so they are flushed to exact zero.
inline double flush(double x) {
  return std::abs(x) < std::numeric_limits<double>::min() ? 0.0 : x;
}

inline complex flush(complex z) { return {flush(z.real()), flush(z.imag())}; }

}  // namespace

LightConeViolation::LightConeViolation(std::size_t site, double amplitude)
    : std::runtime_error(edge_message(site, amplitude)),
      site_(site),
      amplitude_(amplitude) {}

SpinorField nonlinear_phase(const SpinorField& field, double chi) {
  SpinorField out = field;
  const double two_pi_chi = 2.0 * std::numbers::pi * chi;
  const Support s = field.support();
  auto a = field.a();
  auto b = field.b();
  auto oa = out.mutable_a();
  auto ob = out.mutable_b();
  for (std::size_t n = s.begin; n < s.end; ++n) {
    oa[n] = kerr(a[n], two_pi_chi);
    ob[n] = kerr(b[n], two_pi_chi);
  }
  return out;
}

Coin Coin::from_angle(double theta) {
  constexpr double pi = std::numbers::pi;
  if (theta >= 0.0 && theta <= pi) {
    // Both branches reduce to the same lower angle for a mirrored pair:
    // pi - fl(pi - theta) and pi - theta' with theta' = fl(pi - theta) are
    // exact subtractions (Sterbenz) yielding the same value.
    if (theta <= pi / 2) {
      const double lower = pi - (pi - theta);
      return {std::cos(lower), std::sin(lower)};
    }
    const double lower = pi - theta;
    return {-std::cos(lower), std::sin(lower)};
  }
  return {std::cos(theta), std::sin(theta)};
}

void step_into(const SpinorField& in, double theta, double chi,
               SpinorField& out) {
  step_into(in, Coin::from_angle(theta), chi, out);
}

void step_into(const SpinorField& in, const Coin& coin, double chi,
               SpinorField& out) {
  if (&in == &out) throw std::invalid_argument("step_into: output aliases input");
  if (out.size() != in.size()) {
    out = SpinorField(in.size(), in.origin());
  }
  out.origin_ = in.origin_;

  const std::size_t size = in.size();
  const double c = coin.cos;
  const double s = coin.sin;
  const double two_pi_chi = 2.0 * std::numbers::pi * chi;

  const Support src = in.support_;
  // Site m feeds a'_{m-1} and b'_{m+1}, so the new support is src widened by
  // one site on each side, clipped to the chain.
  Support dst = src;
  if (src.size() > 0) {
    dst.begin = src.begin > 0 ? src.begin - 1 : 0;
    dst.end = src.end < size ? src.end + 1 : size;
  }

  complex* oa = out.a_.data();
  complex* ob = out.b_.data();
  const complex* ia = in.a_.data();
  const complex* ib = in.b_.data();

  // Clear whatever `out` held outside the window we are about to fill.
  for (std::size_t n = out.support_.begin; n < out.support_.end; ++n) {
    if (n < dst.begin || n >= dst.end) {
      oa[n] = {};
      ob[n] = {};
    }
  }
  for (std::size_t n = dst.begin; n < dst.end; ++n) {
    oa[n] = {};
    ob[n] = {};
  }

  const complex zero{};
  for (std::size_t m = src.begin; m < src.end; ++m) {
    // Half the sites of a point-source walk are empty on any given step.
    if (ia[m] == zero && ib[m] == zero) continue;
    const complex pa = chi == 0.0 ? ia[m] : kerr(ia[m], two_pi_chi);
    const complex pb = chi == 0.0 ? ib[m] : kerr(ib[m], two_pi_chi);
    const complex up = flush(c * pa + s * pb);    // -> a'_{m-1}
    const complex down = flush(s * pa - c * pb);  // -> b'_{m+1}
    if (m > 0) {
      oa[m - 1] = up;
    } else if (std::abs(up) > kEdgeTolerance) {
      throw LightConeViolation(0, std::abs(up));
    }
    if (m + 1 < size) {
      ob[m + 1] = down;
    } else if (std::abs(down) > kEdgeTolerance) {
      throw LightConeViolation(size - 1, std::abs(down));
    }
  }
  while (dst.size() > 0 && oa[dst.begin] == zero && ob[dst.begin] == zero)
    ++dst.begin;
  while (dst.size() > 0 && oa[dst.end - 1] == zero && ob[dst.end - 1] == zero)
    --dst.end;
  out.support_ = dst;
}

SpinorField step(const SpinorField& field, double theta, double chi) {
  SpinorField out(field.size(), field.origin());
  step_into(field, theta, chi, out);
  return out;
}

SpinorField step(const SpinorField& field, const WalkParams& params) {
  return step(field, params.theta, params.chi);
}

SpinorField evolve(const WalkParams& params, const Observer& observer) {
  SpinorField current = new_state(params);
  SpinorField next(current.size(), current.origin());
  const Coin coin = Coin::from_angle(params.theta);
  for (std::int64_t t = 1; t <= params.steps; ++t) {
    step_into(current, coin, params.chi, next);
    std::swap(current, next);
    if (observer && observer(t, current) == Control::stop) break;
  }
  return current;
}

}  // namespace nlqw
