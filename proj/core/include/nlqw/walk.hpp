#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "nlqw/spinor_field.hpp"

namespace nlqw {

/// Amplitude larger than kEdgeTolerance would leave the open chain.
inline constexpr double kEdgeTolerance = 1e-14;

class LightConeViolation : public std::runtime_error {
 public:
  LightConeViolation(std::size_t site, double amplitude);

  std::size_t site() const { return site_; }
  double amplitude() const { return amplitude_; }

 private:
  std::size_t site_;
  double amplitude_;
};

/// Coin entries: [[cos, sin], [sin, -cos]].
struct Coin {
  double cos = 1.0;
  double sin = 0.0;

  /// Evaluates cos/sin so that mirrored angles give exactly mirrored coins:
  /// for theta in [0, pi], the coin of fl(pi - theta) is bit-for-bit
  /// {-cos, sin} of the coin of theta. Both walks then run as exact
  /// reflections of each other instead of drifting apart by rounding.
  static Coin from_angle(double theta);

  friend bool operator==(const Coin&, const Coin&) = default;
};

/// Kerr phase exp(i*2*pi*chi*|z|^2)*z applied to every component.
SpinorField nonlinear_phase(const SpinorField& field, double chi);

/// One step of the nonlinear walk:
///
///   a'_n = cos(theta) e^{i2pi chi|a_{n+1}|^2} a_{n+1}
///        + sin(theta) e^{i2pi chi|b_{n+1}|^2} b_{n+1}
///   b'_n = sin(theta) e^{i2pi chi|a_{n-1}|^2} a_{n-1}
///        - cos(theta) e^{i2pi chi|b_{n-1}|^2} b_{n-1}
///
/// Out-of-range neighbours count as zero. `out` must have the same size and
/// origin as `in` and must not alias it; its previous contents are
/// overwritten. Throws LightConeViolation if amplitude would be pushed past
/// either end of the chain.
void step_into(const SpinorField& in, const Coin& coin, double chi,
               SpinorField& out);
void step_into(const SpinorField& in, double theta, double chi,
               SpinorField& out);

SpinorField step(const SpinorField& field, double theta, double chi);
SpinorField step(const SpinorField& field, const WalkParams& params);

enum class Control { proceed, stop };

/// Called after every step with the step index t (1-based) and the field at t.
using Observer = std::function<Control(std::int64_t t, const SpinorField&)>;

/// Builds new_state(params) and applies params.steps steps, calling
/// `observer` (if any) after each. Stops early when the observer asks to.
SpinorField evolve(const WalkParams& params, const Observer& observer = {});

}  // namespace nlqw
