#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace nlqw {

using complex = std::complex<double>;

struct Coin;

/// Initial coin state placed on the origin site.
enum class InitialState {
  /// (|R> + i|L>)/sqrt(2): superposition of both circular polarizations.
  symmetric_circular,
  /// |R> only.
  right_only,
};

std::string_view to_string(InitialState s);
InitialState initial_state_from_string(std::string_view s);

/// Parameters of a single walk.
struct WalkParams {
  double theta = 0.0;   ///< coin angle in radians, [0, 2pi]
  double chi = 0.0;     ///< Kerr strength, >= 0
  std::int64_t steps = 1;
  InitialState initial = InitialState::symmetric_circular;
  std::int64_t margin = 2;  ///< sites beyond the light cone on each side

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Lattice size 2*steps + 2*margin + 1. Throws std::invalid_argument when
  /// the size does not fit the site index type.
  std::size_t lattice_size() const;

  friend bool operator==(const WalkParams&, const WalkParams&) = default;
};

/// Half-open range of sites that may carry nonzero amplitude.
struct Support {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Support&, const Support&) = default;
};

/// Two-component walker state on an open chain of N sites.
///
/// Component `a` is the right-handed amplitude, `b` the left-handed one. The
/// field also tracks a support window outside of which every amplitude is
/// exactly zero, so kernels and observables can skip the empty tails.
class SpinorField {
 public:
  /// All-zero field of `size` sites. Requires size >= 3 and origin < size.
  SpinorField(std::size_t size, std::size_t origin);

  /// Takes ownership of explicit amplitudes. Support covers the whole chain.
  SpinorField(std::vector<complex> a, std::vector<complex> b,
              std::size_t origin);

  std::size_t size() const { return a_.size(); }
  std::size_t origin() const { return origin_; }
  Support support() const { return support_; }

  std::span<const complex> a() const { return a_; }
  std::span<const complex> b() const { return b_; }

  /// Mutable access widens the support to the full chain.
  std::span<complex> mutable_a();
  std::span<complex> mutable_b();

  /// Sets one site and grows the support to include it.
  void set(std::size_t site, complex a, complex b);

  /// Shrinks the support to the smallest window holding every nonzero
  /// amplitude. Values are untouched.
  void trim_support();

  /// Multiplies every amplitude by exp(i*phase).
  void apply_global_phase(double phase);

  /// Amplitude-wise equality; the support window is not compared.
  friend bool operator==(const SpinorField& x, const SpinorField& y) {
    return x.origin_ == y.origin_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  friend void step_into(const SpinorField& in, const Coin& coin,
                        double chi, SpinorField& out);

  std::vector<complex> a_;
  std::vector<complex> b_;
  std::size_t origin_ = 0;
  Support support_;
};

/// Point-source initial state at the centre of a light-cone-sized lattice.
SpinorField new_state(const WalkParams& params);

/// Total probability sum_n |a_n|^2 + |b_n|^2.
double norm(const SpinorField& field);

}  // namespace nlqw
