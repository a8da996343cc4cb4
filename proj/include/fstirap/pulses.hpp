#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fstirap {

/// Gaussian laser envelope peak * exp(-((t - t0 + sign * offset) / width)^2).
/// Stokes pulses use sign = +1 (centered at t0 - offset), pump pulses
/// sign = -1 (centered at t0 + offset).
template <typename Scalar = double>
struct GaussianPulse {
  Scalar peak{0};
  Scalar center_offset{0};
  Scalar width{1};
  int sign{+1};

  Scalar center(Scalar t0) const { return t0 - Scalar(sign) * center_offset; }

  void validate() const {
    if (!(width > Scalar(0))) throw std::invalid_argument("GaussianPulse: width must be positive");
    if (peak < Scalar(0)) throw std::invalid_argument("GaussianPulse: peak must be non-negative");
    if (sign != 1 && sign != -1) throw std::invalid_argument("GaussianPulse: sign must be +1 or -1");
  }
};

template <typename Scalar>
Scalar evaluate(const GaussianPulse<Scalar>& pulse, Scalar t0, Scalar t) {
  using std::exp;
  const Scalar u = (t - pulse.center(t0)) / pulse.width;
  return pulse.peak * exp(-u * u);
}

template <typename Scalar = double>
struct PulsePair {
  GaussianPulse<Scalar> stokes{Scalar(0), Scalar(0), Scalar(1), +1};
  GaussianPulse<Scalar> pump{Scalar(0), Scalar(0), Scalar(1), -1};
  Scalar t0{0};

  Scalar stokes_center() const { return stokes.center(t0); }
  Scalar pump_center() const { return pump.center(t0); }
  bool counter_intuitive() const { return stokes_center() < pump_center(); }
};

/// Duration over which both envelopes exceed `threshold` times their peaks
/// (default e^-2); zero when the windows are disjoint.
template <typename Scalar>
Scalar overlap_time(const PulsePair<Scalar>& pair, Scalar threshold = Scalar(std::exp(-2.0))) {
  using std::log;
  using std::sqrt;
  if (!(threshold > Scalar(0) && threshold < Scalar(1)))
    throw std::invalid_argument("overlap_time: threshold must lie in (0, 1)");
  const Scalar k = sqrt(-log(threshold));
  const Scalar hs = k * pair.stokes.width;
  const Scalar hp = k * pair.pump.width;
  const Scalar lo = std::max(pair.stokes_center() - hs, pair.pump_center() - hp);
  const Scalar hi = std::min(pair.stokes_center() + hs, pair.pump_center() + hp);
  return std::max(Scalar(0), hi - lo);
}

}  // namespace fstirap
