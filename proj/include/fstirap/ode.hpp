#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the standard fourth-order
// continuous extension. Works on any Eigen column vector (real or complex).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fstirap {

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Upper bound on the step; <= 0 means unbounded.
  double max_step = 0.0;
  /// First trial step; <= 0 picks one from the span.
  double initial_step = 0.0;
  long max_steps = 5'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

/// Raised when the step size underflows or the step budget runs out.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

namespace dp5 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp5

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0), overwriting y with the
/// final state. `sample_times` (sorted, inside [t0, t1]) are filled through
/// the continuous extension and passed to `observer(t, y)`; with no sample
/// times the observer sees every accepted step, t0 included.
template <typename Vec, typename Rhs, typename Observer>
OdeStats integrate_dopri5(Rhs&& f, double t0, double t1, Vec& y, const OdeOptions& opt,
                          const std::vector<double>& sample_times, Observer&& observer) {
  using std::abs;
  if (!(t1 > t0)) throw std::invalid_argument("integrate_dopri5: t1 must exceed t0");
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
    throw std::invalid_argument("integrate_dopri5: tolerances must be positive");
  OdeStats stats;
  const bool dense = !sample_times.empty();
  std::size_t next_sample = 0;
  auto emit_until = [&](double t_hi, auto&& value_at) {
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t_hi) {
      observer(sample_times[next_sample], value_at(sample_times[next_sample]));
      ++next_sample;
    }
  };

  const double span = t1 - t0;
  double h = opt.initial_step > 0.0 ? opt.initial_step : span * 1e-4;
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  double t = t0;
  Vec k1 = f(t, y);
  ++stats.rhs_evaluations;
  if (dense) {
    emit_until(t0, [&](double) -> const Vec& { return y; });
  } else {
    observer(t, y);
  }

  Vec k2, k3, k4, k5, k6, k7, ytmp, ynew, r5;
  double err_prev = 1e-4;
  bool last_rejected = false;
  const double hmin_rel = 16.0 * std::numeric_limits<double>::epsilon();
  while (t < t1) {
    if (stats.accepted + stats.rejected >= opt.max_steps) {
      std::ostringstream msg;
      msg << "step budget exhausted at t = " << t;
      throw IntegrationError(msg.str(), t);
    }
    bool final_step = false;
    if (t + h >= t1) {
      h = t1 - t;
      final_step = true;
    }
    if (h <= hmin_rel * std::max(abs(t), span)) {
      std::ostringstream msg;
      msg << "step size underflow at t = " << t;
      throw IntegrationError(msg.str(), t);
    }
    ytmp = y + h * dp5::a21 * k1;
    k2 = f(t + dp5::c2 * h, ytmp);
    ytmp = y + h * (dp5::a31 * k1 + dp5::a32 * k2);
    k3 = f(t + dp5::c3 * h, ytmp);
    ytmp = y + h * (dp5::a41 * k1 + dp5::a42 * k2 + dp5::a43 * k3);
    k4 = f(t + dp5::c4 * h, ytmp);
    ytmp = y + h * (dp5::a51 * k1 + dp5::a52 * k2 + dp5::a53 * k3 + dp5::a54 * k4);
    k5 = f(t + dp5::c5 * h, ytmp);
    ytmp = y + h * (dp5::a61 * k1 + dp5::a62 * k2 + dp5::a63 * k3 + dp5::a64 * k4 + dp5::a65 * k5);
    k6 = f(t + h, ytmp);
    ynew = y + h * (dp5::a71 * k1 + dp5::a73 * k3 + dp5::a74 * k4 + dp5::a75 * k5 + dp5::a76 * k6);
    k7 = f(t + h, ynew);
    stats.rhs_evaluations += 6;

    // RMS of the scaled embedded error.
    double err = 0.0;
    const auto n = y.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ei = h * (dp5::e1 * k1[i] + dp5::e3 * k3[i] + dp5::e4 * k4[i] + dp5::e5 * k5[i] +
                           dp5::e6 * k6[i] + dp5::e7 * k7[i]);
      const double sc = opt.abs_tol + opt.rel_tol * std::max(double(abs(y[i])), double(abs(ynew[i])));
      const double r = double(abs(ei)) / sc;
      err += r * r;
    }
    err = std::sqrt(err / double(std::max<Eigen::Index>(n, 1)));
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      if (dense) {
        // Continuous extension coefficients.
        const Vec ydiff = ynew - y;
        const Vec bspl = h * k1 - ydiff;
        const Vec r4 = ydiff - h * k7 - bspl;
        r5 = h * (dp5::d1 * k1 + dp5::d3 * k3 + dp5::d4 * k4 + dp5::d5 * k5 + dp5::d6 * k6 +
                  dp5::d7 * k7);
        const double t_old = t, h_step = h;
        Vec scratch;
        emit_until(final_step ? t1 : t + h, [&](double ts) -> const Vec& {
          const double th = (ts - t_old) / h_step;
          const double th1 = 1.0 - th;
          scratch = y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5)));
          return scratch;
        });
      }
      t = final_step ? t1 : t + h;
      y = ynew;
      k1 = k7;
      ++stats.accepted;
      if (!dense) observer(t, y);
      // PI step-size control.
      const double e = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 10.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h *= fac;
      err_prev = std::max(err, 1e-4);
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      ++stats.rejected;
      last_rejected = true;
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  }
  return stats;
}

}  // namespace fstirap
