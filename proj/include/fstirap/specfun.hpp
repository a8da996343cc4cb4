#pragma once

// Differences of modified Bessel and modified Struve functions,
// I0 - L0 and I1 - L_{-1}, evaluated directly so that nothing overflows
// (each term alone grows like e^x, the differences decay like powers of 1/x).

namespace fstirap {

struct SpecFunResult {
  double value = 0.0;
  double est_error = 0.0;
};

/// I0(x) - L0(x) for x >= 0. Tends to 2/(pi x).
SpecFunResult i0_minus_l0(double x);

/// I1(x) - L_{-1}(x) for x >= 0. Equals -2/pi at 0, tends to -2/(pi x^2).
SpecFunResult i1_minus_lm1(double x);

namespace specfun_detail {
// Branch boundaries, exposed for the crossover tests.
inline constexpr double kSeriesMax = 6.0;
inline constexpr double kAsymptoticMin = 40.0;

SpecFunResult i0_minus_l0_series(double x);
SpecFunResult i1_minus_lm1_series(double x);
SpecFunResult i0_minus_l0_integral(double x);
SpecFunResult i1_minus_lm1_integral(double x);
SpecFunResult i0_minus_l0_asymptotic(double x);
SpecFunResult i1_minus_lm1_asymptotic(double x);
}  // namespace specfun_detail

}  // namespace fstirap
