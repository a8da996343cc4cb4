#include "fstirap/specfun.hpp"

#include "fstirap/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fstirap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

void check_domain(double x, const char* name) {
  if (!(x >= 0.0)) throw std::domain_error(std::string(name) + ": argument must be non-negative");
}

// Legendre rules mapped to [0, pi/2]; the coarse rule only serves the error
// estimate.
struct ThetaRules {
  QuadratureRule<double> fine;
  QuadratureRule<double> coarse;
};

QuadratureRule<double> map_to_quarter(QuadratureRule<double> r) {
  const double h = 0.25 * kPi;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = h * (r.nodes[i] + 1.0);
    r.weights[i] *= h;
  }
  return r;
}

const ThetaRules& theta_rules() {
  static const ThetaRules rules{map_to_quarter(gauss_legendre<double>(96)),
                                map_to_quarter(gauss_legendre<double>(64))};
  return rules;
}

// (2/pi) int_0^{pi/2} cos^p(theta) exp(-x cos theta) dtheta
double theta_integral(const QuadratureRule<double>& r, double x, int power) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double c = std::cos(r.nodes[i]);
    s += r.weights[i] * (power == 0 ? 1.0 : c) * std::exp(-x * c);
  }
  return 2.0 / kPi * s;
}

}  // namespace

namespace specfun_detail {

SpecFunResult i0_minus_l0_series(double x) {
  const double h2 = 0.25 * x * x;
  double a = 1.0;             // (x/2)^{2k} / Gamma(k+1)^2
  double b = 2.0 * x / kPi;   // (x/2)^{2k+1} / Gamma(k+3/2)^2
  double sum = a - b;
  double abs_sum = a + b;
  for (int k = 0; k < 400; ++k) {
    a *= h2 / ((k + 1.0) * (k + 1.0));
    b *= h2 / ((k + 1.5) * (k + 1.5));
    sum += a - b;
    abs_sum += a + b;
    if (a + b <= kEps * std::abs(sum) * 1e-2) break;
  }
  const double tail = a + b;
  return {sum, tail + 4.0 * kEps * abs_sum};
}

SpecFunResult i1_minus_lm1_series(double x) {
  const double h2 = 0.25 * x * x;
  double p = 0.5 * x;        // (x/2)^{2k+1} / (k! (k+1)!)
  double r = 2.0 / kPi;      // (x/2)^{2k} / (Gamma(k+1/2) Gamma(k+3/2))
  double sum = p - r;
  double abs_sum = p + r;
  for (int k = 0; k < 400; ++k) {
    p *= h2 / ((k + 1.0) * (k + 2.0));
    r *= h2 / ((k + 0.5) * (k + 1.5));
    sum += p - r;
    abs_sum += p + r;
    if (p + r <= kEps * std::abs(sum) * 1e-2) break;
  }
  const double tail = p + r;
  return {sum, tail + 4.0 * kEps * abs_sum};
}

SpecFunResult i0_minus_l0_integral(double x) {
  const auto& rules = theta_rules();
  const double fine = theta_integral(rules.fine, x, 0);
  const double coarse = theta_integral(rules.coarse, x, 0);
  return {fine, std::abs(fine - coarse) + 8.0 * kEps * std::abs(fine)};
}

SpecFunResult i1_minus_lm1_integral(double x) {
  const auto& rules = theta_rules();
  const double fine = -theta_integral(rules.fine, x, 1);
  const double coarse = -theta_integral(rules.coarse, x, 1);
  return {fine, std::abs(fine - coarse) + 8.0 * kEps * std::abs(fine)};
}

// Laplace representation (2/pi) int_0^inf e^{-xt} (1-t^2)^{-1/2} dt expanded
// term by term: (2/pi) sum_k (2k)!^2 / (4^k k!^2) x^{-2k-1}. The series is
// asymptotic; it is truncated at its smallest term.
SpecFunResult i0_minus_l0_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  double term = 2.0 / (kPi * x);
  double sum = term;
  for (int k = 0; k < 200; ++k) {
    const double ratio = (2.0 * k + 1.0) * (2.0 * k + 1.0) * inv2;
    const double next = term * ratio;
    if (ratio >= 1.0 || next <= kEps * sum * 1e-2) return {sum, next + 2.0 * kEps * sum};
    term = next;
    sum += term;
  }
  return {sum, term};
}

// -(2/pi) int_0^inf t e^{-xt} (1-t^2)^{-1/2} dt
//   ~ -(2/pi) sum_k (2k)! (2k+1)! / (4^k k!^2) x^{-2k-2}.
SpecFunResult i1_minus_lm1_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  double term = 2.0 / (kPi * x * x);
  double sum = term;
  for (int k = 0; k < 200; ++k) {
    const double ratio = (2.0 * k + 1.0) * (2.0 * k + 3.0) * inv2;
    const double next = term * ratio;
    if (ratio >= 1.0 || next <= kEps * sum * 1e-2) return {-sum, next + 2.0 * kEps * sum};
    term = next;
    sum += term;
  }
  return {-sum, term};
}

}  // namespace specfun_detail

SpecFunResult i0_minus_l0(double x) {
  check_domain(x, "i0_minus_l0");
  if (std::isinf(x)) return {0.0, 0.0};
  if (x <= specfun_detail::kSeriesMax) return specfun_detail::i0_minus_l0_series(x);
  if (x < specfun_detail::kAsymptoticMin) return specfun_detail::i0_minus_l0_integral(x);
  return specfun_detail::i0_minus_l0_asymptotic(x);
}

SpecFunResult i1_minus_lm1(double x) {
  check_domain(x, "i1_minus_lm1");
  if (std::isinf(x)) return {0.0, 0.0};
  if (x <= specfun_detail::kSeriesMax) return specfun_detail::i1_minus_lm1_series(x);
  if (x < specfun_detail::kAsymptoticMin) return specfun_detail::i1_minus_lm1_integral(x);
  return specfun_detail::i1_minus_lm1_asymptotic(x);
}

}  // namespace fstirap
