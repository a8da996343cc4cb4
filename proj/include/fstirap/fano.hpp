#pragma once

// Feshbach resonance embedded in the open-channel continuum, in the Fano
// picture: phase shift, admixture of the closed-channel bound state, the
// lineshape factor g(q, eps) and the resulting continuum-bound coupling.
//
// Energies are angular frequencies (internal units). sgn(0) is taken as +1.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

namespace fstirap {

template <typename Scalar = double>
struct FanoResonance {
  Scalar q{0};
  Scalar Gamma{1};
  Scalar eps_F{0};
  /// Unperturbed continuum-bound dipole, esu cm erg^{-1/2}.
  std::optional<Scalar> mu2eps;
  /// Bound-bound dipole to |2>, esu cm.
  std::optional<Scalar> mu2b;

  void validate() const {
    if (!(Gamma > Scalar(0))) throw std::invalid_argument("FanoResonance: Gamma must be positive");
  }
};

template <typename Scalar>
constexpr Scalar sgn_plus(Scalar x) {
  return x >= Scalar(0) ? Scalar(1) : Scalar(-1);
}

/// Delta = -arctan(Gamma / 2(eps - eps_F)), in [-pi/2, pi/2].
template <typename Scalar>
Scalar phase_shift(const FanoResonance<Scalar>& res, Scalar eps) {
  using std::atan;
  const Scalar d = eps - res.eps_F;
  if (d == Scalar(0)) return -std::numbers::pi_v<Scalar> / Scalar(2);
  return -atan(res.Gamma / (Scalar(2) * d));
}

/// a(eps) = sqrt(2 / pi Gamma) sin Delta, units energy^{-1/2}.
template <typename Scalar>
Scalar bound_admixture(const FanoResonance<Scalar>& res, Scalar eps) {
  using std::sin;
  using std::sqrt;
  return sqrt(Scalar(2) / (std::numbers::pi_v<Scalar> * res.Gamma)) * sin(phase_shift(res, eps));
}

/// g(q, x) with x = 2 (eps - eps_F) / Gamma.
template <typename Scalar>
Scalar lineshape_reduced(Scalar q, Scalar x) {
  using std::sqrt;
  return (q + x) / sqrt(Scalar(1) + x * x);
}

template <typename Scalar>
Scalar lineshape(const FanoResonance<Scalar>& res, Scalar eps) {
  return lineshape_reduced(res.q, Scalar(2) * (eps - res.eps_F) / res.Gamma);
}

/// Signed lineshape g(q, eps) sgn(eps - eps_F); tends to 1 far from resonance
/// on both sides.
template <typename Scalar>
Scalar signed_lineshape(const FanoResonance<Scalar>& res, Scalar eps) {
  return lineshape(res, eps) * sgn_plus(eps - res.eps_F);
}

/// Continuum-bound Rabi frequency Omega_eps for a bare continuum coupling
/// `field_rabi` = mu_2eps e_p E_p / hbar (s^{-1/2}).
template <typename Scalar>
Scalar continuum_rabi(const FanoResonance<Scalar>& res, Scalar field_rabi, Scalar eps) {
  return field_rabi * signed_lineshape(res, eps);
}

/// Offset eps - eps_F and value of the lineshape extremum, (Gamma/2q, sqrt(1+q^2)).
/// For q < 0 the extremum is a minimum and the value is -sqrt(1+q^2).
template <typename Scalar>
std::pair<Scalar, Scalar> enhancement_max(const FanoResonance<Scalar>& res) {
  using std::sqrt;
  if (res.q == Scalar(0))
    throw std::domain_error("enhancement_max: q = 0 has no interior lineshape maximum");
  const Scalar g = sqrt(Scalar(1) + res.q * res.q);
  return {res.Gamma / (Scalar(2) * res.q), res.q > Scalar(0) ? g : -g};
}

/// Analytic derivative dg/d eps.
template <typename Scalar>
Scalar lineshape_derivative(const FanoResonance<Scalar>& res, Scalar eps) {
  using std::pow;
  const Scalar x = Scalar(2) * (eps - res.eps_F) / res.Gamma;
  const Scalar dgdx = (Scalar(1) - res.q * x) / pow(Scalar(1) + x * x, Scalar(1.5));
  return dgdx * Scalar(2) / res.Gamma;
}

}  // namespace fstirap
