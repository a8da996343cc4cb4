#pragma once

// Source term S(t): the amplitude per unit time fed into the excited bound
// state |2> out of the initial collisional wavepacket. All values are angular
// frequencies (s^-1) in the rotating frame of the Stokes/pump difference
// frequency.

#include "fstirap/fano.hpp"

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fstirap {

using cplx = std::complex<double>;

/// Gaussian collisional wavepacket
///   s_eps(0) = (pi delta^2)^{-1/4} exp(-(eps-eps0)^2 / 2 delta^2 + i (eps-eps0) t0),
/// normalized so that int |s_eps|^2 d eps = 1.
template <typename Scalar = double>
struct Wavepacket {
  Scalar eps0{0};
  Scalar delta_eps{1};
  Scalar t0{0};

  void validate() const {
    if (!(delta_eps > Scalar(0))) throw std::invalid_argument("Wavepacket: delta_eps must be positive");
  }
};

struct SourceParams {
  Wavepacket<double> wavepacket;
  std::optional<FanoResonance<double>> resonance;
  /// omega_S - omega_p (s^-1).
  double two_photon = 0.0;
  /// mu_2eps e_p E_p(t) / hbar at the evaluation time (s^{-1/2}).
  double pump_coupling = 0.0;

  /// eps0 - (omega_S - omega_p).
  double offset() const { return wavepacket.eps0 - two_photon; }
  /// S0 = pump_coupling (pi delta^2)^{-1/4}.
  double amplitude() const;
  /// Dimensionless time t delta / sqrt(2).
  double tau(double t) const;
  /// (eps_F - eps0) / (sqrt(2) delta); requires a resonance.
  double D() const;
  /// Gamma / (sqrt(2) delta); requires a resonance.
  double xi() const;
};

/// Gaussian source with no resonance:
///   S0 sqrt(2 pi) delta exp(-(t-t0)^2 delta^2 / 2 - i (eps0 - omega_Sp) t).
cplx source_no_res(const SourceParams& p, double t);

/// Broad-resonance limit: no-resonance source times g(q, eps0) sgn(eps0 - eps_F).
cplx source_broad(const SourceParams& p, double t);

/// Narrow-resonance limit: the Gaussian term plus the slowly decaying
/// contribution of the embedded bound state, written with I0-L0 and I1-L_{-1}.
cplx source_narrow(const SourceParams& p, double t);

struct SourceQuadratureOptions {
  /// Half-width of the integration windows in units of delta (around eps0)
  /// and Gamma (around eps_F).
  double window = 10.0;
  /// Lower cutoff on eps (dissociation threshold); none extends to -infinity.
  std::optional<double> threshold;
  /// Replace g(q, eps) sgn(eps - eps_F) by 1.
  bool flat_lineshape = false;
  double rel_tol = 1e-10;
  int max_intervals = 200000;
};

struct SourceQuadrature {
  cplx value;
  double error = 0.0;
  bool converged = true;
};

/// Direct numerical evaluation of the defining energy integral
///   S0 int d eps g sgn exp(-(eps-eps0)^2 / 2 delta^2 + i (eps-eps0) t0 - i (eps - omega_Sp) t).
SourceQuadrature source_general_quadrature(const SourceParams& p, double t,
                                           const SourceQuadratureOptions& opt = {});

/// Human-readable warnings when a limit form is used outside its validity
/// (Gamma/delta < 10 for broad, xi > 1 for narrow).
std::vector<std::string> source_validity_warnings(const SourceParams& p, bool narrow);

}  // namespace fstirap
