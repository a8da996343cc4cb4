#pragma once

// Amplitude equations for the initial molecular state |1> (c1) and the
// excited bound state |2> (c2), with the continuum eliminated into a source
// term and a back-stimulation term. Three reduced forms (no resonance, broad
// and narrow Feshbach resonance) plus a brute-force discretized continuum.
//
//   i c1' = -Omega_S c2
//   i c2' = (delta - i gamma) c2 - Omega_S c1 - S(t) - i T(t)
//
// The pump enters as the continuum coupling mu_2eps E_p(t) / hbar (s^{-1/2});
// the stored pump peak is the dimensionless amplitude of units.hpp.

#include "fstirap/fano.hpp"
#include "fstirap/ode.hpp"
#include "fstirap/pulses.hpp"
#include "fstirap/source.hpp"
#include "fstirap/units.hpp"

#include <Eigen/Core>

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fstirap {

struct AmplitudeState {
  cplx c1{0.0, 0.0};
  cplx c2{0.0, 0.0};
  /// int c2(t') coupling(t') exp(-k (t - t')) dt' (narrow regime only).
  cplx mem{0.0, 0.0};

  double pop1() const { return std::norm(c1); }
  double pop2() const { return std::norm(c2); }
};

struct IntegrationControls {
  /// Integration window; ignored when auto_window is set.
  double t_start = 0.0;
  double t_end = 0.0;
  bool auto_window = true;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// <= 0: a tenth of the shorter pulse width.
  double max_step = 0.0;
  /// Uniformly spaced output samples, endpoints included.
  int samples = 801;
};

/// How the narrow-resonance model evaluates its source term.
enum class NarrowSource {
  bessel_struve,  // closed form with I0-L0 and I1-L_{-1}
  quadrature,     // tabulated direct energy integral, valid for any Gamma/delta
};

struct OracleOptions {
  int n_states = 0;                 // 0: fill the window with bins of 0.1 delta / sqrt(2)
  std::optional<double> eps_lo;     // absolute energies of the grid edges
  std::optional<double> eps_hi;
  bool check_resolution = false;    // rerun with 2 n_states and report
};

struct ScenarioConfig {
  Regime regime = Regime::none;
  std::optional<FanoResonance<double>> resonance;
  /// Stokes peak in s^-1; pump peak as dimensionless amplitude.
  PulsePair<double> pulses;
  /// wavepacket.t0 is the collision time.
  Wavepacket<double> wavepacket;
  double delta = 0.0;
  double gamma = 0.0;
  /// eps0 - (omega_S - omega_p).
  double two_photon_offset = 0.0;
  IntegrationControls integration;
  NarrowSource narrow_source = NarrowSource::bessel_struve;
  OracleOptions oracle;
  /// Starting amplitudes; defaults to all zero.
  std::optional<AmplitudeState> initial;

  /// omega_S - omega_p.
  double two_photon() const { return wavepacket.eps0 - two_photon_offset; }
  /// eps_F - (omega_S - omega_p); requires a resonance.
  double feshbach_offset() const;
  /// [t_start, t_end] actually used.
  std::pair<double, double> window() const;
  double stokes(double t) const { return evaluate(pulses.stokes, pulses.t0, t); }
  /// mu_2eps E_p(t) / hbar.
  double pump_coupling(double t) const;
  /// Pump amplitude in the plotting units of the regime.
  double pump_display(double t) const;
  SourceParams source_params(double t) const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct PulseSample {
  double omega_s = 0.0;
  double pump_display = 0.0;
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<AmplitudeState> states;
  std::vector<PulseSample> pulses_sampled;
  std::vector<std::pair<double, double>> populations;
  /// Summed continuum population (oracle only).
  std::vector<double> continuum_population;
  std::vector<std::string> warnings;
  OdeStats stats;

  const AmplitudeState& final_state() const { return states.back(); }
  double efficiency() const { return states.back().pop1(); }
};

using StateVector = Eigen::Matrix<cplx, 3, 1>;

AmplitudeState rhs_no_res(const ScenarioConfig& cfg, double t, const AmplitudeState& s);
AmplitudeState rhs_broad(const ScenarioConfig& cfg, double t, const AmplitudeState& s);
AmplitudeState rhs_narrow(const ScenarioConfig& cfg, double t, const AmplitudeState& s);

/// Complex loss factor 1 + (q - i)^2 / (1 + 2 i (eps_F - omega_Sp) / Gamma)
/// multiplying pi |coupling|^2 in the broad model.
cplx broad_loss_factor(const ScenarioConfig& cfg);

/// Integrates the regime's equations over the configured window. A
/// full_oracle regime is forwarded to full_model_oracle with cfg.oracle.
TimeSeries integrate(const ScenarioConfig& cfg);

/// Discretized continuum: c1, c2 and n_states energy bins on [eps_lo, eps_hi]
/// with couplings coupling(t) g sgn sqrt(d eps).
TimeSeries full_model_oracle(const ScenarioConfig& cfg, int n_states, double eps_lo, double eps_hi);
TimeSeries full_model_oracle(const ScenarioConfig& cfg);

/// Direct trapezoidal evaluation of the narrow memory integral at each sample
/// time of `ts`, from c2 and the pump coupling on the same samples.
std::vector<cplx> memory_convolution(const ScenarioConfig& cfg, const TimeSeries& ts);

/// Final |c1|^2 only; cheaper than integrate when no series is needed.
double final_efficiency(const ScenarioConfig& cfg);

}  // namespace fstirap
