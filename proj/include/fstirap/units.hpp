#pragma once

// Physical constants and the conversions between laboratory units and the
// internal unit system.
//
// Internal units: time in seconds, every energy stored as an angular
// frequency (E / hbar, s^-1). Continuum-normalized quantities carry an extra
// (s^-1)^{-1/2}, so a continuum Rabi frequency is in s^{-1/2}.

#include <string_view>

namespace fstirap {

struct PhysConstants {
  static constexpr double hbar = 1.054571817e-34;      // J s
  static constexpr double kB = 1.380649e-23;           // J / K
  static constexpr double c = 2.99792458e10;           // cm / s
  static constexpr double debye = 1.0e-18;             // esu cm
  static constexpr double hbar_cgs = 1.054571817e-27;  // erg s
  static constexpr double amu = 1.66053906660e-27;     // kg
  static constexpr double pi = 3.14159265358979323846;
};

/// Angular frequency (s^-1) corresponding to 1 microkelvin.
inline constexpr double kMicroKelvin = PhysConstants::kB * 1e-6 / PhysConstants::hbar;
inline constexpr double kMicrosecond = 1e-6;

/// Magnetic-width convention used for resonance widths quoted in mG:
/// 7.8 mG corresponds to 1 uK.
inline constexpr double kMicroKelvinPerMilliGauss = 1.0 / 7.8;

enum class Dimension {
  energy,              // external: J
  angular_frequency,   // external: s^-1
  temperature_energy,  // external: uK
  field,               // external: V/cm
  intensity,           // external: W/cm^2
  dipole,              // external: D
  continuum_dipole,    // external: D uK^{-1/2}
};

struct UnitValue {
  double magnitude = 0.0;
  Dimension kind = Dimension::energy;
};

/// Converts an externally-denominated value into the internal unit system.
/// energy/temperature-energy -> s^-1, field -> statV/cm, intensity ->
/// erg s^-1 cm^-2, dipole -> esu cm, continuum dipole -> esu cm erg^{-1/2}.
double to_internal(const UnitValue& v);
UnitValue from_internal(double internal, Dimension kind);

std::string_view dimension_name(Dimension d);

/// kB * T for T given in microkelvin, as an angular frequency.
double energy_from_temperature(double T_uK);

/// Peak Stokes intensity in W/cm^2, I = c (Omega hbar)^2 / (8 pi mu21^2), cgs.
/// omega_S0 in s^-1, mu21 in Debye.
double stokes_intensity(double omega_S0, double mu21_debye);

/// Rabi frequency mu E / hbar (s^-1) of a field of the given peak intensity;
/// inverse of stokes_intensity.
double rabi_from_intensity(double intensity_W_cm2, double mu_debye);

/// Continuum-bound dipole implied by the bound-bound one,
/// mu_2eps = sqrt(2) mu_2b / (q sqrt(pi Gamma)). Dipole in esu cm, Gamma in
/// s^-1 (converted to erg internally); result in esu cm erg^{-1/2}.
double continuum_dipole_from_bound(double mu2b_debye, double q, double Gamma);

/// Peak pump intensity in W/cm^2 for a dimensionless pump amplitude,
/// I_p = q^2 c P^2 delta_eps Gamma / (64 sqrt(pi) mu_2b^2).
/// delta_eps and Gamma are internal (s^-1).
double pump_intensity_broad(double pump_amplitude, double q, double delta_eps, double Gamma,
                            double mu2b_debye);

/// Peak pump intensity in W/cm^2 from the continuum-bound dipole directly,
/// I_p = c P^2 delta_eps / (32 pi^{3/2} mu_2eps^2); mu_2eps in esu cm erg^{-1/2}.
/// Equals pump_intensity_broad when mu_2eps comes from continuum_dipole_from_bound.
double pump_intensity_continuum(double pump_amplitude, double delta_eps, double mu2eps_cgs);

/// Inverse of pump_intensity_broad.
double pump_amplitude_from_intensity(double intensity_W_cm2, double q, double delta_eps,
                                     double Gamma, double mu2b_debye);

enum class Regime { none, broad, narrow, full_oracle };

std::string_view regime_name(Regime r);

/// Continuum-normalized pump Rabi frequency mu_2eps E_p / hbar (s^{-1/2}) for
/// a dimensionless pump amplitude. The amplitude is defined so that
/// P = (16 pi)^{1/4} mu_2eps E_p / sqrt(delta_eps).
double pump_coupling_from_amplitude(double pump_amplitude, double delta_eps);

/// Dimensionless pump amplitude for plotting. `coupling` is mu_2eps E_p / hbar
/// in s^{-1/2}. broad/none: (16 pi)^{1/4} coupling / sqrt(delta_eps);
/// narrow: (2 pi / Gamma)^{1/2} coupling.
double display_pump_units(double coupling, Regime regime, double delta_eps, double Gamma);

}  // namespace fstirap
