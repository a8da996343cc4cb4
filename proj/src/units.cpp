#include "fstirap/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fstirap {

namespace {

using C = PhysConstants;

constexpr double kErgPerJoule = 1e7;
constexpr double kWattPerErgPerSecond = 1e-7;
// 1 V/cm = 1/299.792458 statV/cm
constexpr double kStatVoltPerVolt = 1.0 / 299.792458;

double scale(Dimension kind) {
  switch (kind) {
    case Dimension::energy:
      return 1.0 / C::hbar;
    case Dimension::angular_frequency:
      return 1.0;
    case Dimension::temperature_energy:
      return kMicroKelvin;
    case Dimension::field:
      return kStatVoltPerVolt;
    case Dimension::intensity:
      return 1.0 / kWattPerErgPerSecond;
    case Dimension::dipole:
      return C::debye;
    case Dimension::continuum_dipole:
      // D uK^{-1/2} -> esu cm erg^{-1/2}
      return C::debye / std::sqrt(C::kB * 1e-6 * kErgPerJoule);
  }
  throw std::logic_error("unknown dimension");
}

double energy_erg(double internal) { return internal * C::hbar_cgs; }

}  // namespace

double to_internal(const UnitValue& v) { return v.magnitude * scale(v.kind); }

UnitValue from_internal(double internal, Dimension kind) {
  return UnitValue{internal / scale(kind), kind};
}

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::energy: return "energy";
    case Dimension::angular_frequency: return "angular-frequency";
    case Dimension::temperature_energy: return "temperature-energy";
    case Dimension::field: return "field";
    case Dimension::intensity: return "intensity";
    case Dimension::dipole: return "dipole";
    case Dimension::continuum_dipole: return "continuum-dipole";
  }
  return "?";
}

double energy_from_temperature(double T_uK) {
  if (!(T_uK >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
  return T_uK * kMicroKelvin;
}

double stokes_intensity(double omega_S0, double mu21_debye) {
  if (!(mu21_debye > 0.0)) throw std::invalid_argument("stokes_intensity: dipole must be positive");
  if (omega_S0 < 0.0) throw std::invalid_argument("stokes_intensity: negative Rabi frequency");
  const double mu = mu21_debye * C::debye;
  const double field_energy = omega_S0 * C::hbar_cgs;
  const double cgs = C::c * field_energy * field_energy / (8.0 * C::pi * mu * mu);
  return cgs * kWattPerErgPerSecond;
}

double rabi_from_intensity(double intensity_W_cm2, double mu_debye) {
  if (!(mu_debye > 0.0)) throw std::invalid_argument("rabi_from_intensity: dipole must be positive");
  if (intensity_W_cm2 < 0.0) throw std::invalid_argument("rabi_from_intensity: negative intensity");
  const double field = std::sqrt(8.0 * C::pi * intensity_W_cm2 / kWattPerErgPerSecond / C::c);
  return mu_debye * C::debye * field / C::hbar_cgs;
}

double continuum_dipole_from_bound(double mu2b_debye, double q, double Gamma) {
  if (!(mu2b_debye > 0.0) || !(Gamma > 0.0) || q == 0.0)
    throw std::invalid_argument("continuum_dipole_from_bound: need mu2b > 0, Gamma > 0, q != 0");
  return std::sqrt(2.0) * mu2b_debye * C::debye / (std::abs(q) * std::sqrt(C::pi * energy_erg(Gamma)));
}

double pump_intensity_broad(double pump_amplitude, double q, double delta_eps, double Gamma,
                            double mu2b_debye) {
  if (!(mu2b_debye > 0.0)) throw std::invalid_argument("pump_intensity_broad: dipole must be positive");
  if (!(delta_eps > 0.0) || !(Gamma > 0.0))
    throw std::invalid_argument("pump_intensity_broad: widths must be positive");
  const double mu = mu2b_debye * C::debye;
  const double cgs = q * q * C::c * pump_amplitude * pump_amplitude * energy_erg(delta_eps) *
                     energy_erg(Gamma) / (64.0 * std::sqrt(C::pi) * mu * mu);
  return cgs * kWattPerErgPerSecond;
}

double pump_intensity_continuum(double pump_amplitude, double delta_eps, double mu2eps_cgs) {
  if (!(mu2eps_cgs > 0.0)) throw std::invalid_argument("pump_intensity_continuum: dipole must be positive");
  if (!(delta_eps > 0.0)) throw std::invalid_argument("pump_intensity_continuum: delta_eps must be positive");
  const double cgs = C::c * pump_amplitude * pump_amplitude * energy_erg(delta_eps) /
                     (32.0 * std::pow(C::pi, 1.5) * mu2eps_cgs * mu2eps_cgs);
  return cgs * kWattPerErgPerSecond;
}

double pump_amplitude_from_intensity(double intensity_W_cm2, double q, double delta_eps,
                                     double Gamma, double mu2b_debye) {
  if (intensity_W_cm2 < 0.0) throw std::invalid_argument("negative intensity");
  const double unit = pump_intensity_broad(1.0, q, delta_eps, Gamma, mu2b_debye);
  return std::sqrt(intensity_W_cm2 / unit);
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::none: return "none";
    case Regime::broad: return "broad";
    case Regime::narrow: return "narrow";
    case Regime::full_oracle: return "full_oracle";
  }
  return "?";
}

double pump_coupling_from_amplitude(double pump_amplitude, double delta_eps) {
  return pump_amplitude * std::sqrt(delta_eps) / std::pow(16.0 * C::pi, 0.25);
}

double display_pump_units(double coupling, Regime regime, double delta_eps, double Gamma) {
  switch (regime) {
    case Regime::none:
    case Regime::broad:
    case Regime::full_oracle:
      if (!(delta_eps > 0.0)) throw std::invalid_argument("display_pump_units: delta_eps <= 0");
      return std::pow(16.0 * C::pi, 0.25) * coupling / std::sqrt(delta_eps);
    case Regime::narrow:
      if (!(Gamma > 0.0)) throw std::invalid_argument("display_pump_units: Gamma <= 0");
      return std::sqrt(2.0 * C::pi / Gamma) * coupling;
  }
  throw std::invalid_argument("display_pump_units: unknown regime");
}

}  // namespace fstirap
