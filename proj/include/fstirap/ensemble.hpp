#pragma once

// Maxwell-Boltzmann averaging of the pair transfer probability and the
// resulting molecule production estimates.

#include "fstirap/dynamics.hpp"
#include "fstirap/quadrature.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace fstirap {

struct EnsembleSpec {
  double temperature = 0.0;   // K
  double density = 0.0;       // cm^-3
  double reduced_mass = 0.0;  // kg
  double trap_volume = 0.0;   // cm^3

  void validate() const;
  /// k_B T as an angular frequency.
  double kT() const;
  /// sqrt(3/2) k_B T.
  double delta_eps() const { return std::sqrt(1.5) * kT(); }
  /// (3/2) k_B T.
  double mean_energy() const { return 1.5 * kT(); }
};

/// (2 / sqrt(pi)) (kT)^{-3/2} int_0^inf e^{-e/kT} sqrt(e) P(e) de with an
/// n-point generalized Gauss-Laguerre rule (alpha = 1/2); weights are
/// normalized to sum to one so constant P is reproduced exactly.
template <typename F>
double thermal_average(F&& P, double kT, int n_nodes) {
  const auto rule = gauss_laguerre<double>(n_nodes, 0.5);
  double wsum = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * P(rule.nodes[i] * kT);
    wsum += rule.weights[i];
  }
  return acc / wsum;
}

/// Same average by the trapezoid rule after e = kT u^2, on u in [0, u_max].
template <typename F>
double thermal_average_trapezoid(F&& P, double kT, int n_points, double u_max = 6.0) {
  const double h = u_max / n_points;
  double acc = 0.0;
  for (int i = 1; i <= n_points; ++i) {
    const double u = h * i;
    const double w = (i == n_points ? 0.5 : 1.0) * u * u * std::exp(-u * u);
    acc += w * P(kT * u * u);
  }
  // int_0^inf u^2 e^{-u^2} du = sqrt(pi) / 4
  return acc * h * 4.0 / std::sqrt(3.14159265358979323846);
}

struct AverageResult {
  double p_avg = 0.0;
  /// Estimate with twice the nodes (NaN when not computed).
  double p_avg_refined = std::nan("");
  bool converged = true;
  int n_nodes = 0;
  std::vector<double> energies;  // node energies (s^-1)
  std::vector<double> values;    // P at the nodes
  std::vector<std::string> warnings;
};

/// P(eps0) at a given mean collision energy: the wavepacket moves to eps0
/// while the lasers (omega_S - omega_p) and the resonance stay fixed.
ScenarioConfig at_collision_energy(const ScenarioConfig& base, double eps0);

/// Thermal average of the final |c1|^2. With check_convergence the 2n-node
/// estimate is computed as well and converged = |difference| < 1e-3.
AverageResult average_efficiency(const EnsembleSpec& spec, const ScenarioConfig& cfg, int n_nodes,
                                 bool check_convergence = true);

/// f = P_avg rho sqrt(2 pi) tau_tr hbar^2 / (4 mu^{3/2} sqrt(k_B T)).
double fraction_per_pulse_pair(const EnsembleSpec& spec, double p_avg, double tau_tr);

/// f(eps) per unit energy (J^-1) for transfer probability p at energy eps (J);
/// integrates to fraction_per_pulse_pair when p is constant.
double fraction_spectral_density(const EnsembleSpec& spec, double p, double tau_tr, double eps_J);

struct PulseTrainEstimate {
  long n_pairs = 0;
  double total_time = 0.0;       // s
  double production_rate = 0.0;  // molecules / s
};

PulseTrainEstimate pulse_train_estimate(const EnsembleSpec& spec, double f, double cycle_time,
                                        double residual = 1e-2);

}  // namespace fstirap
