#include "fstirap/ensemble.hpp"

#include "fstirap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fstirap {

namespace {

using C = PhysConstants;

constexpr double kCm3PerM3 = 1e6;  // cm^-3 -> m^-3

std::vector<double> node_values(const ScenarioConfig& cfg, const std::vector<double>& energies) {
  return parallel_map(energies.size(),
                      [&](std::size_t i) { return final_efficiency(at_collision_energy(cfg, energies[i])); });
}

}  // namespace

void EnsembleSpec::validate() const {
  if (!(temperature > 0.0)) throw std::invalid_argument("ensemble.temperature: must be positive");
  if (!(density > 0.0)) throw std::invalid_argument("ensemble.density: must be positive");
  if (!(reduced_mass > 0.0)) throw std::invalid_argument("ensemble.reduced_mass: must be positive");
  if (!(trap_volume > 0.0)) throw std::invalid_argument("ensemble.trap_volume: must be positive");
}

double EnsembleSpec::kT() const { return C::kB * temperature / C::hbar; }

ScenarioConfig at_collision_energy(const ScenarioConfig& base, double eps0) {
  ScenarioConfig cfg = base;
  const double omega_sp = base.two_photon();
  cfg.wavepacket.eps0 = eps0;
  cfg.two_photon_offset = eps0 - omega_sp;
  return cfg;
}

AverageResult average_efficiency(const EnsembleSpec& spec, const ScenarioConfig& cfg, int n_nodes,
                                 bool check_convergence) {
  spec.validate();
  if (n_nodes < 8) throw std::invalid_argument("average_efficiency: n_nodes must be at least 8");
  AverageResult out;
  out.n_nodes = n_nodes;
  const double kT = spec.kT();
  const double mismatch = std::abs(cfg.wavepacket.delta_eps / spec.delta_eps() - 1.0);
  if (mismatch > 0.01) {
    std::ostringstream msg;
    msg << "wavepacket delta_eps differs from sqrt(3/2) k_B T by " << 100.0 * mismatch << "%";
    out.warnings.push_back(msg.str());
  }

  auto run = [&](int n, std::vector<double>* energies, std::vector<double>* values) {
    const auto rule = gauss_laguerre<double>(n, 0.5);
    std::vector<double> e(rule.nodes.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = rule.nodes[i] * kT;
    const auto p = node_values(cfg, e);
    double acc = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += rule.weights[i] * p[i];
      wsum += rule.weights[i];
    }
    if (energies) *energies = e;
    if (values) *values = p;
    return acc / wsum;
  };

  out.p_avg = run(n_nodes, &out.energies, &out.values);
  if (check_convergence) {
    out.p_avg_refined = run(2 * n_nodes, nullptr, nullptr);
    out.converged = std::abs(out.p_avg_refined - out.p_avg) < 1e-3;
    if (!out.converged) {
      std::ostringstream msg;
      msg << "thermal quadrature not converged: " << out.p_avg << " (" << n_nodes << " nodes) vs "
          << out.p_avg_refined << " (" << 2 * n_nodes << " nodes)";
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

double fraction_per_pulse_pair(const EnsembleSpec& spec, double p_avg, double tau_tr) {
  spec.validate();
  if (!(p_avg >= 0.0 && p_avg <= 1.0)) throw std::invalid_argument("p_avg must lie in [0, 1]");
  if (!(tau_tr > 0.0)) throw std::invalid_argument("tau_tr must be positive");
  const double rho = spec.density * kCm3PerM3;
  const double kT = C::kB * spec.temperature;
  return p_avg * rho * std::sqrt(2.0 * std::numbers::pi) * tau_tr * C::hbar * C::hbar /
         (4.0 * std::pow(spec.reduced_mass, 1.5) * std::sqrt(kT));
}

double fraction_spectral_density(const EnsembleSpec& spec, double p, double tau_tr, double eps_J) {
  spec.validate();
  if (eps_J < 0.0) return 0.0;
  const double kT = C::kB * spec.temperature;
  return fraction_per_pulse_pair(spec, p, tau_tr) * std::exp(-eps_J / kT) / kT;
}

PulseTrainEstimate pulse_train_estimate(const EnsembleSpec& spec, double f, double cycle_time,
                                        double residual) {
  spec.validate();
  if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("pulse_train_estimate: f must lie in (0, 1)");
  if (!(cycle_time > 0.0)) throw std::invalid_argument("pulse_train_estimate: cycle_time must be positive");
  if (!(residual > 0.0 && residual < 1.0))
    throw std::invalid_argument("pulse_train_estimate: residual must lie in (0, 1)");
  PulseTrainEstimate out;
  out.n_pairs = static_cast<long>(std::ceil(std::log(residual) / std::log1p(-f)));
  out.total_time = double(out.n_pairs) * cycle_time;
  out.production_rate = spec.density * spec.trap_volume * (1.0 - residual) / (2.0 * out.total_time);
  return out;
}

}  // namespace fstirap
