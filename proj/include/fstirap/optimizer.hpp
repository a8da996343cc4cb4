#pragma once

// Derivative-free maximization of the transfer efficiency over pulse and
// detuning parameters, and one-dimensional parameter sweeps.

#include "fstirap/dynamics.hpp"
#include "fstirap/ensemble.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fstirap {

/// Parameters the optimizer may vary. Times in s, frequencies in s^-1, the
/// pump amplitude dimensionless; t0 is the collision time.
enum class Param { omega_s, pump_amplitude, T_S, T_p, tau_S, tau_p, delta, two_photon_offset, t0 };

std::string_view param_name(Param p);
std::optional<Param> param_from_name(std::string_view name);
double get_param(const ScenarioConfig& cfg, Param p);
void set_param(ScenarioConfig& cfg, Param p, double value);

/// Setter for sweeps: every Param name plus Gamma, q, eps_F, feshbach_detuning
/// (eps_F - eps0), gamma, delta_eps, eps0 and gamma_over_delta (Gamma in units
/// of delta_eps).
void set_named(ScenarioConfig& cfg, std::string_view name, double value);
bool is_sweep_name(std::string_view name);

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

enum class Objective { final_population, ensemble_averaged_population };

struct OptimizationProblem {
  ScenarioConfig base;
  std::vector<Param> free_params;
  std::vector<Bounds> bounds;
  Objective objective = Objective::final_population;
  long budget = 2000;
  std::uint64_t seed = 1;
  std::optional<EnsembleSpec> ensemble;
  int ensemble_nodes = 8;

  void validate() const;
};

struct TracePoint {
  long index = 0;
  double value = 0.0;
  double best = 0.0;  // best value up to and including this evaluation
};

struct OptimizationResult {
  std::map<std::string, double> best_params;
  double best_value = 0.0;
  long evaluations = 0;
  std::vector<TracePoint> trace;
  std::vector<std::string> failures;
};

struct BoxOptions {
  long budget = 2000;
  std::uint64_t seed = 1;
  /// Simplex diameter (unit-cube coordinates) below which a restart happens.
  double xtol = 1e-6;
  /// Spread of simplex values below which a restart happens.
  double ftol = 1e-10;
  /// Initial simplex edge in unit-cube coordinates.
  double initial_step = 0.15;
  unsigned threads = 0;
};

struct BoxResult {
  std::vector<double> best_x;
  double best_value = 0.0;
  long evaluations = 0;
  std::vector<TracePoint> trace;
  std::vector<std::string> failures;
};

/// Maximizes f over the box [lo, hi] with bounded Nelder-Mead. The first
/// start is x0 (or the box center), later starts come from a seeded Halton
/// sequence. Exceptions thrown by f count as value 0 and are logged.
BoxResult maximize_box(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& lo, const std::vector<double>& hi,
                       std::optional<std::vector<double>> x0, const BoxOptions& opt);

/// Objective value of a configuration under the problem's objective.
double evaluate_objective(const OptimizationProblem& problem, const ScenarioConfig& cfg);

OptimizationResult optimize(const OptimizationProblem& problem);

/// Applies best_params to a copy of the problem's base configuration.
ScenarioConfig apply_params(const ScenarioConfig& base, const std::map<std::string, double>& params);

struct SweepPoint {
  double value = 0.0;
  double efficiency = 0.0;
  bool ok = true;
  std::string error;
};

std::vector<SweepPoint> sweep(const ScenarioConfig& base, std::string_view param,
                              const std::vector<double>& grid);

}  // namespace fstirap
