#include "fstirap/optimizer.hpp"

#include "fstirap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fstirap {

namespace {

constexpr Param kAllParams[] = {Param::omega_s, Param::pump_amplitude, Param::T_S,
                                Param::T_p,     Param::tau_S,          Param::tau_p,
                                Param::delta,   Param::two_photon_offset, Param::t0};

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

double radical_inverse(unsigned long k, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (k > 0) {
    r += f * double(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

// Halton points with a seeded Cranley-Patterson rotation.
class Halton {
 public:
  Halton(std::size_t dim, std::uint64_t seed) : shift_(dim) {
    if (dim > std::size(kPrimes)) throw std::invalid_argument("Halton: too many dimensions");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& s : shift_) s = u(rng);
  }
  std::vector<double> next() {
    ++k_;
    std::vector<double> x(shift_.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double v = radical_inverse(k_, kPrimes[d]) + shift_[d];
      x[d] = v - std::floor(v);
    }
    return x;
  }

 private:
  std::vector<double> shift_;
  unsigned long k_ = 0;
};

class BoxSearch {
 public:
  BoxSearch(const std::function<double(const std::vector<double>&)>& f, std::vector<double> lo,
            std::vector<double> hi, const BoxOptions& opt)
      : f_(f), lo_(std::move(lo)), hi_(std::move(hi)), opt_(opt) {}

  long remaining() const { return opt_.budget - result_.evaluations; }

  // Evaluates unit-cube points in parallel; values are recorded in input
  // order so the trace does not depend on scheduling.
  std::vector<double> evaluate(const std::vector<std::vector<double>>& pts) {
    struct Outcome {
      double value = 0.0;
      std::string error;
    };
    auto outcomes = parallel_map(
        pts.size(),
        [&](std::size_t i) {
          Outcome o;
          try {
            o.value = f_(to_box(pts[i]));
            if (!std::isfinite(o.value)) {
              o.error = "non-finite objective";
              o.value = 0.0;
            }
          } catch (const std::exception& e) {
            o.error = e.what();
          }
          return o;
        },
        opt_.threads);
    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const long idx = result_.evaluations++;
      vals[i] = outcomes[i].value;
      if (!outcomes[i].error.empty()) {
        std::ostringstream msg;
        msg << "evaluation " << idx << ": " << outcomes[i].error;
        result_.failures.push_back(msg.str());
      }
      if (result_.trace.empty() || vals[i] > result_.best_value) {
        result_.best_value = vals[i];
        result_.best_x = to_box(pts[i]);
        best_unit_ = pts[i];
      }
      result_.trace.push_back({idx, vals[i], result_.best_value});
    }
    return vals;
  }

  double evaluate_one(const std::vector<double>& u) { return evaluate({u})[0]; }

  // One Nelder-Mead run (maximizing) from unit-cube point x0; returns the best
  // value it found.
  double nelder_mead(const std::vector<double>& x0, double step) {
    const std::size_t n = x0.size();
    if (remaining() < static_cast<long>(n + 1)) return result_.best_value;
    std::vector<std::vector<double>> simplex{x0};
    for (std::size_t i = 0; i < n; ++i) {
      auto v = x0;
      v[i] = (v[i] + step <= 1.0) ? v[i] + step : v[i] - step;
      simplex.push_back(v);
    }
    auto values = evaluate(simplex);
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    std::vector<std::size_t> order(n + 1);
    while (remaining() > 0) {
      std::iota(order.begin(), order.end(), 0);
      // Descending by value, ties by position so the ordering is stable.
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
      const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
      double diam = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t d = 0; d < n; ++d)
          diam = std::max(diam, std::abs(simplex[i][d] - simplex[best][d]));
      if (diam < opt_.xtol || values[best] - values[worst] < opt_.ftol) break;

      std::vector<double> centroid(n, 0.0);
      for (std::size_t i = 0; i <= n; ++i)
        if (i != worst)
          for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / double(n);
      auto along = [&](double coef) {
        std::vector<double> p(n);
        for (std::size_t d = 0; d < n; ++d)
          p[d] = std::clamp(centroid[d] + coef * (centroid[d] - simplex[worst][d]), 0.0, 1.0);
        return p;
      };
      auto xr = along(alpha);
      const double fr = evaluate_one(xr);
      if (fr > values[best]) {
        if (remaining() <= 0) {
          simplex[worst] = xr;
          values[worst] = fr;
          break;
        }
        auto xe = along(gamma);
        const double fe = evaluate_one(xe);
        if (fe > fr) {
          simplex[worst] = xe;
          values[worst] = fe;
        } else {
          simplex[worst] = xr;
          values[worst] = fr;
        }
        continue;
      }
      if (fr > values[second]) {
        simplex[worst] = xr;
        values[worst] = fr;
        continue;
      }
      if (remaining() <= 0) break;
      const bool outside = fr > values[worst];
      auto xc = along(outside ? rho : -rho);
      const double fc = evaluate_one(xc);
      if (fc > std::max(outside ? fr : values[worst], values[worst])) {
        simplex[worst] = xc;
        values[worst] = fc;
        continue;
      }
      // Shrink toward the best vertex.
      std::vector<std::vector<double>> shrunk;
      std::vector<std::size_t> which;
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == best) continue;
        for (std::size_t d = 0; d < n; ++d)
          simplex[i][d] = simplex[best][d] + sigma * (simplex[i][d] - simplex[best][d]);
        shrunk.push_back(simplex[i]);
        which.push_back(i);
      }
      if (remaining() < static_cast<long>(shrunk.size())) break;
      const auto sv = evaluate(shrunk);
      for (std::size_t j = 0; j < which.size(); ++j) values[which[j]] = sv[j];
    }
    return *std::max_element(values.begin(), values.end());
  }

  BoxResult run(const std::optional<std::vector<double>>& x0) {
    const std::size_t n = lo_.size();
    std::vector<double> start(n, 0.5);
    if (x0) {
      for (std::size_t d = 0; d < n; ++d)
        start[d] = std::clamp(((*x0)[d] - lo_[d]) / (hi_[d] - lo_[d]), 0.0, 1.0);
    }
    Halton halton(n, opt_.seed);
    double step = opt_.initial_step;
    double previous_best = -std::numeric_limits<double>::infinity();
    while (remaining() > static_cast<long>(n + 1)) {
      nelder_mead(start, step);
      // Re-expand around an improved optimum once, otherwise jump to a new
      // quasi-random start.
      if (result_.best_value > previous_best + 10.0 * opt_.ftol) {
        previous_best = result_.best_value;
        start = best_unit_;
        step = 0.5 * opt_.initial_step;
      } else {
        start = halton.next();
        step = opt_.initial_step;
      }
    }
    return result_;
  }

 private:
  std::vector<double> to_box(const std::vector<double>& u) const {
    std::vector<double> x(u.size());
    for (std::size_t d = 0; d < u.size(); ++d) x[d] = lo_[d] + u[d] * (hi_[d] - lo_[d]);
    return x;
  }

  const std::function<double(const std::vector<double>&)>& f_;
  std::vector<double> lo_, hi_;
  BoxOptions opt_;
  BoxResult result_;
  std::vector<double> best_unit_;
};

}  // namespace

std::string_view param_name(Param p) {
  switch (p) {
    case Param::omega_s: return "omega_s";
    case Param::pump_amplitude: return "pump_amplitude";
    case Param::T_S: return "T_S";
    case Param::T_p: return "T_p";
    case Param::tau_S: return "tau_S";
    case Param::tau_p: return "tau_p";
    case Param::delta: return "delta";
    case Param::two_photon_offset: return "two_photon_offset";
    case Param::t0: return "t0";
  }
  return "?";
}

std::optional<Param> param_from_name(std::string_view name) {
  for (Param p : kAllParams)
    if (param_name(p) == name) return p;
  return std::nullopt;
}

double get_param(const ScenarioConfig& cfg, Param p) {
  switch (p) {
    case Param::omega_s: return cfg.pulses.stokes.peak;
    case Param::pump_amplitude: return cfg.pulses.pump.peak;
    case Param::T_S: return cfg.pulses.stokes.width;
    case Param::T_p: return cfg.pulses.pump.width;
    case Param::tau_S: return cfg.pulses.stokes.center_offset;
    case Param::tau_p: return cfg.pulses.pump.center_offset;
    case Param::delta: return cfg.delta;
    case Param::two_photon_offset: return cfg.two_photon_offset;
    case Param::t0: return cfg.wavepacket.t0;
  }
  throw std::invalid_argument("unknown parameter");
}

void set_param(ScenarioConfig& cfg, Param p, double v) {
  switch (p) {
    case Param::omega_s: cfg.pulses.stokes.peak = v; return;
    case Param::pump_amplitude: cfg.pulses.pump.peak = v; return;
    case Param::T_S: cfg.pulses.stokes.width = v; return;
    case Param::T_p: cfg.pulses.pump.width = v; return;
    case Param::tau_S: cfg.pulses.stokes.center_offset = v; return;
    case Param::tau_p: cfg.pulses.pump.center_offset = v; return;
    case Param::delta: cfg.delta = v; return;
    case Param::two_photon_offset: cfg.two_photon_offset = v; return;
    case Param::t0: cfg.wavepacket.t0 = v; return;
  }
  throw std::invalid_argument("unknown parameter");
}

namespace {
constexpr std::string_view kExtraSweepNames[] = {
    "Gamma", "q", "eps_F", "feshbach_detuning", "gamma", "delta_eps", "eps0", "gamma_over_delta"};

FanoResonance<double>& need_resonance(ScenarioConfig& cfg, std::string_view name) {
  if (!cfg.resonance)
    throw std::invalid_argument(std::string(name) + ": scenario has no resonance");
  return *cfg.resonance;
}
}  // namespace

bool is_sweep_name(std::string_view name) {
  if (param_from_name(name)) return true;
  return std::find(std::begin(kExtraSweepNames), std::end(kExtraSweepNames), name) !=
         std::end(kExtraSweepNames);
}

void set_named(ScenarioConfig& cfg, std::string_view name, double v) {
  if (auto p = param_from_name(name)) {
    set_param(cfg, *p, v);
  } else if (name == "Gamma") {
    need_resonance(cfg, name).Gamma = v;
  } else if (name == "gamma_over_delta") {
    need_resonance(cfg, name).Gamma = v * cfg.wavepacket.delta_eps;
  } else if (name == "q") {
    need_resonance(cfg, name).q = v;
  } else if (name == "eps_F") {
    need_resonance(cfg, name).eps_F = v;
  } else if (name == "feshbach_detuning") {
    need_resonance(cfg, name).eps_F = cfg.wavepacket.eps0 + v;
  } else if (name == "gamma") {
    cfg.gamma = v;
  } else if (name == "delta_eps") {
    cfg.wavepacket.delta_eps = v;
  } else if (name == "eps0") {
    cfg.wavepacket.eps0 = v;
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + std::string(name));
  }
}

void OptimizationProblem::validate() const {
  if (free_params.empty()) throw std::invalid_argument("optimize.free_params: must not be empty");
  if (bounds.size() != free_params.size())
    throw std::invalid_argument("optimize.bounds: one interval per free parameter required");
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const auto& b = bounds[i];
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi))
      throw std::invalid_argument("optimize.bounds." + std::string(param_name(free_params[i])) +
                                  ": need finite lo < hi");
  }
  const long needed = 50L * static_cast<long>(free_params.size());
  if (budget < needed)
    throw std::invalid_argument("optimize.budget: must be at least " + std::to_string(needed));
  if (objective == Objective::ensemble_averaged_population && !ensemble)
    throw std::invalid_argument("optimize.objective: ensemble averaging needs an ensemble block");
}

double evaluate_objective(const OptimizationProblem& problem, const ScenarioConfig& cfg) {
  if (problem.objective == Objective::ensemble_averaged_population)
    return average_efficiency(*problem.ensemble, cfg, problem.ensemble_nodes, false).p_avg;
  return final_efficiency(cfg);
}

ScenarioConfig apply_params(const ScenarioConfig& base, const std::map<std::string, double>& params) {
  ScenarioConfig cfg = base;
  for (const auto& [name, value] : params) set_named(cfg, name, value);
  return cfg;
}

BoxResult maximize_box(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& lo, const std::vector<double>& hi,
                       std::optional<std::vector<double>> x0, const BoxOptions& opt) {
  if (lo.empty() || lo.size() != hi.size())
    throw std::invalid_argument("maximize_box: bounds must be non-empty and of equal length");
  for (std::size_t d = 0; d < lo.size(); ++d)
    if (!(lo[d] < hi[d])) throw std::invalid_argument("maximize_box: need lo < hi");
  if (x0 && x0->size() != lo.size()) throw std::invalid_argument("maximize_box: x0 has wrong size");
  return BoxSearch(f, lo, hi, opt).run(x0);
}

OptimizationResult optimize(const OptimizationProblem& problem) {
  problem.validate();
  const std::size_t n = problem.free_params.size();
  std::vector<double> lo(n), hi(n), x0(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = problem.bounds[i].lo;
    hi[i] = problem.bounds[i].hi;
    x0[i] = get_param(problem.base, problem.free_params[i]);
  }
  std::function<double(const std::vector<double>&)> f = [&](const std::vector<double>& x) {
    ScenarioConfig cfg = problem.base;
    for (std::size_t i = 0; i < n; ++i) set_param(cfg, problem.free_params[i], x[i]);
    return evaluate_objective(problem, cfg);
  };
  BoxOptions opt;
  opt.budget = problem.budget;
  opt.seed = problem.seed;
  // Nested parallelism is avoided: ensemble objectives parallelize inside.
  if (problem.objective == Objective::ensemble_averaged_population) opt.threads = 1;
  auto box = maximize_box(f, lo, hi, x0, opt);

  OptimizationResult out;
  out.best_value = box.best_value;
  out.evaluations = box.evaluations;
  out.trace = std::move(box.trace);
  out.failures = std::move(box.failures);
  for (std::size_t i = 0; i < n; ++i)
    out.best_params[std::string(param_name(problem.free_params[i]))] = box.best_x[i];
  return out;
}

std::vector<SweepPoint> sweep(const ScenarioConfig& base, std::string_view param,
                              const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("sweep: grid must not be empty");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("sweep: grid must be sorted");
  if (!is_sweep_name(param)) throw std::invalid_argument("sweep: unknown parameter " + std::string(param));
  return parallel_map(grid.size(), [&](std::size_t i) {
    SweepPoint pt;
    pt.value = grid[i];
    try {
      ScenarioConfig cfg = base;
      set_named(cfg, param, grid[i]);
      pt.efficiency = final_efficiency(cfg);
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
    return pt;
  });
}

}  // namespace fstirap
