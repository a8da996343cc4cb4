#include "fstirap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fstirap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

struct Grid {
  int n;
  double lo, hi;
};

// Bins of width 0.1 delta / sqrt(2). Without explicit edges the window is
// eps0 +- 28 delta joined with eps_F +- 3 Gamma, unless n_states is fixed, in
// which case n_states such bins are centred on eps0 (or laid out from the
// one given edge).
Grid default_grid(const ScenarioConfig& cfg) {
  const auto& o = cfg.oracle;
  const double d = cfg.wavepacket.delta_eps;
  const double bin = 0.1 * d / std::sqrt(2.0);
  const auto count = [&](double lo, double hi) {
    return o.n_states > 0 ? o.n_states : std::max(64, static_cast<int>(std::ceil((hi - lo) / bin)));
  };
  if (o.eps_lo && o.eps_hi) return {count(*o.eps_lo, *o.eps_hi), *o.eps_lo, *o.eps_hi};
  if (o.n_states > 0) {
    const double span = o.n_states * bin;
    double lo = o.eps_lo ? *o.eps_lo : o.eps_hi ? *o.eps_hi - span : cfg.wavepacket.eps0 - 0.5 * span;
    return {o.n_states, lo, lo + span};
  }
  double lo = cfg.wavepacket.eps0 - 28.0 * d;
  double hi = cfg.wavepacket.eps0 + 28.0 * d;
  if (cfg.resonance) {
    lo = std::min(lo, cfg.resonance->eps_F - 3.0 * cfg.resonance->Gamma);
    hi = std::max(hi, cfg.resonance->eps_F + 3.0 * cfg.resonance->Gamma);
  }
  lo = o.eps_lo.value_or(lo);
  hi = o.eps_hi.value_or(hi);
  return {count(lo, hi), lo, hi};
}

struct Continuum {
  Eigen::ArrayXd detuning;  // eps_i - (omega_S - omega_p)
  Eigen::ArrayXd weight;    // g sgn sqrt(d eps)
};

}  // namespace

TimeSeries full_model_oracle(const ScenarioConfig& cfg, int n_states, double eps_lo, double eps_hi) {
  if (n_states < 64) throw std::invalid_argument("oracle.n_states: must be at least 64");
  if (!(eps_hi > eps_lo)) throw std::invalid_argument("oracle: empty energy window");
  ScenarioConfig base = cfg;
  if (base.regime == Regime::full_oracle) base.regime = base.resonance ? Regime::broad : Regime::none;
  base.validate();

  TimeSeries ts;
  const double d = cfg.wavepacket.delta_eps;
  if (cfg.wavepacket.eps0 - 6.0 * d < eps_lo || cfg.wavepacket.eps0 + 6.0 * d > eps_hi)
    ts.warnings.push_back("oracle energy window does not cover eps0 +- 6 delta_eps");

  const double bin = (eps_hi - eps_lo) / n_states;
  Continuum cont;
  cont.detuning.resize(n_states);
  cont.weight.resize(n_states);
  Vec y(n_states + 2);
  const auto [t0, t1] = cfg.window();
  const AmplitudeState init = cfg.initial.value_or(AmplitudeState{});
  y(0) = init.c1;
  y(1) = init.c2;
  const double norm = std::pow(kPi * d * d, -0.25) * std::sqrt(bin);
  const double tc = cfg.wavepacket.t0;
  for (int i = 0; i < n_states; ++i) {
    const double eps = eps_lo + (i + 0.5) * bin;
    const double u = eps - cfg.wavepacket.eps0;
    cont.detuning(i) = eps - cfg.two_photon();
    cont.weight(i) = (cfg.resonance ? signed_lineshape(*cfg.resonance, eps) : 1.0) * std::sqrt(bin);
    // s_eps(0) sqrt(d eps) propagated freely back to t_start.
    y(i + 2) = norm * std::exp(-0.5 * u * u / (d * d)) *
               std::polar(1.0, u * tc - cont.detuning(i) * t0);
  }

  const cplx loss(cfg.delta, -cfg.gamma);
  auto rhs = [&](double t, const Vec& s) -> Vec {
    const double os = cfg.stokes(t);
    const double ob = cfg.pump_coupling(t);
    Vec out(s.size());
    const auto c = s.tail(n_states).array();
    const cplx drive = ob * (cont.weight * c).sum();
    out(0) = kI * os * s(1);
    out(1) = -kI * (loss * s(1) - os * s(0) - drive);
    out.tail(n_states).array() = -kI * (cont.detuning * c - ob * cont.weight * s(1));
    return out;
  };

  OdeOptions opt;
  opt.rel_tol = cfg.integration.rel_tol;
  opt.abs_tol = cfg.integration.abs_tol;
  opt.max_step = cfg.integration.max_step > 0.0
                     ? cfg.integration.max_step
                     : 0.1 * std::min(cfg.pulses.stokes.width, cfg.pulses.pump.width);
  std::vector<double> grid(std::max(cfg.integration.samples, 2));
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = t0 + (t1 - t0) * double(i) / double(grid.size() - 1);
  grid.back() = t1;
  ts.times.reserve(grid.size());
  ts.stats = integrate_dopri5(rhs, t0, t1, y, opt, grid, [&](double t, const Vec& s) {
    const AmplitudeState a{s(0), s(1), cplx{}};
    ts.times.push_back(t);
    ts.states.push_back(a);
    ts.pulses_sampled.push_back({cfg.stokes(t), cfg.pump_display(t)});
    ts.populations.emplace_back(a.pop1(), a.pop2());
    ts.continuum_population.push_back(s.tail(n_states).squaredNorm());
  });
  return ts;
}

TimeSeries full_model_oracle(const ScenarioConfig& cfg) {
  const auto [n, lo, hi] = default_grid(cfg);
  TimeSeries ts = full_model_oracle(cfg, n, lo, hi);
  if (cfg.oracle.check_resolution) {
    ScenarioConfig coarse = cfg;
    coarse.integration.samples = 2;
    const double fine = full_model_oracle(coarse, 2 * n, lo, hi).efficiency();
    const double diff = std::abs(fine - ts.efficiency());
    std::ostringstream msg;
    msg << "oracle resolution check: |c1|^2 = " << ts.efficiency() << " with " << n
        << " bins, " << fine << " with " << 2 * n;
    if (diff > 1e-3) msg << " (under-resolved)";
    ts.warnings.push_back(msg.str());
  }
  return ts;
}

}  // namespace fstirap
