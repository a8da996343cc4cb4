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

StateVector to_vector(const AmplitudeState& s) { return StateVector(s.c1, s.c2, s.mem); }
AmplitudeState to_state(const StateVector& v) { return AmplitudeState{v(0), v(1), v(2)}; }

[[noreturn]] void bad_field(const std::string& path, const std::string& why) {
  throw std::invalid_argument(path + ": " + why);
}

// Normalized source (unit pump coupling, carrier removed) sampled on a
// uniform grid and interpolated with Catmull-Rom cubics.
class SourceTable {
 public:
  // The source jumps at the collision time, so the table is split there and
  // each side is sampled up to (not across) the jump.
  SourceTable(const ScenarioConfig& cfg, double t0, double t1) {
    const double d = cfg.wavepacket.delta_eps;
    double scale = 1.0 / d;
    if (cfg.resonance) {
      const double detune = std::abs(cfg.resonance->eps_F - cfg.wavepacket.eps0);
      if (detune > 0.0) scale = std::min(scale, 1.0 / detune);
    }
    const double h_target = 0.05 * scale;
    SourceParams p = cfg.source_params(t0);
    p.pump_coupling = 1.0;
    p.two_photon = p.wavepacket.eps0;  // carrier handled outside
    SourceQuadratureOptions opt;
    opt.rel_tol = 1e-9;
    const double tc = cfg.wavepacket.t0;
    auto build = [&](double a, double b, Segment& seg) {
      const auto n = static_cast<long>(std::clamp(std::ceil((b - a) / h_target), 32.0, 400000.0));
      seg.t0 = a;
      seg.h = (b - a) / double(n);
      seg.values.resize(n + 1);
      const double nudge = 1e-9 * seg.h;
      for (long i = 0; i <= n; ++i) {
        double t = a + seg.h * double(i);
        if (i == 0) t += nudge;
        if (i == n) t -= nudge;
        const auto r = source_general_quadrature(p, t, opt);
        if (!r.converged) converged_ = false;
        seg.values[i] = r.value;
      }
    };
    split_ = tc > t0 && tc < t1;
    if (split_) {
      tc_ = tc;
      build(t0, tc, left_);
      build(tc, t1, right_);
    } else {
      build(t0, t1, right_);
    }
  }

  cplx operator()(double t) const { return split_ && t < tc_ ? left_(t) : right_(t); }

  bool converged() const { return converged_; }

 private:
  struct Segment {
    double t0 = 0.0;
    double h = 1.0;
    std::vector<cplx> values;

    // Catmull-Rom interpolation, one-sided at the ends.
    cplx operator()(double t) const {
      const long n = static_cast<long>(values.size()) - 1;
      const double x = (t - t0) / h;
      long i = static_cast<long>(std::floor(x));
      i = std::clamp(i, 0L, n - 1);
      const double s = x - double(i);
      const cplx p1 = values[i], p2 = values[i + 1];
      const cplx p0 = i > 0 ? values[i - 1] : 2.0 * p1 - p2;
      const cplx p3 = i + 2 <= n ? values[i + 2] : 2.0 * p2 - p1;
      const cplx m1 = 0.5 * (p2 - p0);
      const cplx m2 = 0.5 * (p3 - p1);
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * p1 + (s3 - 2 * s2 + s) * m1 + (-2 * s3 + 3 * s2) * p2 + (s3 - s2) * m2;
    }
  };

  bool split_ = false;
  double tc_ = 0.0;
  Segment left_, right_;
  bool converged_ = true;
};

class ReducedModel {
 public:
  explicit ReducedModel(const ScenarioConfig& cfg, std::shared_ptr<const SourceTable> table = {})
      : cfg_(cfg), table_(std::move(table)) {
    if (cfg.regime == Regime::broad || cfg.regime == Regime::narrow) {
      if (!cfg.resonance) throw std::invalid_argument("resonance: required for this regime");
      const auto& r = *cfg.resonance;
      q_ = r.q;
      Gamma_ = r.Gamma;
      loss_factor_ = broad_loss_factor(cfg);
      k_ = cplx(0.5 * r.Gamma, cfg.feshbach_offset());
    }
  }

  StateVector operator()(double t, const StateVector& y) const {
    const double os = cfg_.stokes(t);
    const double ob = cfg_.pump_coupling(t);
    const cplx c1 = y(0), c2 = y(1), m = y(2);
    cplx S, T, dm{0.0, 0.0};
    switch (cfg_.regime) {
      case Regime::none:
        S = source_no_res(cfg_.source_params(t), t);
        T = kPi * ob * ob * c2;
        break;
      case Regime::broad:
        S = source_broad(cfg_.source_params(t), t);
        T = kPi * ob * ob * loss_factor_ * c2;
        break;
      case Regime::narrow: {
        if (cfg_.narrow_source == NarrowSource::bessel_struve) {
          S = source_narrow(cfg_.source_params(t), t);
        } else if (table_) {
          S = ob * (*table_)(t) * std::polar(1.0, -cfg_.two_photon_offset * t);
        } else {
          S = source_general_quadrature(cfg_.source_params(t), t).value;
        }
        const cplx qi(q_, -1.0);
        T = kPi * ob * ob * c2 + 0.5 * kPi * Gamma_ * qi * qi * ob * m;
        dm = c2 * ob - k_ * m;
        break;
      }
      case Regime::full_oracle:
        throw std::logic_error("reduced model evaluated for the oracle regime");
    }
    StateVector d;
    d(0) = kI * os * c2;
    d(1) = -kI * cplx(cfg_.delta, -cfg_.gamma) * c2 + kI * os * c1 + kI * S - T;
    d(2) = dm;
    return d;
  }

 private:
  const ScenarioConfig& cfg_;
  std::shared_ptr<const SourceTable> table_;
  double q_ = 0.0;
  double Gamma_ = 1.0;
  cplx loss_factor_{1.0, 0.0};
  cplx k_{0.0, 0.0};
};

std::vector<double> sample_grid(double t0, double t1, int samples) {
  std::vector<double> out(std::max(samples, 2));
  const auto n = out.size() - 1;
  for (std::size_t i = 0; i <= n; ++i) out[i] = t0 + (t1 - t0) * double(i) / double(n);
  out.back() = t1;
  return out;
}

double default_max_step(const ScenarioConfig& cfg) {
  if (cfg.integration.max_step > 0.0) return cfg.integration.max_step;
  return 0.1 * std::min(cfg.pulses.stokes.width, cfg.pulses.pump.width);
}

void check_populations(TimeSeries& ts) {
  double worst = 0.0;
  for (const auto& [p1, p2] : ts.populations) worst = std::max(worst, p1 + p2);
  if (worst > 1.0 + 1e-6) {
    std::ostringstream msg;
    msg << "population bound exceeded: max |c1|^2 + |c2|^2 = " << worst;
    ts.warnings.push_back(msg.str());
  }
}

void record(TimeSeries& ts, const ScenarioConfig& cfg, double t, const AmplitudeState& s) {
  ts.times.push_back(t);
  ts.states.push_back(s);
  ts.pulses_sampled.push_back({cfg.stokes(t), cfg.pump_display(t)});
  ts.populations.emplace_back(s.pop1(), s.pop2());
}

}  // namespace

double ScenarioConfig::feshbach_offset() const {
  if (!resonance) throw std::invalid_argument("resonance: required");
  return resonance->eps_F - two_photon();
}

std::pair<double, double> ScenarioConfig::window() const {
  if (!integration.auto_window) return {integration.t_start, integration.t_end};
  const double tmax = std::max(pulses.stokes.width, pulses.pump.width);
  return {pulses.t0 - 6.0 * tmax - pulses.stokes.center_offset,
          pulses.t0 + 6.0 * tmax + pulses.pump.center_offset};
}

double ScenarioConfig::pump_coupling(double t) const {
  return pump_coupling_from_amplitude(evaluate(pulses.pump, pulses.t0, t), wavepacket.delta_eps);
}

double ScenarioConfig::pump_display(double t) const {
  const double gamma_w = resonance ? resonance->Gamma : 1.0;
  const Regime r = (regime == Regime::narrow) ? Regime::narrow : Regime::broad;
  return display_pump_units(pump_coupling(t), r, wavepacket.delta_eps, gamma_w);
}

SourceParams ScenarioConfig::source_params(double t) const {
  SourceParams p;
  p.wavepacket = wavepacket;
  p.resonance = resonance;
  p.two_photon = two_photon();
  p.pump_coupling = pump_coupling(t);
  return p;
}

void ScenarioConfig::validate() const {
  if (!(wavepacket.delta_eps > 0.0)) bad_field("wavepacket.delta_eps", "must be positive");
  if (!(pulses.stokes.width > 0.0)) bad_field("pulses.stokes.width", "must be positive");
  if (!(pulses.pump.width > 0.0)) bad_field("pulses.pump.width", "must be positive");
  if (pulses.stokes.peak < 0.0) bad_field("pulses.stokes.peak", "must be non-negative");
  if (pulses.pump.peak < 0.0) bad_field("pulses.pump.peak", "must be non-negative");
  if (gamma < 0.0) bad_field("gamma", "must be non-negative");
  if (!(integration.rel_tol > 0.0)) bad_field("integration.rel_tol", "must be positive");
  if (!(integration.abs_tol > 0.0)) bad_field("integration.abs_tol", "must be positive");
  if (integration.samples < 2) bad_field("integration.samples", "must be at least 2");
  if ((regime == Regime::broad || regime == Regime::narrow) && !resonance)
    bad_field("resonance", std::string("required for regime ") + std::string(regime_name(regime)));
  if (resonance && !(resonance->Gamma > 0.0)) bad_field("resonance.Gamma", "must be positive");
  const auto [t0, t1] = window();
  if (!(t0 < wavepacket.t0 && wavepacket.t0 < t1))
    bad_field("wavepacket.t0", "collision time must lie inside the integration window");
  if (!integration.auto_window) {
    const double tmax = std::max(pulses.stokes.width, pulses.pump.width);
    if (t1 - t0 < 6.0 * tmax) bad_field("integration", "window must span at least 6 pulse widths");
  }
  if (regime == Regime::full_oracle && oracle.n_states != 0 && oracle.n_states < 64)
    bad_field("oracle.n_states", "must be at least 64");
}

cplx broad_loss_factor(const ScenarioConfig& cfg) {
  if (!cfg.resonance) return {1.0, 0.0};
  const auto& r = *cfg.resonance;
  const cplx qi(r.q, -1.0);
  return 1.0 + qi * qi / cplx(1.0, 2.0 * cfg.feshbach_offset() / r.Gamma);
}

AmplitudeState rhs_no_res(const ScenarioConfig& cfg, double t, const AmplitudeState& s) {
  ScenarioConfig c = cfg;
  c.regime = Regime::none;
  return to_state(ReducedModel(c)(t, to_vector(s)));
}

AmplitudeState rhs_broad(const ScenarioConfig& cfg, double t, const AmplitudeState& s) {
  ScenarioConfig c = cfg;
  c.regime = Regime::broad;
  return to_state(ReducedModel(c)(t, to_vector(s)));
}

AmplitudeState rhs_narrow(const ScenarioConfig& cfg, double t, const AmplitudeState& s) {
  ScenarioConfig c = cfg;
  c.regime = Regime::narrow;
  return to_state(ReducedModel(c)(t, to_vector(s)));
}

TimeSeries integrate(const ScenarioConfig& cfg) {
  if (cfg.regime == Regime::full_oracle) return full_model_oracle(cfg);
  cfg.validate();
  const auto [t0, t1] = cfg.window();
  TimeSeries ts;
  std::shared_ptr<const SourceTable> table;
  if (cfg.regime == Regime::narrow && cfg.narrow_source == NarrowSource::quadrature) {
    auto tab = std::make_shared<SourceTable>(cfg, t0, t1);
    if (!tab->converged()) ts.warnings.push_back("source quadrature did not reach its tolerance");
    table = std::move(tab);
  }
  if (cfg.regime == Regime::broad || cfg.regime == Regime::narrow) {
    for (auto& w : source_validity_warnings(cfg.source_params(cfg.wavepacket.t0),
                                            cfg.regime == Regime::narrow))
      ts.warnings.push_back(std::move(w));
  }
  ReducedModel model(cfg, table);
  StateVector y = to_vector(cfg.initial.value_or(AmplitudeState{}));
  OdeOptions opt;
  opt.rel_tol = cfg.integration.rel_tol;
  opt.abs_tol = cfg.integration.abs_tol;
  opt.max_step = default_max_step(cfg);
  const auto grid = sample_grid(t0, t1, cfg.integration.samples);
  ts.times.reserve(grid.size());
  ts.stats = integrate_dopri5(model, t0, t1, y, opt, grid,
                              [&](double t, const StateVector& v) { record(ts, cfg, t, to_state(v)); });
  check_populations(ts);
  return ts;
}

double final_efficiency(const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  c.integration.samples = 2;
  return integrate(c).efficiency();
}

std::vector<cplx> memory_convolution(const ScenarioConfig& cfg, const TimeSeries& ts) {
  if (!cfg.resonance) throw std::invalid_argument("memory_convolution: resonance required");
  const cplx k(0.5 * cfg.resonance->Gamma, cfg.feshbach_offset());
  const std::size_t n = ts.times.size();
  std::vector<cplx> out(n);
  if (n == 0) return out;
  // m(t_j) = sum over segments of the trapezoid rule applied to
  // c2(t') E(t') exp(-k (t_j - t')); accumulated recursively:
  // m_j = m_{j-1} e^{-k h} + h/2 (f_{j-1} e^{-k h} + f_j).
  std::vector<cplx> f(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = ts.states[j].c2 * cfg.pump_coupling(ts.times[j]);
  out[0] = ts.states[0].mem;
  for (std::size_t j = 1; j < n; ++j) {
    const double h = ts.times[j] - ts.times[j - 1];
    const cplx decay = std::exp(-k * h);
    out[j] = out[j - 1] * decay + 0.5 * h * (f[j - 1] * decay + f[j]);
  }
  return out;
}

}  // namespace fstirap
