// Acceptance suite: one PASS/FAIL line per criterion, exit status = number
// of failures. Thresholds are fixed here, not read from configs.

#include "fstirap/config.hpp"
#include "fstirap/dynamics.hpp"
#include "fstirap/ensemble.hpp"
#include "fstirap/fano.hpp"
#include "fstirap/optimizer.hpp"
#include "fstirap/source.hpp"
#include "fstirap/specfun.hpp"
#include "fstirap/units.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

using namespace fstirap;

namespace {

// Pinned thresholds.
constexpr double kBroadTarget = 0.95;
constexpr double kBroadSeconds = 10.0;
constexpr double kNoResPenalty = 100.0;  // expected intensity ratio
constexpr double kNoResFactor = 2.0;
constexpr double kNoResSeconds = 120.0;
constexpr double kNarrowLo = 0.40, kNarrowHi = 0.50;
constexpr double kDetunedMin = 0.63;
constexpr double kDetunedRatio = 10.0;   // |eps_F - eps0| / (Omega_2b^2 / gamma)
constexpr double kAverageTarget = 0.70, kAverageTol = 0.07;
constexpr double kAverageSeconds = 300.0;
constexpr double kIntensityTol = 0.20;
constexpr double kLineshapeTol = 1e-6;
constexpr double kRatioTol = 1e-13;
constexpr double kOracleTol = 0.05;
constexpr int kOracleMinBins = 256;
constexpr double kOracleSeconds = 300.0;
constexpr double kSpecfunTol = 1e-7;
constexpr double kAsymptoticTol = 0.01;
constexpr double kConservationTol = 1e-8;
constexpr double kTranslationTol = 1e-8;
constexpr double kFractionRef = 2.5e-4, kFractionFactor = 2.0;
constexpr double kMemoryTol = 1e-6;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunConfig preset(const std::string& name) {
  return load_config(std::string(FSTIRAP_PRESET_DIR) + "/" + name + ".json");
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Maximizes the final population over the untabulated parameters.
OptimizationResult optimize_untabulated(const ScenarioConfig& base, long budget = 150) {
  OptimizationProblem pb;
  pb.base = base;
  pb.free_params = {Param::delta, Param::two_photon_offset, Param::t0};
  pb.bounds = {{-1e7, 1e7}, {-1e7, 1e7}, {base.wavepacket.t0 - 1e-6, base.wavepacket.t0 + 1e-6}};
  pb.budget = budget;
  pb.seed = 1;
  return optimize(pb);
}

Outcome broad_transfer() {
  const auto t0 = Clock::now();
  const auto res = optimize_untabulated(preset("table1_broad").scenario);
  const double dt = seconds_since(t0);
  return {res.best_value >= kBroadTarget && dt < kBroadSeconds,
          fmt("|c1|^2 = %.4f after %ld evaluations (need >= %.2f), %.1f s (limit %.0f s)", res.best_value,
              res.evaluations, kBroadTarget, dt, kBroadSeconds)};
}

// Smallest intensity (W/cm^2) in [lo, hi] at which the optimized transfer
// reaches the target. Too strong a pump spoils the transfer again, so scan
// upward in factors of 2 and bisect in log I below the first success.
double threshold_intensity(const RunConfig& rc, double lo, double hi,
                           const std::function<double(double)>& amplitude_of) {
  auto best = [&](double I) {
    ScenarioConfig cfg = rc.scenario;
    cfg.pulses.pump.peak = amplitude_of(I);
    return optimize_untabulated(cfg).best_value;
  };
  if (best(lo) >= kBroadTarget) return lo;
  double up = lo;
  do {
    lo = up;
    up = std::min(2 * lo, hi);
    if (lo >= hi) return std::nan("");
  } while (best(up) < kBroadTarget);
  hi = up;
  while (hi / lo > 1.02) {
    const double mid = std::sqrt(lo * hi);
    (best(mid) >= kBroadTarget ? hi : lo) = mid;
  }
  return hi;
}

Outcome intensity_penalty() {
  const auto t0 = Clock::now();
  const RunConfig none = preset("table1_none");
  const RunConfig broad = preset("table1_broad");
  const double d = none.scenario.wavepacket.delta_eps;
  const double mu2eps = *none.dipoles.mu2eps;
  const double I_none = threshold_intensity(none, 2e4, 4e6, [&](double I) {
    return std::sqrt(I / pump_intensity_continuum(1.0, d, mu2eps));
  });
  const auto& r = *broad.scenario.resonance;
  const double db = broad.scenario.wavepacket.delta_eps;
  const double mu2b = *broad.dipoles.mu2b / PhysConstants::debye;
  const double I_broad = threshold_intensity(broad, 200.0, 4e4, [&](double I) {
    return pump_amplitude_from_intensity(I, r.q, db, r.Gamma, mu2b);
  });
  const double reference = kNoResPenalty * *broad.pump_intensity();
  const double dt = seconds_since(t0);
  const bool within = I_none >= reference / kNoResFactor && I_none <= reference * kNoResFactor;
  return {within && dt < kNoResSeconds,
          fmt("no-resonance threshold %.3g W/cm^2 vs 100 x %.0f = %.3g (factor %.0f); broad threshold %.3g, "
              "ratio %.0f; %.1f s (limit %.0f s)",
              I_none, *broad.pump_intensity(), reference, kNoResFactor, I_broad, I_none / I_broad, dt,
              kNoResSeconds)};
}

Outcome narrow_suppression() {
  const double p = integrate(preset("table1_narrow").scenario).efficiency();
  return {p >= kNarrowLo && p <= kNarrowHi, fmt("|c1|^2 = %.4f (band [%.2f, %.2f])", p, kNarrowLo, kNarrowHi)};
}

Outcome narrow_detuned() {
  const RunConfig rc = preset("table1_narrow_detuned");
  const auto& sc = rc.scenario;
  const double omega_2b = rabi_from_intensity(*rc.pump_intensity(), *rc.dipoles.mu2b / PhysConstants::debye);
  const double ratio = std::abs(sc.resonance->eps_F - sc.wavepacket.eps0) / (omega_2b * omega_2b / sc.gamma);
  const double p = integrate(sc).efficiency();
  return {p >= kDetunedMin && ratio >= kDetunedRatio,
          fmt("|c1|^2 = %.4f (need >= %.2f) at detuning %.1f x Omega_2b^2/gamma", p, kDetunedMin, ratio)};
}

Outcome ensemble_average() {
  const auto t0 = Clock::now();
  const RunConfig rc = preset("table2_avg_broad");
  const auto avg = average_efficiency(rc.ensemble->spec, rc.scenario, 16, true);
  const double dt = seconds_since(t0);
  return {std::abs(avg.p_avg - kAverageTarget) <= kAverageTol && dt < kAverageSeconds,
          fmt("P_avg = %.4f at 16 nodes (%.4f at 32), target %.2f +- %.2f, %.1f s", avg.p_avg, avg.p_avg_refined,
              kAverageTarget, kAverageTol, dt)};
}

Outcome intensity_formulas() {
  struct Row {
    const char* preset;
    double stokes_W, pump_W;
  };
  const Row rows[] = {{"table1_none", 62, 4e5},     {"table1_broad", 65, 4000},  {"table1_narrow", 600, 400},
                      {"table2_none", 30, 1.7e5},   {"table2_avg_broad", 40, 2500}, {"table2_narrow", 600, 400}};
  double worst = 0.0, cross = 0.0;
  for (const auto& row : rows) {
    const RunConfig rc = preset(row.preset);
    const double mu21 = *rc.dipoles.mu21 / PhysConstants::debye;
    const double Is = stokes_intensity(rc.scenario.pulses.stokes.peak, mu21);
    const double P = rc.scenario.pulses.pump.peak;
    const double d = rc.scenario.wavepacket.delta_eps;
    double Ip;
    if (rc.scenario.resonance) {
      const auto& r = *rc.scenario.resonance;
      const double mu2b = *rc.dipoles.mu2b / PhysConstants::debye;
      Ip = pump_intensity_broad(P, r.q, d, r.Gamma, mu2b);
      const double via_continuum = pump_intensity_continuum(P, d, continuum_dipole_from_bound(mu2b, r.q, r.Gamma));
      cross = std::max(cross, std::abs(via_continuum / Ip - 1.0));
    } else {
      Ip = pump_intensity_continuum(P, d, *rc.dipoles.mu2eps);
    }
    worst = std::max({worst, std::abs(Is / row.stokes_W - 1.0), std::abs(Ip / row.pump_W - 1.0)});
  }
  return {worst <= kIntensityTol && cross < 1e-12,
          fmt("worst deviation %.1f%% over 12 tabulated intensities (limit %.0f%%); formula cross-check %.1e", 100 * worst,
              100 * kIntensityTol, cross)};
}

Outcome enhancement_factor() {
  const double q = 10.0;
  const FanoResonance<double> r{q, 1000 * kMicroKelvin, 0.0};
  const auto [offset, gmax] = enhancement_max(r);
  const double x_exact = 1.0 / q, g_exact = std::sqrt(1 + q * q);
  // Zooming grid search in x = 2 (eps - eps_F) / Gamma.
  double lo = -50.0, hi = 50.0, x_best = 0.0;
  for (int pass = 0; pass < 12; ++pass) {
    const int n = 2001;
    double g_best = -1e300;
    for (int i = 0; i < n; ++i) {
      const double x = lo + (hi - lo) * i / (n - 1);
      const double g = lineshape(r, r.eps_F + 0.5 * r.Gamma * x);
      if (g > g_best) g_best = g, x_best = x;
    }
    const double w = (hi - lo) / (n - 1);
    lo = x_best - 2 * w;
    hi = x_best + 2 * w;
  }
  const double g_grid = lineshape(r, r.eps_F + 0.5 * r.Gamma * x_best);
  const double err_analytic = std::max(std::abs(2 * offset / r.Gamma - x_exact) / x_exact, std::abs(gmax / g_exact - 1));
  const double err_grid = std::max(std::abs(x_best - x_exact) / x_exact, std::abs(g_grid / g_exact - 1));

  SourceParams p;
  p.wavepacket = {r.eps_F + offset, 10 * kMicroKelvin, 0.0};
  p.resonance = r;
  p.two_photon = p.wavepacket.eps0 - 2e5;
  p.pump_coupling = 3.0;
  double ratio_err = 0.0;
  for (double t : {-3e-6, -4e-7, 0.0, 2.5e-7, 1e-6}) {
    const cplx ratio = source_broad(p, t) / source_no_res(p, t);
    ratio_err = std::max(ratio_err, std::abs(ratio - signed_lineshape(r, p.wavepacket.eps0)) / g_exact);
  }
  return {err_analytic < kLineshapeTol && err_grid < kLineshapeTol && ratio_err < kRatioTol,
          fmt("max at x = %.8f (1/q), g = %.8f (sqrt(1+q^2)); analytic err %.1e, grid err %.1e, "
              "S_broad/S_nores err %.1e",
              x_best, g_grid, err_analytic, err_grid, ratio_err)};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (const char* name : {"oracle_broad", "oracle_none"}) {
    const ScenarioConfig sc = preset(name).scenario;
    const double full = full_model_oracle(sc).efficiency();
    const double reduced = integrate(sc).efficiency();
    const double rel = std::abs(full - reduced) / reduced;
    ok = ok && rel <= kOracleTol && sc.oracle.n_states >= kOracleMinBins;
    detail += fmt("%s: oracle %.4f vs reduced %.4f (%.1f%%, %d bins); ", name, full, reduced, 100 * rel,
                  sc.oracle.n_states);
  }
  const double dt = seconds_since(t0);
  return {ok && dt < kOracleSeconds, detail + fmt("%.1f s", dt)};
}

// Independent oracles: long double power series and the Laplace-type
// integral (2/pi) int_0^{pi/2} e^{-x cos t} dt (derivative for I1 - L_{-1}).
long double series_i0l0(long double x) {
  long double s = 0, a = 1, b = 2 * x / M_PIl;
  for (int k = 0; k < 400; ++k) {
    s += a - b;
    a *= (x / 2) * (x / 2) / ((k + 1.0L) * (k + 1.0L));
    b *= (x / 2) * (x / 2) / ((k + 1.5L) * (k + 1.5L));
  }
  return s;
}

long double series_i1lm1(long double x) {
  // derivative of the series above
  long double s = 0, a = x / 2, b = 2 / M_PIl;
  for (int k = 0; k < 400; ++k) {
    s += a - b;
    a *= (x / 2) * (x / 2) / ((k + 1.0L) * (k + 2.0L));
    b *= (x / 2) * (x / 2) / ((k + 0.5L) * (k + 1.5L));
  }
  return s;
}

double laplace(double x, bool derivative) {
  const int n = 400000;
  const double h = M_PI / 2 / n;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    const double c = std::cos(i * h);
    double f = std::exp(-x * c);
    if (derivative) f *= -c;
    s += f * (i == 0 || i == n ? 1 : i % 2 ? 4 : 2);
  }
  return 2 / M_PI * s * h / 3;
}

Outcome special_functions() {
  double worst = 0.0;
  for (double x : {0.1, 1.0, 5.0, 20.0}) {
    const double r0 = x <= 5.0 ? double(series_i0l0(x)) : laplace(x, false);
    const double r1 = x <= 5.0 ? double(series_i1lm1(x)) : laplace(x, true);
    worst = std::max(worst, std::abs(i0_minus_l0(x).value / r0 - 1));
    worst = std::max(worst, std::abs(i1_minus_lm1(x).value / r1 - 1));
    worst = std::max(worst, std::abs(i0_minus_l0(x).value / laplace(x, false) - 1));
  }
  const double x = 100.0;
  const double a0 = std::abs(i0_minus_l0(x).value / (2 / (M_PI * x)) - 1);
  const double a1 = std::abs(-i1_minus_lm1(x).value / (2 / (M_PI * x * x)) - 1);
  return {worst < kSpecfunTol && a0 < kAsymptoticTol && a1 < kAsymptoticTol,
          fmt("worst relative error %.1e at x in {0.1,1,5,20}; at x = 100: %.1e from 2/(pi x), %.1e from -2/(pi x^2)",
              worst, a0, a1)};
}

Outcome conservation() {
  ScenarioConfig cfg = preset("table1_broad").scenario;
  cfg.gamma = 0.0;
  cfg.delta = 2e6;
  cfg.pulses.pump.peak = 0.0;
  cfg.initial = AmplitudeState{cplx(0.6, 0.0), cplx(0.0, 0.8), cplx(0.0)};
  cfg.integration.rel_tol = 1e-11;
  cfg.integration.abs_tol = 1e-13;
  const TimeSeries ts = integrate(cfg);
  double drift = 0.0;
  for (const auto& s : ts.states) drift = std::max(drift, std::abs(s.pop1() + s.pop2() - 1.0));

  ScenarioConfig a = preset("table1_broad").scenario;
  a.integration.rel_tol = 1e-11;
  a.integration.abs_tol = 1e-14;
  ScenarioConfig b = a;
  b.pulses.t0 += 7.3e-6;
  b.wavepacket.t0 += 7.3e-6;
  const auto fa = integrate(a).final_state(), fb = integrate(b).final_state();
  const double shift = std::max(std::abs(fa.pop1() - fb.pop1()), std::abs(fa.pop2() - fb.pop2()));
  return {drift < kConservationTol && shift < kTranslationTol,
          fmt("norm drift %.1e (gamma = 0, pump off); translation by 7.3 us changes populations by %.1e", drift,
              shift)};
}

Outcome ensemble_estimates() {
  const RunConfig rc = preset("li6_estimate");
  const auto& eb = *rc.ensemble;
  const double f = fraction_per_pulse_pair(eb.spec, *eb.p_avg, *eb.tau_tr);
  const auto train = pulse_train_estimate(eb.spec, f, eb.cycle_time, eb.residual);
  const bool ok = f >= kFractionRef / kFractionFactor && f <= kFractionRef * kFractionFactor &&
                  train.n_pairs >= 10000 && train.n_pairs <= 1000000 && train.production_rate >= 1e8 &&
                  train.production_rate <= 1e10;
  return {ok, fmt("f = %.3g (ref 2.5e-4, factor 2), n_pairs = %ld (1e4..1e6), rate = %.3g /s (1e8..1e10)", f,
                  train.n_pairs, train.production_rate)};
}

Outcome memory_kernel() {
  ScenarioConfig cfg = preset("table1_narrow").scenario;
  cfg.integration.samples = 160001;
  cfg.integration.rel_tol = 1e-10;
  cfg.integration.abs_tol = 1e-12;
  const TimeSeries ts = integrate(cfg);
  const auto conv = memory_convolution(cfg, ts);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < conv.size(); ++i) {
    err = std::max(err, std::abs(conv[i] - ts.states[i].mem));
    scale = std::max(scale, std::abs(ts.states[i].mem));
  }
  const double rel = err / scale;
  return {rel < kMemoryTol, fmt("max |m_ode - m_conv| / max |m| = %.1e over %zu samples", rel, conv.size())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"broad-resonance pair transfer", broad_transfer},
      {"no-resonance intensity penalty", intensity_penalty},
      {"narrow-resonance suppression", narrow_suppression},
      {"narrow far-detuned recovery", narrow_detuned},
      {"ensemble-averaged broad transfer", ensemble_average},
      {"intensity formulas", intensity_formulas},
      {"enhancement factor", enhancement_factor},
      {"oracle equivalence", oracle_equivalence},
      {"special functions", special_functions},
      {"conservation and translation invariance", conservation},
      {"ensemble estimates", ensemble_estimates},
      {"memory kernel", memory_kernel},
  };
  int failures = 0, id = 0;
  for (const auto& c : criteria) {
    ++id;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %-40s %s\n", o.pass ? "PASS" : "FAIL", id, c.title, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", id - failures, id);
  return failures;
}
