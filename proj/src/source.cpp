#include "fstirap/source.hpp"

#include "fstirap/quadrature.hpp"
#include "fstirap/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fstirap {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

const FanoResonance<double>& need_resonance(const SourceParams& p, const char* who) {
  if (!p.resonance) throw std::invalid_argument(std::string(who) + ": resonance required");
  return *p.resonance;
}

// Gaussian part without the overall e^{-i (eps0 - omega_Sp) t} phase.
double gaussian_envelope(const SourceParams& p, double t) {
  const double d = p.wavepacket.delta_eps;
  const double u = (t - p.wavepacket.t0) * d;
  return p.amplitude() * std::sqrt(2.0 * kPi) * d * std::exp(-0.5 * u * u);
}

cplx carrier(const SourceParams& p, double t) { return std::polar(1.0, -p.offset() * t); }

void push_clipped(std::vector<double>& pts, double x, double lo, double hi) {
  if (x > lo && x < hi) pts.push_back(x);
}

}  // namespace

double SourceParams::amplitude() const {
  return pump_coupling * std::pow(kPi * wavepacket.delta_eps * wavepacket.delta_eps, -0.25);
}

double SourceParams::tau(double t) const { return t * wavepacket.delta_eps / kSqrt2; }

double SourceParams::D() const {
  return (need_resonance(*this, "D").eps_F - wavepacket.eps0) / (kSqrt2 * wavepacket.delta_eps);
}

double SourceParams::xi() const {
  return need_resonance(*this, "xi").Gamma / (kSqrt2 * wavepacket.delta_eps);
}

cplx source_no_res(const SourceParams& p, double t) {
  return gaussian_envelope(p, t) * carrier(p, t);
}

cplx source_broad(const SourceParams& p, double t) {
  const auto& res = need_resonance(p, "source_broad");
  return signed_lineshape(res, p.wavepacket.eps0) * source_no_res(p, t);
}

cplx source_narrow(const SourceParams& p, double t) {
  const auto& res = need_resonance(p, "source_narrow");
  const double dt = t - p.wavepacket.t0;
  const double x = 0.5 * res.Gamma * std::abs(dt);
  const double D = p.D();
  // The odd part jumps at the collision time; the energy integral takes the midpoint there.
  const double sg = dt > 0.0 ? 1.0 : dt < 0.0 ? -1.0 : 0.0;
  const cplx bracket(i1_minus_lm1(x).value, -res.q * i0_minus_l0(x).value * sg);
  const double detune = res.eps_F - p.wavepacket.eps0;
  const cplx bound = p.amplitude() * std::exp(-D * D) * (0.5 * kPi * res.Gamma) *
                     std::polar(1.0, -detune * dt) * bracket;
  return (gaussian_envelope(p, t) + bound) * carrier(p, t);
}

SourceQuadrature source_general_quadrature(const SourceParams& p, double t,
                                           const SourceQuadratureOptions& opt) {
  p.wavepacket.validate();
  if (!(opt.window > 0.0)) throw std::invalid_argument("source_general_quadrature: window must be positive");
  const double d = p.wavepacket.delta_eps;
  const double lag = p.wavepacket.t0 - t;
  const bool use_lineshape = p.resonance.has_value() && !opt.flat_lineshape;
  FanoResonance<double> res;
  if (use_lineshape) {
    res = *p.resonance;
    res.validate();
    res.eps_F -= p.wavepacket.eps0;  // work in u = eps - eps0
  }

  // Integration support: eps0 +- W delta, merged with eps_F +- W Gamma.
  double lo = -opt.window * d;
  double hi = opt.window * d;
  std::vector<std::pair<double, double>> spans{{lo, hi}};
  if (use_lineshape) {
    const double rlo = res.eps_F - opt.window * res.Gamma;
    const double rhi = res.eps_F + opt.window * res.Gamma;
    if (rlo <= hi && rhi >= lo)
      spans[0] = {std::min(lo, rlo), std::max(hi, rhi)};
    else
      spans.push_back({rlo, rhi});
  }
  double cut = -std::numeric_limits<double>::infinity();
  if (opt.threshold) cut = *opt.threshold - p.wavepacket.eps0;

  // Initial partition: panels short enough to resolve both the Gaussian and
  // the oscillation e^{i u (t0 - t)}; a geometric ladder around eps_F; the
  // sign jump at eps_F itself.
  const double panel = std::min(0.5 * d, kPi / std::max(std::abs(lag), 1e-300));
  std::vector<double> pts;
  for (auto [a, b] : spans) {
    a = std::max(a, cut);
    if (!(b > a)) continue;
    pts.push_back(a);
    pts.push_back(b);
    const double ga = std::max(a, lo), gb = std::min(b, hi);
    if (gb > ga) {
      const auto n = static_cast<long>(std::ceil((gb - ga) / panel));
      for (long i = 0; i <= n; ++i) push_clipped(pts, ga + (gb - ga) * double(i) / double(n), a, b);
    }
    if (use_lineshape) {
      push_clipped(pts, res.eps_F, a, b);
      for (double k = 0.5; k <= opt.window; k *= 2.0) {
        push_clipped(pts, res.eps_F - k * res.Gamma, a, b);
        push_clipped(pts, res.eps_F + k * res.Gamma, a, b);
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const double inv2d2 = 0.5 / (d * d);
  auto integrand = [&](double u) -> cplx {
    const double w = use_lineshape ? signed_lineshape(res, u) : 1.0;
    return w * std::exp(-u * u * inv2d2) * std::polar(1.0, u * lag);
  };

  SourceQuadrature out;
  if (pts.size() < 2) {
    out.value = 0.0;
    return out;
  }
  // Absolute floor: a small fraction of the peak no-resonance magnitude.
  const double scale = std::sqrt(2.0 * kPi) * d * (use_lineshape ? std::max(1.0, std::abs(res.q)) : 1.0);
  auto r = integrate_adaptive<cplx>(integrand, pts, opt.rel_tol, 1e-2 * opt.rel_tol * scale,
                                    opt.max_intervals);
  const double amp = p.amplitude();
  out.value = amp * r.value * carrier(p, t);
  out.error = std::abs(amp) * r.error;
  out.converged = r.converged;
  return out;
}

std::vector<std::string> source_validity_warnings(const SourceParams& p, bool narrow) {
  std::vector<std::string> out;
  if (!p.resonance) return out;
  const double ratio = p.resonance->Gamma / p.wavepacket.delta_eps;
  std::ostringstream msg;
  if (narrow && p.xi() > 1.0) {
    msg << "narrow-resonance source used with xi = " << p.xi() << " > 1";
    out.push_back(msg.str());
  } else if (!narrow && ratio < 10.0) {
    msg << "broad-resonance source used with Gamma/delta_eps = " << ratio << " < 10";
    out.push_back(msg.str());
  }
  return out;
}

}  // namespace fstirap
