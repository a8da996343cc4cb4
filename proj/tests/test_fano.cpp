#include "fstirap/fano.hpp"
#include "fstirap/source.hpp"

#include "doctest.h"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace fstirap;

TEST_SUITE("fano") {
  TEST_CASE("lineshape maximum") {
    for (double q : {0.5, 2.0, 10.0, -3.0}) {
      FanoResonance<double> r{q, 2.0, 1.0};
      const auto [offset, g] = enhancement_max(r);
      const double eps = r.eps_F + offset;
      CHECK(offset == doctest::Approx(r.Gamma / (2 * q)).epsilon(1e-14));
      CHECK(std::abs(g) == doctest::Approx(std::sqrt(1 + q * q)).epsilon(1e-14));
      CHECK(lineshape(r, eps) == doctest::Approx(g).epsilon(1e-14));
      CHECK(lineshape_derivative(r, eps) == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK_THROWS(enhancement_max(FanoResonance<double>{0.0, 1.0, 0.0}));
  }

  TEST_CASE("lineshape matches g = (q + x) / sqrt(1 + x^2)") {
    FanoResonance<double> r{10.0, 4.0, -1.0};
    for (double eps : {-30.0, -3.0, -1.0, 0.0, 0.7, 12.0}) {
      const double x = 2 * (eps - r.eps_F) / r.Gamma;
      CHECK(lineshape(r, eps) == doctest::Approx((10.0 + x) / std::sqrt(1 + x * x)));
    }
    CHECK(lineshape(r, 1e9) == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("derivative against central differences") {
    FanoResonance<double> r{3.0, 1.5, 0.2};
    for (double eps : {-2.0, 0.1, 0.9, 4.0}) {
      const double h = 1e-5;
      const double fd = (lineshape(r, eps + h) - lineshape(r, eps - h)) / (2 * h);
      CHECK(lineshape_derivative(r, eps) == doctest::Approx(fd).epsilon(1e-8));
    }
  }

  TEST_CASE("phase shift and bound admixture") {
    FanoResonance<double> r{10.0, 2.0, 0.0};
    CHECK(phase_shift(r, 0.0) == doctest::Approx(-M_PI / 2));
    CHECK(std::tan(phase_shift(r, 3.0)) == doctest::Approx(-r.Gamma / (2 * 3.0)));
    // sin^2 Delta integrates to pi Gamma / 2 over energy (Lorentzian)
    double sum = 0.0;
    const double h = 1e-3;
    for (double e = -2000; e < 2000; e += h) sum += std::pow(std::sin(phase_shift(r, e + h / 2)), 2) * h;
    CHECK(sum == doctest::Approx(M_PI * r.Gamma / 2).epsilon(2e-3));
  }

  TEST_CASE("broad source is the flat source times the signed lineshape") {
    SourceParams p;
    p.wavepacket = {20.0, 1.0, 0.3};
    p.resonance = FanoResonance<double>{10.0, 100.0, 20.0 - 100.0 / 20.0};
    p.two_photon = 19.5;
    p.pump_coupling = 0.7;
    const double g = signed_lineshape(*p.resonance, p.wavepacket.eps0);
    CHECK(g == doctest::Approx(std::sqrt(101.0)).epsilon(1e-14));
    for (double t : {-2.0, 0.0, 0.3, 1.7}) {
      const cplx ratio = source_broad(p, t) / source_no_res(p, t);
      CHECK(ratio.real() == doctest::Approx(g).epsilon(1e-14));
      CHECK(std::abs(ratio.imag()) < 1e-13);
    }
  }
}
