#include "fstirap/pulses.hpp"
#include "fstirap/units.hpp"

#include "doctest.h"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace fstirap;

TEST_SUITE("units") {
  TEST_CASE("microkelvin as angular frequency") {
    // k_B * 1 uK / hbar
    CHECK(kMicroKelvin == doctest::Approx(1.380649e-29 / 1.054571817e-34).epsilon(1e-12));
    CHECK(energy_from_temperature(10.0) == doctest::Approx(10.0 * kMicroKelvin).epsilon(1e-14));
  }

  TEST_CASE("unit round trips") {
    for (Dimension d : {Dimension::energy, Dimension::dipole, Dimension::intensity,
                        Dimension::continuum_dipole, Dimension::field}) {
      const UnitValue v{3.25, d};
      const UnitValue back = from_internal(to_internal(v), d);
      CHECK(back.magnitude == doctest::Approx(3.25).epsilon(1e-14));
    }
  }

  TEST_CASE("stokes intensity follows I = c E^2 / 8 pi") {
    // E = hbar Omega / mu in statvolt/cm, I in erg/s/cm^2, 1 W = 1e7 erg/s
    const double c = 2.99792458e10, hbar = 1.054571817e-27, mu = 0.1e-18, omega = 0.72e8;
    const double E = hbar * omega / mu;
    CHECK(stokes_intensity(omega, 0.1) == doctest::Approx(c * E * E / (8 * M_PI) * 1e-7).epsilon(1e-12));
    CHECK(stokes_intensity(2 * omega, 0.1) == doctest::Approx(4 * stokes_intensity(omega, 0.1)));
    CHECK(rabi_from_intensity(stokes_intensity(omega, 0.1), 0.1) == doctest::Approx(omega).epsilon(1e-13));
  }

  TEST_CASE("broad pump intensity agrees with the continuum formula") {
    const double q = 10, d = 10 * kMicroKelvin, G = 1000 * kMicroKelvin, P = 8.0;
    const double mu2eps = continuum_dipole_from_bound(0.1, q, G);
    CHECK(pump_intensity_broad(P, q, d, G, 0.1) ==
          doctest::Approx(pump_intensity_continuum(P, d, mu2eps)).epsilon(1e-12));
    const double I = pump_intensity_broad(P, q, d, G, 0.1);
    CHECK(pump_amplitude_from_intensity(I, q, d, G, 0.1) == doctest::Approx(P).epsilon(1e-12));
  }

  TEST_CASE("pump coupling scale") {
    const double d = 10 * kMicroKelvin;
    CHECK(pump_coupling_from_amplitude(2.0, d) ==
          doctest::Approx(2.0 * std::sqrt(d) / std::pow(16 * M_PI, 0.25)).epsilon(1e-14));
  }
}

TEST_SUITE("pulses") {
  TEST_CASE("counter-intuitive ordering and peak values") {
    PulsePair<double> p;
    p.stokes = {2.0, 0.65, 1.4, +1};
    p.pump = {3.0, 1.0, 3.4, -1};
    p.t0 = 0.5;
    CHECK(p.counter_intuitive());
    CHECK(evaluate(p.stokes, p.t0, p.stokes_center()) == doctest::Approx(2.0));
    CHECK(evaluate(p.pump, p.t0, p.pump_center() + 3.4) == doctest::Approx(3.0 * std::exp(-1.0)));
  }

  TEST_CASE("overlap time is the intersection of the threshold intervals") {
    PulsePair<double> p;
    p.stokes = {1.0, 0.65, 1.4, +1};
    p.pump = {1.0, 1.0, 3.4, -1};
    // e^-2 threshold -> half widths sqrt(2) T
    const double lo = std::max(-0.65 - std::sqrt(2.0) * 1.4, 1.0 - std::sqrt(2.0) * 3.4);
    const double hi = std::min(-0.65 + std::sqrt(2.0) * 1.4, 1.0 + std::sqrt(2.0) * 3.4);
    CHECK(overlap_time(p) == doctest::Approx(hi - lo).epsilon(1e-14));
    p.pump.center_offset = 50.0;
    CHECK(overlap_time(p) == 0.0);
    CHECK_THROWS_AS(overlap_time(p, 1.5), std::invalid_argument);
  }
}
