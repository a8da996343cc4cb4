#include "fstirap/config.hpp"
#include "fstirap/dynamics.hpp"

#include "doctest.h"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace fstirap;

namespace {

ScenarioConfig preset(const std::string& name) {
  return load_config(std::string(FSTIRAP_PRESET_DIR) + "/" + name + ".json").scenario;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("norm is conserved without loss and pump") {
    for (const char* name : {"table1_none", "table1_broad", "table1_narrow"}) {
      ScenarioConfig cfg = preset(name);
      cfg.gamma = 0.0;
      cfg.delta = 3e6;
      cfg.pulses.pump.peak = 0.0;
      cfg.initial = AmplitudeState{cplx(0.6, 0.0), cplx(0.0, 0.8), cplx(0.0)};
      cfg.integration.rel_tol = 1e-11;
      cfg.integration.abs_tol = 1e-13;
      const TimeSeries ts = integrate(cfg);
      double drift = 0.0;
      for (const auto& s : ts.states) drift = std::max(drift, std::abs(s.pop1() + s.pop2() - 1.0));
      CAPTURE(name);
      CHECK(drift < 1e-8);
      CHECK(ts.final_state().pop1() < 0.99);  // the Stokes pulse did act
    }
  }

  TEST_CASE("final populations are invariant under time translation") {
    for (const char* name : {"table1_broad", "table1_narrow"}) {
      ScenarioConfig a = preset(name);
      a.integration.rel_tol = 1e-11;
      a.integration.abs_tol = 1e-14;
      ScenarioConfig b = a;
      const double shift = 2.5 * std::max(a.pulses.stokes.width, a.pulses.pump.width);
      b.pulses.t0 += shift;
      b.wavepacket.t0 += shift;
      const auto fa = integrate(a).final_state(), fb = integrate(b).final_state();
      CAPTURE(name);
      CHECK(std::abs(fa.pop1() - fb.pop1()) < 1e-8);
      CHECK(std::abs(fa.pop2() - fb.pop2()) < 1e-8);
    }
  }

  TEST_CASE("memory variable equals the direct convolution") {
    ScenarioConfig cfg = preset("table1_narrow");
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
    CHECK(scale > 0.0);
    CHECK(err < 1e-6 * scale);
  }

  TEST_CASE("broad loss factor") {
    ScenarioConfig cfg = preset("table1_broad");
    const auto& r = *cfg.resonance;
    const cplx qi(r.q, -1.0);
    const cplx expected = 1.0 + qi * qi / (1.0 + cplx(0.0, 2.0 * cfg.feshbach_offset() / r.Gamma));
    const cplx F = broad_loss_factor(cfg);
    CHECK(std::abs(F - expected) < 1e-12 * std::abs(expected));
  }

  TEST_CASE("reference efficiencies of the shipped scenarios") {
    CHECK(integrate(preset("table1_broad")).efficiency() > 0.9);
    CHECK(integrate(preset("table1_none")).efficiency() > 0.9);
    const double narrow = integrate(preset("table1_narrow")).efficiency();
    CHECK(narrow > 0.35);
    CHECK(narrow < 0.5);
    CHECK(integrate(preset("table1_narrow_detuned")).efficiency() > narrow + 0.15);
  }

  TEST_CASE("narrow source by closed form or by quadrature") {
    // The closed form differs from the exact source by O(q xi) near the
    // collision time only.
    ScenarioConfig a = preset("table1_narrow");
    ScenarioConfig b = a;
    b.narrow_source = NarrowSource::quadrature;
    CHECK(integrate(a).efficiency() == doctest::Approx(integrate(b).efficiency()).epsilon(3e-3));
  }

  TEST_CASE("intuitive ordering transfers less") {
    ScenarioConfig a = preset("table1_broad");
    ScenarioConfig b = a;
    std::swap(b.pulses.stokes.center_offset, b.pulses.pump.center_offset);
    b.pulses.stokes.center_offset *= -1;
    b.pulses.pump.center_offset *= -1;
    CHECK_FALSE(b.pulses.counter_intuitive());
    CHECK(integrate(b).efficiency() < integrate(a).efficiency());
  }

  TEST_CASE("no pump, no transfer") {
    ScenarioConfig cfg = preset("table1_broad");
    cfg.pulses.pump.peak = 0.0;
    CHECK(integrate(cfg).efficiency() == 0.0);
  }

  TEST_CASE("validation names the field") {
    ScenarioConfig cfg = preset("table1_broad");
    cfg.pulses.stokes.width = -1.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("pulses.stokes.width"), std::invalid_argument);
    cfg = preset("table1_broad");
    cfg.resonance.reset();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
}
