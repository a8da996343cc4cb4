#include "fstirap/config.hpp"
#include "fstirap/units.hpp"

#include "doctest.h"

#include <filesystem>

using namespace fstirap;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "regime": "broad",
    "wavepacket": {"delta_eps": {"value": 10, "unit": "uK"}},
    "resonance": {"q": 10, "Gamma": {"value": 1, "unit": "mK"}, "feshbach_detuning": "enhancement_max"},
    "pulses": {
      "stokes": {"peak": {"value": 7.4e7, "unit": "1/s"}, "width": {"value": 1.4, "unit": "us"},
                 "offset": {"value": 0.65, "unit": "us"}},
      "pump": {"amplitude": 8, "width": {"value": 3.4, "unit": "us"}, "offset": {"value": 1, "unit": "us"}}
    }
  })");
}

std::string error_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("every preset round-trips exactly") {
    int n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(FSTIRAP_PRESET_DIR)) {
      CAPTURE(entry.path().string());
      const RunConfig a = load_config(entry.path());
      const json ja = serialize_config(a);
      const json jb = serialize_config(parse_config(ja));
      CHECK(ja == jb);
      ++n;
    }
    CHECK(n >= 8);
  }

  TEST_CASE("units are converted") {
    const RunConfig rc = parse_config(minimal());
    CHECK(rc.scenario.wavepacket.delta_eps == doctest::Approx(10 * kMicroKelvin));
    CHECK(rc.scenario.pulses.stokes.width == doctest::Approx(1.4e-6));
    CHECK(rc.scenario.resonance->eps_F - rc.scenario.wavepacket.eps0 ==
          doctest::Approx(-1000 * kMicroKelvin / 20));
    CHECK(to_internal_unit(7.8, "mG", "energy", "x") == doctest::Approx(kMicroKelvin));
    CHECK(to_internal_unit(2, "D", "dipole", "x") == doctest::Approx(2e-18));
  }

  TEST_CASE("unknown keys are rejected with their path") {
    json doc = minimal();
    doc["pulses"]["pump"]["widht"] = 1;
    CHECK(error_path(doc) == "pulses.pump.widht");
    doc = minimal();
    doc["extra"] = true;
    CHECK(error_path(doc) == "extra");
  }

  TEST_CASE("an empty document lists the required fields") {
    try {
      parse_config(json::object());
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      for (const char* field : {"regime", "wavepacket", "pulses.stokes", "pulses.pump"}) CHECK(msg.find(field) != std::string::npos);
    }
  }

  TEST_CASE("bad units and values") {
    json doc = minimal();
    doc["pulses"]["stokes"]["width"]["unit"] = "uK";
    CHECK(error_path(doc) == "pulses.stokes.width");
    doc = minimal();
    doc["wavepacket"]["delta_eps"] = 10;
    CHECK(error_path(doc) == "wavepacket.delta_eps");
    doc = minimal();
    doc["regime"] = "wide";
    CHECK(error_path(doc) == "regime");
    doc = minimal();
    doc["pulses"]["pump"]["intensity"] = {{"value", 4000}, {"unit", "W/cm2"}};
    CHECK(error_path(doc) == "pulses.pump");
  }

  TEST_CASE("overrides") {
    json doc = minimal();
    apply_override(doc, "resonance.q=5");
    apply_override(doc, "pulses.stokes.width=2");
    apply_override(doc, "name=run7");
    const RunConfig rc = parse_config(doc);
    CHECK(rc.scenario.resonance->q == 5.0);
    CHECK(rc.scenario.pulses.stokes.width == doctest::Approx(2e-6));
    CHECK(rc.name == "run7");
    CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  }

  TEST_CASE("pump intensity conversion") {
    json doc = minimal();
    doc["pulses"]["pump"].erase("amplitude");
    doc["pulses"]["pump"]["intensity"] = {{"value", 4000}, {"unit", "W/cm2"}};
    doc["dipoles"] = {{"mu21", {{"value", 0.1}, {"unit", "D"}}}, {"mu2b", {{"value", 0.1}, {"unit", "D"}}}};
    const RunConfig rc = parse_config(doc);
    CHECK(*rc.pump_intensity() == doctest::Approx(4000).epsilon(1e-12));
    CHECK(*rc.stokes_intensity() == doctest::Approx(stokes_intensity(7.4e7, 0.1)));
  }
}
