#include "fstirap/config.hpp"
#include "fstirap/optimizer.hpp"

#include "doctest.h"

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <stdexcept>

using namespace fstirap;

TEST_SUITE("optimizer") {
  TEST_CASE("finds the maximum of a shifted quadratic") {
    auto f = [](const std::vector<double>& x) {
      return 1.0 - std::pow(x[0] - 0.3, 2) - 4 * std::pow(x[1] + 1.2, 2) - 0.5 * std::pow(x[2] - 2.0, 2);
    };
    BoxOptions opt;
    opt.budget = 600;
    const auto r = maximize_box(f, {-2, -2, -2}, {3, 3, 3}, std::nullopt, opt);
    CHECK(r.best_value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.best_x[0] == doctest::Approx(0.3).epsilon(1e-4));
    CHECK(r.best_x[1] == doctest::Approx(-1.2).epsilon(1e-4));
    CHECK(r.best_x[2] == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(r.evaluations <= opt.budget);
    CHECK(r.trace.size() == static_cast<std::size_t>(r.evaluations));
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].best >= r.trace[i - 1].best);
  }

  TEST_CASE("respects the box when the optimum is outside") {
    auto f = [](const std::vector<double>& x) { return -std::pow(x[0] - 5.0, 2) - std::pow(x[1], 2); };
    const auto r = maximize_box(f, {-1, -1}, {1, 1}, std::vector<double>{0.0, 0.5}, BoxOptions{200});
    CHECK(r.best_x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(r.best_x[1]) < 1e-3);
  }

  TEST_CASE("is deterministic for a seed and survives failures") {
    auto f = [](const std::vector<double>& x) {
      if (x[0] > 0.8) throw std::runtime_error("diverged");
      return std::sin(3 * x[0]) * std::cos(2 * x[1]);
    };
    BoxOptions opt;
    opt.budget = 300;
    opt.seed = 7;
    const auto a = maximize_box(f, {0, 0}, {1, 1}, std::nullopt, opt);
    const auto b = maximize_box(f, {0, 0}, {1, 1}, std::nullopt, opt);
    CHECK(a.best_value == b.best_value);
    CHECK(a.best_x == b.best_x);
    CHECK(a.best_x[0] <= 0.8);
  }

  TEST_CASE("parameter accessors") {
    auto cfg = load_config(std::string(FSTIRAP_PRESET_DIR) + "/table1_broad.json").scenario;
    for (Param p : {Param::omega_s, Param::pump_amplitude, Param::T_S, Param::T_p, Param::tau_S, Param::tau_p,
                    Param::delta, Param::two_photon_offset, Param::t0}) {
      CHECK(param_from_name(param_name(p)) == p);
      set_param(cfg, p, 1.25 * get_param(cfg, p) + 1e-7);
    }
    CHECK_FALSE(param_from_name("nonsense"));
    set_named(cfg, "feshbach_detuning", 7.0);
    CHECK(cfg.resonance->eps_F - cfg.wavepacket.eps0 == doctest::Approx(7.0));
    CHECK_THROWS(set_named(cfg, "nonsense", 1.0));
  }

  TEST_CASE("small budgets are rejected") {
    auto rc = load_config(std::string(FSTIRAP_PRESET_DIR) + "/table1_broad_optimize.json");
    auto problem = rc.problem();
    problem.budget = 10;
    CHECK_THROWS_AS(optimize(problem), std::invalid_argument);
  }

  TEST_CASE("sweep reports failures inline") {
    auto cfg = load_config(std::string(FSTIRAP_PRESET_DIR) + "/table1_broad.json").scenario;
    const auto pts = sweep(cfg, "T_S", {-1e-6, 1.4e-6});
    REQUIRE(pts.size() == 2);
    CHECK_FALSE(pts[0].ok);
    CHECK_FALSE(pts[0].error.empty());
    CHECK(pts[1].ok);
    CHECK(pts[1].efficiency > 0.9);
  }
}
