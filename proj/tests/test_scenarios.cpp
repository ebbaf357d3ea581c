#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "hsk/scenarios.hpp"
#include "hsk/set_valued.hpp"

using namespace hsk;

TEST_CASE("registry lists all sixteen scenarios with parameter provenance") {
  const auto infos = list_scenarios();
  CHECK(infos.size() == 16);
  std::set<std::string> names;
  for (const auto& info : infos) {
    names.insert(info.name);
    CHECK_FALSE(info.anchor.empty());
    CHECK_FALSE(info.description.empty());
    for (const auto& [key, param] : info.params) {
      CHECK_FALSE(key.empty());
      const bool known_origin = param.origin == "literature" ||
                                param.origin == "chosen" ||
                                param.origin == "structural";
      CHECK(known_origin);
    }
  }
  CHECK(names.size() == 16);
  for (const char* name :
       {"periodic_reset", "bouncing_seeker", "bouncing_average", "source_surveillance",
        "rps_nash", "projected_tracking", "unknown_constraints", "distributed_sign",
        "attack_gradient", "obstacle_avoid", "momentum_reset", "newton_gradient_switch",
        "coulomb_plant_loop", "switched_plant_loop", "nash_intermittent",
        "growing_timer_es"}) {
    CHECK(names.count(name) == 1);
  }
}

TEST_CASE("every scenario builds a well-formed initial-value problem") {
  for (const auto& info : list_scenarios()) {
    CAPTURE(info.name);
    const BuiltScenario built = build_scenario(info.name);
    CHECK(built.system.dim > 0);
    CHECK(built.x0.size() == static_cast<std::size_t>(built.system.dim));
    CHECK(built.state_names.size() == built.x0.size());
    // The initial point must offer some dynamics.
    const double c = built.system.flow_set(built.x0);
    const double d = built.system.jump_set(built.x0);
    CHECK(std::max(c, d) >= -built.config.tol_mem);
    Vec f(built.x0.size());
    built.system.flow_map(built.x0, f);
    for (double v : f) CHECK(std::isfinite(v));
    CHECK(built.config.h > 0.0);
    CHECK(built.config.t_max > 0.0);
    // Resolved parameters cover the declared defaults.
    for (const auto& [key, param] : info.params) {
      REQUIRE(built.params.count(key) == 1);
      CHECK(built.params.at(key) == param.value);
    }
  }
}

TEST_CASE("every scenario survives a short simulation") {
  for (const auto& info : list_scenarios()) {
    CAPTURE(info.name);
    const BuiltScenario built = build_scenario(info.name);
    SolverConfig cfg = built.config;
    cfg.t_max = std::min(cfg.t_max, 200.0 * cfg.h);
    const Solution sol = simulate(built.system, built.x0, cfg);
    CHECK(sol.termination != Termination::NoDynamicsFromPoint);
    CHECK(sol.termination != Termination::FlowSetExit);
    const auto& iv = sol.arc.intervals().back();
    const auto x = sol.arc.state(iv, iv.t.size() - 1);
    for (double v : x) CHECK(std::isfinite(v));
  }
}

TEST_CASE("override handling and registry errors") {
  CHECK_THROWS_AS(build_scenario("no_such_scenario"), UnknownScenario);
  CHECK_THROWS_AS(build_scenario("periodic_reset", {{"not_a_param", 1.0}}),
                  InvalidOverride);
  CHECK_THROWS_AS(build_scenario("periodic_reset", {{"T", std::nan("")}}),
                  InvalidOverride);
  const BuiltScenario built = build_scenario("periodic_reset", {{"T", 4.0}});
  CHECK(built.params.at("T") == 4.0);
  CHECK_THROWS_AS(build_reference("periodic_reset"), NoCounterpart);
  CHECK_THROWS_AS(reference_arc("rps_nash"), NoCounterpart);
  CHECK(reference_mask("bouncing_seeker") == std::vector<int>{0, 1});
  CHECK(reference_mask("growing_timer_es") == std::vector<int>{0});
}

TEST_CASE("periodic_reset runs its documented reset pattern") {
  const BuiltScenario built = build_scenario("periodic_reset");
  const Solution sol = simulate(built.system, built.x0, built.config);
  CHECK(sol.jumps >= 2);
  for (int k = 1; k <= 2; ++k) {
    const Vec post = sol.arc.post_jump_state(k);
    CHECK(post[0] == 0.0);
    CHECK(std::abs(post[1] - 10.0 * std::exp(-k) * std::pow(2.0, -k)) < 1e-4);
  }
}

TEST_CASE("bouncing_average flight times shrink geometrically") {
  const BuiltScenario built = build_scenario("bouncing_average");
  const Solution sol = simulate(built.system, built.x0, built.config);
  REQUIRE(sol.jumps >= 3);
  const auto dom = sol.arc.domain();
  const double gap1 = dom[1].t_end - dom[1].t_begin;
  const double gap2 = dom[2].t_end - dom[2].t_begin;
  const double gap3 = dom[3].t_end - dom[3].t_begin;
  const double lambda = built.params.at("lambda");
  CHECK(gap2 / gap1 == doctest::Approx(lambda).epsilon(1e-3));
  CHECK(gap3 / gap2 == doctest::Approx(lambda).epsilon(1e-3));
}

TEST_CASE("rps_nash stays on the simplex while it adapts") {
  const BuiltScenario built = build_scenario("rps_nash");
  SolverConfig cfg = built.config;
  cfg.t_max = 2.0;
  const Solution sol = simulate(built.system, built.x0, cfg);
  CHECK(sol.termination == Termination::HorizonTime);
  const auto simplex = ConvexSetDescription::simplex(3);
  for (const auto& iv : sol.arc.intervals()) {
    for (std::size_t k = 0; k < iv.t.size(); k += 7) {
      const auto x = sol.arc.state(iv, k);
      CHECK(simplex.margin(x.subspan(0, 3)) >= -1e-6);
    }
  }
}

TEST_CASE("projected_tracking respects the box constraint") {
  const BuiltScenario built = build_scenario("projected_tracking");
  SolverConfig cfg = built.config;
  cfg.t_max = 5.0;
  const Solution sol = simulate(built.system, built.x0, cfg);
  CHECK(sol.termination == Termination::HorizonTime);
  const double b = built.params.at("box_b");
  for (const auto& iv : sol.arc.intervals()) {
    for (std::size_t k = 0; k < iv.t.size(); k += 5) {
      const auto x = sol.arc.state(iv, k);
      CHECK(std::abs(x[0]) + std::abs(x[1]) <= b + 1e-6);
    }
  }
}

TEST_CASE("distributed_sign drives the agents toward consensus") {
  const BuiltScenario built = build_scenario("distributed_sign");
  const Solution sol = simulate(built.system, built.x0, built.config);
  CHECK(sol.termination != Termination::FlowSetExit);
  const auto& iv = sol.arc.intervals().back();
  const auto x = sol.arc.state(iv, iv.t.size() - 1);
  // Per decision coordinate, the spread across the five agents collapses
  // from 12 at the start to below 1.
  for (int c = 0; c < 5; ++c) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 5; ++i) {
      lo = std::min(lo, x[static_cast<std::size_t>(5 * i + c)]);
      hi = std::max(hi, x[static_cast<std::size_t>(5 * i + c)]);
    }
    CHECK(hi - lo < 1.0);
  }
  // Graph switches happened on schedule.
  CHECK(sol.jumps >= 10);
}

TEST_CASE("momentum_reset jumps wipe the momentum state on the timer") {
  const BuiltScenario built = build_scenario("momentum_reset");
  SolverConfig cfg = built.config;
  cfg.t_max = 20.0;
  const Solution sol = simulate(built.system, built.x0, cfg);
  REQUIRE(sol.jumps >= 2);
  const double T0 = built.params.at("T0");
  for (int k = 1; k <= 2; ++k) {
    const Vec pre = sol.arc.pre_jump_state(k);
    const Vec post = sol.arc.post_jump_state(k);
    CHECK(pre[2] == doctest::Approx(built.params.at("T")).epsilon(1e-6));
    CHECK(post[2] == doctest::Approx(T0));
    CHECK(post[1] == 0.0);  // alpha = 1 clears the momentum entirely
    CHECK(post[0] == pre[0]);
  }
}

TEST_CASE("obstacle_avoid starts with a deterministic mode jump") {
  const BuiltScenario built = build_scenario("obstacle_avoid");
  SolverConfig cfg = built.config;
  cfg.t_max = 1.0;
  const Solution sol = simulate(built.system, built.x0, cfg);
  REQUIRE(sol.jumps >= 1);
  const auto dom = sol.arc.domain();
  CHECK(std::abs(dom[0].t_end) < 1e-9);
  CHECK(sol.arc.post_jump_state(1).back() == doctest::Approx(1.0));
}

TEST_CASE("growing_timer_es matches its gradient-flow counterpart") {
  const BuiltScenario built = build_scenario("growing_timer_es");
  const Solution sol = simulate(built.system, built.x0, built.config);
  CHECK(sol.termination == Termination::HorizonTime);
  const HybridArc ref = reference_arc("growing_timer_es");
  // Same dimension by construction so the arcs are comparable.
  CHECK(ref.dim() == sol.arc.dim());
}
