#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hsk/supervisors.hpp"

using namespace hsk;

namespace {

HybridSystem from_fragment(const HybridFragment& f) {
  HybridSystem sys;
  sys.dim = f.dim;
  sys.flow_set = f.flow_set;
  sys.flow_map = f.flow;
  sys.jump_set = f.jump_set;
  sys.jump_map = f.jump;
  return sys;
}

}  // namespace

TEST_CASE("dwell automaton spends its budget and earns it back") {
  DwellParams p;
  p.N0 = 2.0;
  p.eta1 = 1.0;
  const HybridFragment f = dwell_time_automaton(p, Selector::max_rate());
  SolverConfig cfg;
  cfg.h = 1e-3;
  cfg.t_max = 3.0;
  cfg.j_max = 10;
  // Full budget allows two immediate jumps, then the timer must recharge.
  const Solution sol = simulate(from_fragment(f), {2.0}, cfg);
  const auto dom = sol.arc.domain();
  REQUIRE(sol.jumps >= 3);
  CHECK(std::abs(dom[0].t_end) < 1e-9);
  CHECK(std::abs(dom[1].t_end) < 1e-9);
  // Third jump needs the timer to climb from 0 back to 1 at rate eta1.
  CHECK(dom[2].t_end == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(adt_verify(dom, p));
}

TEST_CASE("adt_verify rejects domains that overdraw the jump budget") {
  DwellParams p;
  p.N0 = 2.0;
  p.eta1 = 1.0;
  // Three instantaneous jumps at t = 0 exceed N0 = 2.
  HybridTimeDomain bad = {{0.0, 0.0, 0}, {0.0, 0.0, 1}, {0.0, 0.0, 2}, {0.0, 5.0, 3}};
  CHECK_FALSE(adt_verify(bad, p));
  HybridTimeDomain ok = {{0.0, 0.0, 0}, {0.0, 0.0, 1}, {0.0, 1.0, 2}, {1.0, 5.0, 3}};
  CHECK(adt_verify(ok, p));
  // Sustained jumping faster than eta1 eventually fails even with budget.
  HybridTimeDomain fast;
  for (int j = 0; j < 8; ++j) fast.push_back({0.25 * j, 0.25 * (j + 1), j});
  CHECK_FALSE(adt_verify(fast, p));
  HybridTimeDomain slow;
  for (int j = 0; j < 8; ++j) slow.push_back({2.0 * j, 2.0 * (j + 1), j});
  CHECK(adt_verify(slow, p));
}

TEST_CASE("activation monitor rates: gain while stable, drain while unstable") {
  ActivationParams p;
  p.T0 = 50.0;
  p.eta2 = 0.05;
  p.unstable_modes = {1};
  const ActivationMonitor mon = activation_monitor(p, Selector::max_rate());
  CHECK(mon.rate(10.0, false) == doctest::Approx(0.05));
  CHECK(mon.rate(10.0, true) == doctest::Approx(0.05 - 1.0));
  // Budget saturates at T0 instead of leaving the flow set.
  CHECK(mon.rate(50.0, false) == 0.0);
  CHECK(mon.flow_margin(25.0) == doctest::Approx(25.0));
  CHECK(mon.flow_margin(-1.0) < 0.0);
  CHECK(mon.flow_margin(51.0) < 0.0);
  CHECK(p.is_unstable(1));
  CHECK_FALSE(p.is_unstable(0));

  ActivationParams bad = p;
  bad.eta2 = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("activation_verify bounds total unstable time") {
  ActivationParams p;
  p.T0 = 2.0;
  p.eta2 = 0.1;
  p.unstable_modes = {1};
  // 2 seconds unstable up front is exactly the budget.
  std::vector<ModeSegment> trace = {{0.0, 2.0, 1}, {2.0, 10.0, 0}};
  CHECK(activation_verify(trace, p));
  trace = {{0.0, 2.5, 1}, {2.5, 10.0, 0}};
  CHECK_FALSE(activation_verify(trace, p));
  // The rate term allows extra unstable time spread over a long window.
  trace = {{0.0, 2.0, 1}, {2.0, 22.0, 0}, {22.0, 24.0, 1}, {24.0, 100.0, 0}};
  CHECK(activation_verify(trace, p));
  // But not two back-to-back full drains.
  trace = {{0.0, 2.0, 1}, {2.0, 3.0, 0}, {3.0, 5.0, 1}, {5.0, 100.0, 0}};
  CHECK_FALSE(activation_verify(trace, p));
  CHECK(activation_verify({}, p));
}

TEST_CASE("periodic reset timer fragment") {
  const HybridFragment f = periodic_reset_timer(10.0);
  SolverConfig cfg;
  cfg.h = 0.01;
  cfg.t_max = 25.0;
  cfg.j_max = 5;
  const Solution sol = simulate(from_fragment(f), {0.0}, cfg);
  CHECK(sol.jumps == 2);
  const auto dom = sol.arc.domain();
  CHECK(dom[1].t_begin == doctest::Approx(10.0).epsilon(1e-8));
  CHECK(sol.arc.post_jump_state(1)[0] == 0.0);
  CHECK_THROWS_AS(periodic_reset_timer(0.0), std::invalid_argument);
}

TEST_CASE("hysteresis sets give a positive-width switching band") {
  const auto J = [](std::span<const double> u) { return u[0] * u[0]; };
  const HysteresisSets h = hysteresis_sets(J, 0.0, 2.0, 0.5);
  // Mode 0 flows while J <= c0 and must jump beyond it.
  CHECK(h.flow_margin(0, Vec{1.0}) == doctest::Approx(1.0));
  CHECK(h.jump_margin(0, Vec{1.0}) < 0.0);
  CHECK(h.jump_margin(0, Vec{2.0}) == doctest::Approx(2.0));
  // Mode 1 flows while J >= c10 and must jump below it.
  CHECK(h.flow_margin(1, Vec{1.0}) == doctest::Approx(0.5));
  CHECK(h.jump_margin(1, Vec{0.5}) == doctest::Approx(0.25));
  CHECK(h.flow_margin(1, Vec{0.5}) < 0.0);
  // Inside the band (c10, c0) both modes can flow: positive dwell.
  for (double u = 0.8; u <= 1.4; u += 0.1) {
    CHECK(h.flow_margin(0, Vec{u}) > 0.0);
    CHECK(h.flow_margin(1, Vec{u}) > 0.0);
  }
  CHECK_THROWS_AS(hysteresis_sets(J, 0.0, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("margin check for mode-switching stability") {
  CHECK(margin_check(1.0, 1.0, std::exp(1.0), 0.5, 0.1));
  CHECK_FALSE(margin_check(1.0, 1.0, std::exp(1.0), 2.0, 0.1));
  CHECK_FALSE(margin_check(1.0, 1.0, std::exp(1.0), 0.5, 0.5));
  CHECK_THROWS_AS(margin_check(-1.0, 1.0, 2.0, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("slow drift stays inside its constraint set") {
  const auto box = ConvexSetDescription::box({-1.0, -1.0}, {1.0, 1.0});
  const HybridFragment f = slow_drift(0.1, box, Selector::seeded_uniform(3));
  SolverConfig cfg;
  cfg.h = 0.01;
  cfg.t_max = 50.0;
  const Solution sol = simulate(from_fragment(f), {0.9, 0.0}, cfg);
  CHECK(sol.termination == Termination::HorizonTime);
  for (const auto& iv : sol.arc.intervals()) {
    for (std::size_t k = 0; k < iv.t.size(); ++k) {
      const auto q = sol.arc.state(iv, k);
      CHECK(box.margin(q) >= -1e-7);
    }
  }
  // Rate bound: displacement over the horizon is at most eta3 * t.
  const auto& iv = sol.arc.intervals().back();
  const auto q = sol.arc.state(iv, iv.t.size() - 1);
  CHECK(std::hypot(q[0] - 0.9, q[1]) <= 0.1 * 50.0 + 1e-9);
}

TEST_CASE("obstacle partition geometry and potentials") {
  const auto J = [](std::span<const double> p) {
    return -2.0 * ((p[0] - 4.0) * (p[0] - 4.0) + (p[1] - 2.0) * (p[1] - 2.0));
  };
  const ObstaclePartition part =
      obstacle_partition({0.0, 0.0}, 0.5, 2.0, 0.5, J, {4.0, 2.0});
  const double hw = 2.0 * 0.5 * std::sqrt(2.0);
  // Membership: far below the obstacle lies in L1, far above in L2.
  CHECK(part.L1(Vec{0.0, -3.0}) > 0.0);
  CHECK(part.L2(Vec{0.0, -3.0}) < 0.0);
  CHECK(part.L2(Vec{0.0, 3.0}) > 0.0);
  CHECK(part.L1(Vec{0.0, 3.0}) < 0.0);
  // The diamond margin is positive at the obstacle center only.
  CHECK(part.diamond(Vec{0.0, 0.0}) == doctest::Approx(hw));
  CHECK(part.diamond(Vec{3.0, 0.0}) < 0.0);
  // Potentials: finite inside the active region, huge when its barrier
  // saturates, and the gradient matches a finite-difference probe.
  const Vec probe{1.0, -3.0};
  CHECK(part.J_hat(1, probe) < 1e17);
  CHECK(part.J_hat(2, probe) > part.J_hat(1, probe));
  const Vec g = part.J_hat_gradient(1, probe);
  const double h = 1e-5;
  const double fd =
      (part.J_hat(1, Vec{1.0 + h, -3.0}) - part.J_hat(1, Vec{1.0 - h, -3.0})) / (2.0 * h);
  CHECK(g[0] == doctest::Approx(fd).epsilon(1e-4));
  // Hysteresis logic: in the favored region the mode keeps flowing.
  CHECK(part.flow_margin(1, probe) > 0.0);
  CHECK(part.jump_margin(1, probe) < 0.0);

  // An optimum inside the inflated obstacle is rejected.
  CHECK_THROWS_AS(obstacle_partition({0.0, 0.0}, 0.5, 2.0, 0.5, J, {0.2, 0.2}),
                  std::domain_error);
  CHECK_THROWS_AS(obstacle_partition({0.0, 0.0}, 0.5, 2.0, 1.5, J, {4.0, 2.0}),
                  std::invalid_argument);
}
