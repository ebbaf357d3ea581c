#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hsk/core.hpp"

using namespace hsk;

namespace {

// Sawtooth timer on [0, T] with a decaying second state that halves at each
// reset.  Between resets x2 contracts by exp(-gamma*T), so the post-jump
// value after k resets has a closed form.
HybridSystem timer_system(double T, double gamma) {
  HybridSystem sys;
  sys.dim = 2;
  sys.flow_set = [T](std::span<const double> x) { return std::min(x[0], T - x[0]); };
  sys.flow_map = [gamma](std::span<const double> x, std::span<double> out) {
    out[0] = 1.0;
    out[1] = -gamma * x[1];
  };
  sys.jump_set = [T](std::span<const double> x) { return -std::abs(x[0] - T); };
  sys.jump_map = [](std::span<const double> x, std::span<double> out) {
    out[0] = 0.0;
    out[1] = 0.5 * x[1];
  };
  return sys;
}

HybridSystem ball_system(double g, double lambda) {
  HybridSystem sys;
  sys.dim = 2;
  sys.flow_set = [](std::span<const double> x) { return x[0]; };
  sys.flow_map = [g](std::span<const double> x, std::span<double> out) {
    out[0] = x[1];
    out[1] = -g;
  };
  sys.jump_set = [](std::span<const double> x) { return std::min(-x[0], -x[1]); };
  sys.jump_map = [lambda](std::span<const double> x, std::span<double> out) {
    out[0] = 0.0;
    out[1] = -lambda * x[1];
  };
  return sys;
}

}  // namespace

TEST_CASE("timer resets reproduce the closed-form post-jump sequence") {
  const double T = 10.0, gamma = 0.1;
  SolverConfig cfg;
  cfg.h = 0.01;
  cfg.t_max = 55.0;
  cfg.j_max = 10;
  const Solution sol = simulate(timer_system(T, gamma), {0.0, 10.0}, cfg);
  REQUIRE(sol.jumps >= 5);
  for (int k = 1; k <= 5; ++k) {
    const Vec post = sol.arc.post_jump_state(k);
    const double expected = 10.0 * std::exp(-k) * std::pow(2.0, -k);
    CHECK(post[0] == 0.0);
    CHECK(std::abs(post[1] - expected) < 1e-4);
  }
  // Jump k lands at flow time k*T.
  const auto dom = sol.arc.domain();
  CHECK(dom[1].t_begin == doctest::Approx(T).epsilon(1e-8));
  CHECK(dom[2].t_begin == doctest::Approx(2 * T).epsilon(1e-8));
}

TEST_CASE("sample_at interpolates within an interval") {
  SolverConfig cfg;
  cfg.h = 0.01;
  cfg.t_max = 30.0;
  cfg.j_max = 10;
  const Solution sol = simulate(timer_system(10.0, 0.1), {0.0, 10.0}, cfg);
  const Vec x = sol.arc.sample_at(5.0, 0);
  CHECK(x[0] == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(x[1] == doctest::Approx(10.0 * std::exp(-0.5)).epsilon(1e-6));
  CHECK_THROWS_AS((void)sol.arc.sample_at(25.0, 0), std::out_of_range);
  CHECK_THROWS_AS((void)sol.arc.sample_at(5.0, 99), std::out_of_range);
}

TEST_CASE("bouncing ball impact kinematics match the parabolic flight") {
  // Drop from 10 under g = 10: impact at t = sqrt(2) with speed 10*sqrt(2).
  SolverConfig cfg;
  cfg.h = 1e-3;
  cfg.t_max = 3.0;
  cfg.j_max = 5;
  const Solution sol = simulate(ball_system(10.0, 0.8), {10.0, 0.0}, cfg);
  REQUIRE(sol.jumps >= 1);
  const auto dom = sol.arc.domain();
  CHECK(dom[0].t_end == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  const Vec pre = sol.arc.pre_jump_state(1);
  const Vec post = sol.arc.post_jump_state(1);
  CHECK(pre[1] == doctest::Approx(-10.0 * std::sqrt(2.0)).epsilon(1e-5));
  CHECK(post[1] == doctest::Approx(0.8 * 10.0 * std::sqrt(2.0)).epsilon(1e-5));
}

TEST_CASE("zeno guard stops at the jump horizon") {
  SolverConfig cfg;
  cfg.h = 1e-3;
  cfg.t_max = 30.0;
  cfg.j_max = 12;
  const Solution sol = simulate(ball_system(10.0, 0.5), {10.0, 0.0}, cfg);
  CHECK(sol.termination == Termination::HorizonJumps);
  CHECK(sol.jumps == 12);
  CHECK(sol.flow_time < 10.0);  // geometric flight times sum below 3*sqrt(2)*2
}

TEST_CASE("termination cases: flow-set exit and dead points") {
  HybridSystem sys;
  sys.dim = 1;
  sys.flow_set = [](std::span<const double> x) { return 1.0 - x[0]; };
  sys.flow_map = [](std::span<const double>, std::span<double> out) { out[0] = 1.0; };
  sys.jump_set = [](std::span<const double>) { return -1.0; };
  sys.jump_map = [](std::span<const double> x, std::span<double> out) { out[0] = x[0]; };
  SolverConfig cfg;
  cfg.h = 0.01;
  cfg.t_max = 5.0;

  Solution sol = simulate(sys, {0.0}, cfg);
  CHECK(sol.termination == Termination::FlowSetExit);
  CHECK(sol.arc.max_time() == doctest::Approx(1.0).epsilon(1e-8));

  sol = simulate(sys, {2.0}, cfg);
  CHECK(sol.termination == Termination::NoDynamicsFromPoint);
  CHECK(sol.arc.sample_count() == 1);

  cfg.t_max = 3.0;
  sol = simulate(sys, {-3.0}, cfg);
  CHECK(sol.termination == Termination::HorizonTime);
  CHECK(sol.flow_time == doctest::Approx(3.0));
}

TEST_CASE("record stride subsamples without losing endpoints") {
  SolverConfig cfg;
  cfg.h = 0.01;
  cfg.t_max = 30.0;
  cfg.j_max = 10;
  const Solution dense = simulate(timer_system(10.0, 0.1), {0.0, 10.0}, cfg);
  cfg.record_stride = 10;
  const Solution sparse = simulate(timer_system(10.0, 0.1), {0.0, 10.0}, cfg);
  CHECK(sparse.jumps == dense.jumps);
  CHECK(sparse.arc.sample_count() < dense.arc.sample_count());
  for (std::size_t i = 0; i < sparse.arc.intervals().size(); ++i) {
    const auto& ds = dense.arc.intervals()[i];
    const auto& ss = sparse.arc.intervals()[i];
    CHECK(ss.t.front() == ds.t.front());
    CHECK(ss.t.back() == ds.t.back());
  }
}

TEST_CASE("RK4 convergence order on a harmonic oscillator exceeds 3.5") {
  HybridSystem sys;
  sys.dim = 2;
  sys.flow_set = [](std::span<const double>) { return 1.0; };
  sys.flow_map = [](std::span<const double> x, std::span<double> out) {
    out[0] = x[1];
    out[1] = -x[0];
  };
  sys.jump_set = [](std::span<const double>) { return -1.0; };
  sys.jump_map = [](std::span<const double> x, std::span<double> out) {
    std::copy(x.begin(), x.end(), out.begin());
  };
  auto error_at = [&](double h) {
    SolverConfig cfg;
    cfg.h = h;
    cfg.t_max = 2.0;
    const Solution sol = simulate(sys, {1.0, 0.0}, cfg);
    const auto& iv = sol.arc.intervals().back();
    const auto x = sol.arc.state(iv, iv.t.size() - 1);
    return std::hypot(x[0] - std::cos(2.0), x[1] + std::sin(2.0));
  };
  const double e1 = error_at(0.02), e2 = error_at(0.01);
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.5);
  CHECK(e2 < 1e-9);
}

TEST_CASE("inflation at rho = 0 is the identity and margins grow with rho") {
  const HybridSystem base = timer_system(10.0, 0.1);
  const auto sigma = [](std::span<const double>) { return 1.0; };
  const HybridSystem same = inflate(base, 0.0, sigma, 7);
  const Vec pts[] = {{0.3, 5.0}, {9.9, 1.0}, {4.0, -2.0}};
  for (const Vec& x : pts) {
    CHECK(same.flow_set(x) == base.flow_set(x));
    CHECK(same.jump_set(x) == base.jump_set(x));
    Vec fa(2), fb(2);
    base.flow_map(x, fa);
    same.flow_map(x, fb);
    CHECK(fa == fb);
  }
  const HybridSystem small = inflate(base, 0.01, sigma, 7);
  const HybridSystem big = inflate(base, 0.1, sigma, 7);
  for (const Vec& x : pts) {
    CHECK(small.flow_set(x) >= base.flow_set(x));
    CHECK(big.flow_set(x) >= small.flow_set(x));
    CHECK(big.jump_set(x) >= base.jump_set(x));
    // The map perturbation is bounded by rho * sigma.
    Vec fa(2), fb(2);
    base.flow_map(x, fa);
    big.flow_map(x, fb);
    CHECK(std::hypot(fb[0] - fa[0], fb[1] - fa[1]) <= 0.1 + 1e-12);
  }
  // Deterministic in the seed.
  const HybridSystem again = inflate(base, 0.1, sigma, 7);
  Vec fa(2), fb(2);
  big.flow_map(pts[0], fa);
  again.flow_map(pts[0], fb);
  CHECK(fa == fb);
}

TEST_CASE("empirical averaging of periodic forcing") {
  // 2*gbar*sin(tau)^2 averages to gbar over a period.
  const auto f = [](const Vec&, double tau) { return Vec{2.0 * 10.0 * std::sin(tau) * std::sin(tau)}; };
  const Vec avg = empirical_average(f, 2.0 * std::acos(-1.0), {0.0}, 20001);
  CHECK(std::abs(avg[0] - 10.0) < 1e-9);

  const auto g = [](const Vec& x, double tau) { return Vec{std::sin(tau), x[0]}; };
  const Vec avg2 = empirical_average(g, 2.0 * std::acos(-1.0), {-2.0}, 10001);
  CHECK(std::abs(avg2[0]) < 1e-9);
  CHECK(avg2[1] == doctest::Approx(-2.0));
}

TEST_CASE("simulate validates its inputs") {
  SolverConfig cfg;
  HybridSystem sys = timer_system(10.0, 0.1);
  CHECK_THROWS_AS(simulate(sys, {0.0}, cfg), std::invalid_argument);
  cfg.h = -1.0;
  CHECK_THROWS_AS(simulate(sys, {0.0, 1.0}, cfg), std::invalid_argument);
  HybridSystem empty;
  empty.dim = 1;
  CHECK_THROWS_AS(simulate(empty, {0.0}, SolverConfig{}), std::invalid_argument);
}
