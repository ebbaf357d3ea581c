#include "hsk/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace hsk {

namespace {

// Scratch buffers for one RK4 step, reused across the whole run so the
// hot loop performs no allocation.
struct Stepper {
  const HybridSystem* sys;
  Vec k1, k2, k3, k4, tmp, out;

  explicit Stepper(const HybridSystem& s)
      : sys(&s),
        k1(static_cast<std::size_t>(s.dim)),
        k2(static_cast<std::size_t>(s.dim)),
        k3(static_cast<std::size_t>(s.dim)),
        k4(static_cast<std::size_t>(s.dim)),
        tmp(static_cast<std::size_t>(s.dim)),
        out(static_cast<std::size_t>(s.dim)) {}

  // out = rk4(x, h); returns span over the internal buffer.
  std::span<const double> step(std::span<const double> x, double h) {
    const std::size_t n = k1.size();
    sys->flow_map(x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    sys->flow_map(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    sys->flow_map(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    sys->flow_map(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (sys->stabilize) sys->stabilize(out);
    return out;
  }
};

}  // namespace

Solution simulate(const HybridSystem& sys, const Vec& x0,
                  const SolverConfig& cfg) {
  if (sys.dim <= 0) throw std::invalid_argument("simulate: system dimension must be positive");
  if (x0.size() != static_cast<std::size_t>(sys.dim)) {
    throw std::invalid_argument("simulate: initial state has wrong dimension");
  }
  if (!(cfg.h > 0.0)) throw std::invalid_argument("simulate: step size must be positive");
  if (!sys.flow_set || !sys.flow_map || !sys.jump_set || !sys.jump_map) {
    throw std::invalid_argument("simulate: system data (C, F, D, G) must all be set");
  }

  Solution sol;
  sol.arc = HybridArc(sys.dim);
  Vec x = x0;
  Vec xevent(static_cast<std::size_t>(sys.dim));
  double t = 0.0;
  int j = 0;
  sol.arc.start_interval(0, t, x);

  const double tol = cfg.tol_mem;
  double cC = sys.flow_set(x);
  double cD = sys.jump_set(x);
  if (cC < -tol && cD < -tol) {
    sol.termination = Termination::NoDynamicsFromPoint;
    return sol;
  }

  Stepper stepper(sys);
  double last_jump_time = 0.0;
  bool have_jumped = false;
  int since_record = 0;
  bool recorded = true;  // is the current (t, x) stored in the arc?

  auto ensure_recorded = [&]() {
    if (!recorded) {
      sol.arc.push_sample(t, x);
      recorded = true;
      since_record = 0;
    }
  };

  // Applies the jump map at the current point.  Returns false when the
  // jump horizon is reached or the post-jump point supports no dynamics
  // (termination has been set in either case).
  auto do_jump = [&]() -> bool {
    ensure_recorded();
    if (j >= cfg.j_max) {
      sol.termination = Termination::HorizonJumps;
      return false;
    }
    if (have_jumped && t - last_jump_time < 10.0 * cfg.tol_event) {
      ++sol.zeno_warnings;
    }
    sys.jump_map(x, xevent);
    x = xevent;
    ++j;
    sol.jumps = j;
    have_jumped = true;
    last_jump_time = t;
    sol.arc.start_interval(j, t, x);
    since_record = 0;
    recorded = true;
    cC = sys.flow_set(x);
    cD = sys.jump_set(x);
    if (cC < -tol && cD < -tol) {
      sol.termination = Termination::NoDynamicsFromPoint;
      return false;
    }
    return true;
  };

  auto can_jump = [&]() -> bool {
    if (cD < -tol) return false;
    if (cfg.policy == JumpPolicy::JumpFirst) return true;
    return cC < -tol;  // flow-first: jump only when flowing is impossible
  };

  while (true) {
    while (can_jump()) {
      if (!do_jump()) {
        sol.flow_time = t;
        return sol;
      }
    }
    if (t >= cfg.t_max - cfg.tol_event) {
      ensure_recorded();
      sol.termination = Termination::HorizonTime;
      sol.flow_time = t;
      return sol;
    }
    if (cC < -tol) {
      ensure_recorded();
      sol.termination = Termination::FlowSetExit;
      sol.flow_time = t;
      return sol;
    }

    const double hs = std::min(cfg.h, cfg.t_max - t);
    std::span<const double> xn = stepper.step(x, hs);
    ++sol.steps_taken;
    const double cC1 = sys.flow_set(xn);
    const double cD1 = sys.jump_set(xn);

    // Candidate event fractions within the step, in [0, 1].
    double theta_exit = 2.0;  // flow-set exit
    double theta_jump = 2.0;  // jump-set entry (jump-first only)

    if (cC1 < -tol) {
      if (cC < 0.0) {
        theta_exit = 0.0;
      } else {
        double a = 0.0, b = 1.0;  // C(x(a)) >= 0 > C(x(b))
        while ((b - a) * hs > cfg.tol_event) {
          const double m = 0.5 * (a + b);
          if (sys.flow_set(stepper.step(x, m * hs)) >= 0.0) a = m; else b = m;
        }
        theta_exit = a;  // last point still in C (up to tol_event)
      }
    }
    if (cfg.policy == JumpPolicy::JumpFirst && cD < -tol && cD1 >= -tol) {
      if (cD1 >= 0.0) {
        double a = 0.0, b = 1.0;  // D(x(a)) < 0 <= D(x(b))
        while ((b - a) * hs > cfg.tol_event) {
          const double m = 0.5 * (a + b);
          if (sys.jump_set(stepper.step(x, m * hs)) < 0.0) a = m; else b = m;
        }
        theta_jump = b;  // first point inside D (up to tol_event)
      } else {
        theta_jump = 1.0;  // entered the membership tolerance band only
      }
    }

    if (theta_exit <= 1.0 &&
        (theta_jump > 1.0 || theta_exit <= theta_jump)) {
      // Left the flow set: stop at the boundary, then jump if D admits it.
      if (theta_exit > 0.0) {
        std::span<const double> xe = stepper.step(x, theta_exit * hs);
        std::copy(xe.begin(), xe.end(), x.begin());
        t += theta_exit * hs;
        sol.arc.push_sample(t, x);
        since_record = 0;
        recorded = true;
      }
      cC = sys.flow_set(x);
      cD = sys.jump_set(x);
      if (cD >= -tol) {
        if (!do_jump()) {
          sol.flow_time = t;
          return sol;
        }
        continue;
      }
      ensure_recorded();
      sol.termination = Termination::FlowSetExit;
      sol.flow_time = t;
      return sol;
    }

    if (theta_jump <= 1.0) {
      if (theta_jump < 1.0) {
        std::span<const double> xe = stepper.step(x, theta_jump * hs);
        std::copy(xe.begin(), xe.end(), x.begin());
        t += theta_jump * hs;
      } else {
        std::copy(xn.begin(), xn.end(), x.begin());
        t += hs;
      }
      sol.arc.push_sample(t, x);
      since_record = 0;
      recorded = true;
      cC = sys.flow_set(x);
      cD = sys.jump_set(x);
      continue;  // jump handled at the top of the loop
    }

    // Plain flow step.
    std::copy(xn.begin(), xn.end(), x.begin());
    t += hs;
    cC = cC1;
    cD = cD1;
    if (++since_record >= cfg.record_stride || t >= cfg.t_max - cfg.tol_event) {
      sol.arc.push_sample(t, x);
      since_record = 0;
      recorded = true;
    } else {
      recorded = false;
    }
  }
}

HybridSystem inflate(const HybridSystem& sys, double rho,
                     const std::function<double(std::span<const double>)>& sigma,
                     std::uint64_t seed) {
  if (rho < 0.0) throw std::invalid_argument("inflate: rho must be nonnegative");
  if (!sigma) throw std::invalid_argument("inflate: sigma must be set");

  HybridSystem out = sys;
  out.flow_set = [inner = sys.flow_set, rho, sigma](std::span<const double> x) {
    return inner(x) + rho * sigma(x);
  };
  out.jump_set = [inner = sys.jump_set, rho, sigma](std::span<const double> x) {
    return inner(x) + rho * sigma(x);
  };
  if (rho == 0.0) return out;  // maps are untouched: H_0 == H

  // Deterministic disturbance selection: a point of the closed unit ball
  // derived by hashing the evaluation point with the seed, so repeated
  // evaluation at the same state yields the same disturbance.
  const int dim = sys.dim;
  auto ball_point = [dim](std::span<const double> x, std::uint64_t s, Vec& d) {
    std::uint64_t h = s ^ 0x9e3779b97f4a7c15ull;
    for (double v : x) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      h ^= bits + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    std::mt19937_64 rng(h);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      d[static_cast<std::size_t>(i)] = gauss(rng);
      norm2 += d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i)];
    }
    const double norm = std::sqrt(norm2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double radius =
        norm > 0.0 ? std::pow(unif(rng), 1.0 / dim) / norm : 0.0;
    for (double& v : d) v *= radius;
  };

  out.flow_map = [inner = sys.flow_map, rho, sigma, ball_point, seed, dim](
                     std::span<const double> x, std::span<double> y) {
    inner(x, y);
    thread_local Vec d;
    d.resize(static_cast<std::size_t>(dim));
    ball_point(x, seed, d);
    const double scale = rho * sigma(x);
    for (int i = 0; i < dim; ++i) y[static_cast<std::size_t>(i)] += scale * d[static_cast<std::size_t>(i)];
  };
  out.jump_map = [inner = sys.jump_map, rho, sigma, ball_point, seed, dim](
                     std::span<const double> x, std::span<double> y) {
    inner(x, y);
    thread_local Vec d;
    d.resize(static_cast<std::size_t>(dim));
    ball_point(x, seed ^ 0xda3e39cb94b95bdbull, d);
    const double scale = rho * sigma(x);
    for (int i = 0; i < dim; ++i) y[static_cast<std::size_t>(i)] += scale * d[static_cast<std::size_t>(i)];
  };
  return out;
}

Vec empirical_average(const std::function<Vec(const Vec&, double)>& f,
                      double period, const Vec& x, int quad_points) {
  if (!(period > 0.0)) throw std::invalid_argument("empirical_average: period must be positive");
  if (quad_points < 2) throw std::invalid_argument("empirical_average: need at least 2 quadrature points");
  const double dtau = period / (quad_points - 1);
  Vec acc;
  for (int k = 0; k < quad_points; ++k) {
    const double tau = k * dtau;
    Vec v = f(x, tau);
    const double w = (k == 0 || k == quad_points - 1) ? 0.5 : 1.0;
    if (acc.empty()) acc.assign(v.size(), 0.0);
    if (v.size() != acc.size()) throw std::invalid_argument("empirical_average: inconsistent value dimension");
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += w * v[i];
  }
  for (double& a : acc) a *= dtau / period;
  return acc;
}

}  // namespace hsk
