// Core types for hybrid dynamical systems H = (C, F, D, G): flow set, flow
// map, jump set, jump map.  Solutions are hybrid arcs parameterized by
// (t, j) where t is ordinary time and j counts jumps.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsk {

using Vec = std::vector<double>;

// Signed membership margin: >= 0 inside the set, < 0 outside, with
// magnitude a proxy for distance to the boundary.
using Margin = std::function<double(std::span<const double>)>;

// Vector field / map evaluated in place: out = f(x).  out has size dim.
using MapFn = std::function<void(std::span<const double>, std::span<double>)>;

struct HybridSystem {
  int dim = 0;
  Margin flow_set;   // C
  MapFn flow_map;    // F (single-valued selection)
  Margin jump_set;   // D
  MapFn jump_map;    // G (single-valued selection)
  // Optional per-step state stabilizer (e.g. renormalizing oscillator
  // coordinates back to the unit sphere).  Applied after accepted flow
  // steps only; must be a projection with no effect on exact states.
  std::function<void(std::span<double>)> stabilize;
};

// One flow interval [t_begin, t_end] x {j} of a hybrid time domain.
struct DomainInterval {
  double t_begin = 0.0;
  double t_end = 0.0;
  int j = 0;
};

using HybridTimeDomain = std::vector<DomainInterval>;

// A hybrid arc: per jump index, sampled times and states (row-major,
// dim doubles per sample).  Consecutive intervals share a time instant:
// the last sample of interval j is the pre-jump state and the first
// sample of interval j+1 the post-jump state.
class HybridArc {
 public:
  struct Interval {
    int j = 0;
    std::vector<double> t;
    std::vector<double> x;  // t.size() * dim values
  };

  HybridArc() = default;
  explicit HybridArc(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  std::vector<Interval>& intervals() { return intervals_; }

  void start_interval(int j, double t, std::span<const double> x);
  void push_sample(double t, std::span<const double> x);

  std::span<const double> state(const Interval& iv, std::size_t k) const {
    return {iv.x.data() + k * dim_, static_cast<std::size_t>(dim_)};
  }

  HybridTimeDomain domain() const;
  int jump_count() const {
    return intervals_.empty() ? 0 : intervals_.back().j;
  }
  double max_time() const {
    return intervals_.empty() ? 0.0 : intervals_.back().t.back();
  }
  std::size_t sample_count() const;

  // Pre-/post-jump states for jump number k (1-based like the jump index
  // it produces: jump k takes interval k-1 to interval k).
  Vec pre_jump_state(int k) const;
  Vec post_jump_state(int k) const;

  // Linear interpolation within the interval with jump index j.
  // Throws std::out_of_range if (t, j) is not in the domain (within tol).
  Vec sample_at(double t, int j, double tol = 1e-9) const;

  const Interval* find_interval(int j) const;

 private:
  int dim_ = 0;
  std::vector<Interval> intervals_;
};

enum class Termination {
  HorizonTime,         // flowed up to T_max
  HorizonJumps,        // reached J_max jumps (Zeno guard)
  FlowSetExit,         // left C with no jump available
  NoDynamicsFromPoint  // point in neither C nor D
};

std::string to_string(Termination t);

enum class JumpPolicy { JumpFirst, FlowFirst };

struct SolverConfig {
  double h = 1e-2;           // fixed RK4 flow step
  double t_max = 10.0;       // flow-time horizon
  int j_max = 1000;          // jump horizon / Zeno guard
  JumpPolicy policy = JumpPolicy::JumpFirst;
  double tol_mem = 1e-9;     // membership tolerance on margins
  double tol_event = 1e-10;  // bisection tolerance on event times
  std::uint64_t rng_seed = 0;
  int record_stride = 1;     // store every Nth accepted step
};

struct Solution {
  HybridArc arc;
  Termination termination = Termination::HorizonTime;
  int jumps = 0;
  double flow_time = 0.0;
  int zeno_warnings = 0;  // jumps separated by < 10 * tol_event flow time
  std::size_t steps_taken = 0;
};

Solution simulate(const HybridSystem& sys, const Vec& x0,
                  const SolverConfig& cfg);

// Inflated system H_rho: set margins relaxed by rho*sigma(x) and maps
// perturbed by a disturbance of magnitude at most rho*sigma(x), selected
// deterministically from the seed and the evaluation point.
HybridSystem inflate(const HybridSystem& sys, double rho,
                     const std::function<double(std::span<const double>)>& sigma,
                     std::uint64_t seed);

// Average of f(x, tau) over one period in tau (composite trapezoid rule).
Vec empirical_average(
    const std::function<Vec(const Vec&, double)>& f, double period,
    const Vec& x, int quad_points);

}  // namespace hsk
