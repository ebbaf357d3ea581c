// Timers, switching monitors, and hysteresis constructions that shape
// hybrid time domains and mode logic: dwell-time automata, activation-time
// monitors, periodic reset timers, hysteresis switching sets, slow drifts,
// and the two-mode obstacle partition of the plane.
#pragma once

#include <functional>
#include <optional>

#include "hsk/core.hpp"
#include "hsk/set_valued.hpp"

namespace hsk {

// A small self-contained hybrid subsystem over its own coordinates, meant
// to be embedded into a larger state by scenario builders.
struct HybridFragment {
  int dim = 0;
  Margin flow_set;
  MapFn flow;
  Margin jump_set;
  MapFn jump;
};

struct DwellParams {
  double N0 = 1.0;   // jump budget (>= 1)
  double eta1 = 1.0; // average jump rate bound (> 0)
  void validate() const;
};

struct ActivationParams {
  double T0 = 0.0;   // activation-time budget (>= 0)
  double eta2 = 0.0; // activation rate, in [0, 1)
  std::vector<int> unstable_modes;
  bool is_unstable(int mode) const;
  void validate() const;
};

// Timer tau1 in [0, N0]; flows at a selected rate in [0, eta1] and pays one
// unit per jump (tau1+ = tau1 - 1, enabled on [1, N0]).
HybridFragment dwell_time_automaton(const DwellParams& p, const Selector& sel);

// True iff every pair (s,i) <= (t,j) of the domain satisfies the average
// dwell-time bound j - i <= eta1 (t - s) + N0.
bool adt_verify(const HybridTimeDomain& domain, const DwellParams& p);

// Activation-time monitor tau2 in [0, T0]: gains budget at a selected rate
// in [0, eta2] while the mode is stable and drains at rate 1 while the mode
// is unstable.  The selected rate clamps at tau2 = T0 so the budget
// saturates instead of leaving the flow set.
struct ActivationMonitor {
  ActivationParams params;
  Selector sel = Selector::max_rate();
  double rate(double tau2, bool unstable) const;
  double flow_margin(double tau2) const;
};

ActivationMonitor activation_monitor(const ActivationParams& p,
                                     const Selector& sel);

// Piecewise-constant mode trace segment.
struct ModeSegment {
  double t_begin = 0.0;
  double t_end = 0.0;
  int mode = 0;
};

// True iff total unstable time between any two trace points (s, t) is at
// most T0 + eta2 (t - s), checked at segment breakpoints.
bool activation_verify(const std::vector<ModeSegment>& trace,
                       const ActivationParams& p);

// Timer x1: x1' = 1 on [0, T], reset to 0 at x1 = T.
HybridFragment periodic_reset_timer(double T);

// Two-mode hysteresis sets around cost level J_star: mode 0 flows while
// J - J_star <= c0 and must jump once J - J_star >= c0; mode 1 flows while
// J - J_star >= c10 and must jump once J - J_star <= c10.  Requires
// c0 > c10 > 0 so the band (c10, c0) gives positive dwell.
struct HysteresisSets {
  std::function<double(std::span<const double>)> C0, C1, D0, D1;
  double flow_margin(int mode, std::span<const double> u) const;
  double jump_margin(int mode, std::span<const double> u) const;
};

HysteresisSets hysteresis_sets(
    const std::function<double(std::span<const double>)>& J, double J_star,
    double c0, double c10);

// Mode-switching stability margin: lambda_s > eta1 ln(chi) + eta2 (lambda_s
// + lambda_u).
bool margin_check(double lambda_s, double lambda_u, double chi, double eta1,
                  double eta2);

// Slowly drifting parameter q: q' = eta3 * d(q) with |d| <= 1, projected
// onto the tangent cone of set_Q; q is held across jumps.  The default
// direction draws each component from the selector over [-1, 1].
HybridFragment slow_drift(
    double eta3, const ConvexSetDescription& set_Q, const Selector& sel,
    const std::function<Vec(std::span<const double>)>& direction = {});

// Two-mode partition of the plane around a diamond-shaped obstacle
// neighborhood at p0: half-plane unions L1 (below the two diagonal lines)
// and L2 (above them), mode potentials Jhat_q = -J + B_q with reciprocal
// barriers on the active half-planes, and the hysteresis flow/jump sets
// parameterized by chi > 1 and 0 < lam < chi - 1.
struct ObstaclePartition {
  double chi = 2.0, lam = 0.5;
  std::function<double(std::span<const double>)> L1, L2;      // margins
  std::function<double(std::span<const double>)> diamond;     // margin
  std::function<double(std::span<const double>)> barrier1, barrier2;
  std::function<double(int q, std::span<const double>)> J_hat;
  std::function<Vec(int q, std::span<const double>)> J_hat_gradient;
  double flow_margin(int q, std::span<const double> p) const;
  double jump_margin(int q, std::span<const double> p) const;
};

ObstaclePartition obstacle_partition(
    const Vec& p0, double rho, double chi, double lam,
    const std::function<double(std::span<const double>)>& J,
    const Vec& u_star, double separation_delta = 1e-6);

}  // namespace hsk
