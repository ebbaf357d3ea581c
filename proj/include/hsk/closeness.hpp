// Graphical (tau, eps)-closeness between hybrid arcs: two arcs are close if,
// up to the horizon t + j <= tau, every sample of each arc has a counterpart
// on the other arc with the same jump index, time within eps, and state
// distance strictly below eps.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsk/core.hpp"

namespace hsk {

struct ClosenessWitness {
  double t = 0.0;      // sample time on the source arc
  int j = 0;           // shared jump index
  double s = 0.0;      // matched time on the other arc
  double dist = 0.0;   // state distance at the match
  bool forward = true; // true: a -> b direction, false: b -> a
};

struct ClosenessReport {
  double tau = 0.0;
  Vec eps_grid;
  bool found = false;          // false: closeness exceeds the grid
  double min_eps = 0.0;        // valid when found
  std::vector<ClosenessWitness> witnesses;
};

// Optional coordinate mask restricts the state distance to the listed
// coordinates (e.g. to ignore timer components); empty means all.
bool tau_eps_close(const HybridArc& a, const HybridArc& b, double tau,
                   double eps, const std::vector<int>& mask = {});

ClosenessReport min_epsilon(const HybridArc& a, const HybridArc& b, double tau,
                            const Vec& eps_grid,
                            const std::vector<int>& mask = {});

// One report per parameter value: build the system, simulate from x0, and
// measure closeness against the reference arc.
std::vector<std::pair<double, ClosenessReport>> closeness_curve(
    const std::function<HybridSystem(double)>& build, const Vec& params,
    const Vec& x0, const SolverConfig& cfg, const HybridArc& reference,
    double tau, const Vec& eps_grid, const std::vector<int>& mask = {});

}  // namespace hsk
