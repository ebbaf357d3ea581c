#include "hsk/supervisors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsk {

void DwellParams::validate() const {
  if (!(N0 >= 1.0)) throw std::invalid_argument("DwellParams: N0 must be >= 1");
  if (!(eta1 > 0.0)) throw std::invalid_argument("DwellParams: eta1 must be positive");
}

void ActivationParams::validate() const {
  if (!(T0 >= 0.0)) throw std::invalid_argument("ActivationParams: T0 must be >= 0");
  if (!(eta2 >= 0.0 && eta2 < 1.0)) throw std::invalid_argument("ActivationParams: eta2 must lie in [0, 1)");
}

bool ActivationParams::is_unstable(int mode) const {
  return std::find(unstable_modes.begin(), unstable_modes.end(), mode) !=
         unstable_modes.end();
}

HybridFragment dwell_time_automaton(const DwellParams& p, const Selector& sel) {
  p.validate();
  HybridFragment f;
  f.dim = 1;
  f.flow_set = [N0 = p.N0](std::span<const double> x) {
    return std::min(x[0], N0 - x[0]);
  };
  f.flow = [eta1 = p.eta1, sel](std::span<const double>, std::span<double> out) {
    out[0] = sel.select(0.0, eta1);
  };
  f.jump_set = [N0 = p.N0](std::span<const double> x) {
    return std::min(x[0] - 1.0, N0 - x[0]);
  };
  f.jump = [](std::span<const double> x, std::span<double> out) {
    out[0] = x[0] - 1.0;
  };
  return f;
}

bool adt_verify(const HybridTimeDomain& domain, const DwellParams& p) {
  p.validate();
  const double tol = 1e-9;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    // Within one interval j - i = 0, so only later intervals can violate;
    // the tightest pair is (t_end of i, t_begin of j).
    for (std::size_t j = i + 1; j < domain.size(); ++j) {
      const double jumps = domain[j].j - domain[i].j;
      const double span = domain[j].t_begin - domain[i].t_end;
      if (jumps > p.eta1 * span + p.N0 + tol) return false;
    }
  }
  return true;
}

double ActivationMonitor::rate(double tau2, bool unstable) const {
  double base = sel.select(0.0, params.eta2);
  if (unstable) return base - 1.0;
  if (tau2 >= params.T0 - 1e-12) base = 0.0;  // saturate at the budget cap
  return base;
}

double ActivationMonitor::flow_margin(double tau2) const {
  return std::min(tau2, params.T0 - tau2);
}

ActivationMonitor activation_monitor(const ActivationParams& p,
                                     const Selector& sel) {
  p.validate();
  return ActivationMonitor{p, sel};
}

bool activation_verify(const std::vector<ModeSegment>& trace,
                       const ActivationParams& p) {
  p.validate();
  const std::size_t n = trace.size();
  if (n == 0) return true;
  // Prefix unstable time at each breakpoint (segment boundaries).
  std::vector<double> tpts, upre;
  tpts.reserve(n + 1);
  upre.reserve(n + 1);
  tpts.push_back(trace.front().t_begin);
  upre.push_back(0.0);
  for (const ModeSegment& seg : trace) {
    const double len = seg.t_end - seg.t_begin;
    if (len < 0.0) throw std::invalid_argument("activation_verify: segment with negative length");
    tpts.push_back(seg.t_end);
    upre.push_back(upre.back() + (p.is_unstable(seg.mode) ? len : 0.0));
  }
  const double tol = 1e-9;
  for (std::size_t i = 0; i < tpts.size(); ++i) {
    for (std::size_t j = i; j < tpts.size(); ++j) {
      const double unstable_time = upre[j] - upre[i];
      if (unstable_time > p.T0 + p.eta2 * (tpts[j] - tpts[i]) + tol) return false;
    }
  }
  return true;
}

HybridFragment periodic_reset_timer(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("periodic_reset_timer: period must be positive");
  HybridFragment f;
  f.dim = 1;
  f.flow_set = [T](std::span<const double> x) { return std::min(x[0], T - x[0]); };
  f.flow = [](std::span<const double>, std::span<double> out) { out[0] = 1.0; };
  f.jump_set = [T](std::span<const double> x) { return -std::fabs(x[0] - T); };
  f.jump = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
  return f;
}

double HysteresisSets::flow_margin(int mode, std::span<const double> u) const {
  return mode == 0 ? C0(u) : C1(u);
}

double HysteresisSets::jump_margin(int mode, std::span<const double> u) const {
  return mode == 0 ? D0(u) : D1(u);
}

HysteresisSets hysteresis_sets(
    const std::function<double(std::span<const double>)>& J, double J_star,
    double c0, double c10) {
  if (!J) throw std::invalid_argument("hysteresis_sets: cost function required");
  if (!(c0 > c10 && c10 > 0.0)) {
    throw std::invalid_argument("hysteresis_sets: thresholds must satisfy c0 > c10 > 0");
  }
  HysteresisSets h;
  h.C0 = [J, J_star, c0](std::span<const double> u) { return c0 - (J(u) - J_star); };
  h.C1 = [J, J_star, c10](std::span<const double> u) { return (J(u) - J_star) - c10; };
  h.D0 = [J, J_star, c0](std::span<const double> u) { return (J(u) - J_star) - c0; };
  h.D1 = [J, J_star, c10](std::span<const double> u) { return c10 - (J(u) - J_star); };
  return h;
}

bool margin_check(double lambda_s, double lambda_u, double chi, double eta1,
                  double eta2) {
  if (!(lambda_s > 0.0) || !(lambda_u > 0.0) || !(chi >= 1.0)) {
    throw std::invalid_argument("margin_check: need lambda_s, lambda_u > 0 and chi >= 1");
  }
  return lambda_s > eta1 * std::log(chi) + eta2 * (lambda_s + lambda_u);
}

HybridFragment slow_drift(
    double eta3, const ConvexSetDescription& set_Q, const Selector& sel,
    const std::function<Vec(std::span<const double>)>& direction) {
  if (!(eta3 >= 0.0)) throw std::invalid_argument("slow_drift: eta3 must be >= 0");
  HybridFragment f;
  f.dim = set_Q.dim();
  f.flow_set = [set_Q](std::span<const double> q) { return set_Q.margin(q); };
  f.flow = [eta3, set_Q, sel, direction](std::span<const double> q,
                                         std::span<double> out) {
    Vec d;
    if (direction) {
      d = direction(q);
    } else {
      d.resize(q.size());
      for (double& v : d) v = sel.select(-1.0, 1.0);
    }
    double norm2 = 0.0;
    for (double v : d) norm2 += v * v;
    double scale = eta3;
    if (norm2 > 1.0) scale /= std::sqrt(norm2);  // keep |q'| <= eta3
    for (double& v : d) v *= scale;
    const Vec proj = set_Q.tangent_project(q, d, 1e-7);
    std::copy(proj.begin(), proj.end(), out.begin());
  };
  f.jump_set = [](std::span<const double>) { return -1.0; };
  f.jump = [](std::span<const double> q, std::span<double> out) {
    std::copy(q.begin(), q.end(), out.begin());
  };
  return f;
}

namespace {

constexpr double kInfBarrier = 1e18;

}  // namespace

double ObstaclePartition::flow_margin(int q, std::span<const double> p) const {
  const double in_U = -diamond(p);  // outside the obstacle neighborhood
  const double jq = J_hat(q, p);
  const double jother = J_hat(3 - q, p);
  return std::min(in_U, chi * jother - jq);
}

double ObstaclePartition::jump_margin(int q, std::span<const double> p) const {
  const double in_U = -diamond(p);
  const double jq = J_hat(q, p);
  const double jother = J_hat(3 - q, p);
  return std::min(in_U, jq - (chi - lam) * jother);
}

ObstaclePartition obstacle_partition(
    const Vec& p0, double rho, double chi, double lam,
    const std::function<double(std::span<const double>)>& J,
    const Vec& u_star, double separation_delta) {
  if (p0.size() != 2 || u_star.size() != 2) {
    throw std::invalid_argument("obstacle_partition: planar points required");
  }
  if (!(rho > 0.0)) throw std::invalid_argument("obstacle_partition: rho must be positive");
  if (!(chi > 1.0)) throw std::invalid_argument("obstacle_partition: chi must exceed 1");
  if (!(lam > 0.0 && lam < chi - 1.0)) {
    throw std::invalid_argument("obstacle_partition: lam must lie in (0, chi-1)");
  }
  if (!J) throw std::invalid_argument("obstacle_partition: field J required");
  const double half_width = 2.0 * rho * std::sqrt(2.0);
  const double l1_norm = std::fabs(u_star[0] - p0[0]) + std::fabs(u_star[1] - p0[1]);
  if (l1_norm <= half_width + separation_delta) {
    throw std::domain_error("obstacle_partition: optimum too close to the obstacle");
  }

  const double c = p0[0] + p0[1];
  const double s2 = std::sqrt(2.0);
  // Signed distances into the four half-planes (positive inside).
  auto m1a = [c, half_width, s2](std::span<const double> p) {
    return (-p[0] + c - half_width - p[1]) / s2;
  };
  auto m1b = [c, half_width, s2](std::span<const double> p) {
    return (p[0] + c - half_width - p[1]) / s2;
  };
  auto m2a = [c, half_width, s2](std::span<const double> p) {
    return (p[1] - p[0] - c - half_width) / s2;
  };
  auto m2b = [c, half_width, s2](std::span<const double> p) {
    return (p[1] + p[0] - c - half_width) / s2;
  };

  ObstaclePartition part;
  part.chi = chi;
  part.lam = lam;
  part.L1 = [m1a, m1b](std::span<const double> p) { return std::max(m1a(p), m1b(p)); };
  part.L2 = [m2a, m2b](std::span<const double> p) { return std::max(m2a(p), m2b(p)); };
  part.diamond = [p0, half_width](std::span<const double> p) {
    return half_width - (std::fabs(p[0] - p0[0]) + std::fabs(p[1] - p0[1]));
  };

  // The mode region is a union of two half-planes, so its boundary is the
  // zero level of the larger margin; 1/max keeps the barrier finite on the
  // interior extension of either line.
  auto reciprocal = [](double d1, double d2) {
    const double d = std::max(d1, d2);
    if (d <= 0.0) return kInfBarrier;
    return std::min(1.0 / d, kInfBarrier);
  };
  part.barrier1 = [m1a, m1b, reciprocal](std::span<const double> p) {
    return reciprocal(m1a(p), m1b(p));
  };
  part.barrier2 = [m2a, m2b, reciprocal](std::span<const double> p) {
    return reciprocal(m2a(p), m2b(p));
  };

  part.J_hat = [J, b1 = part.barrier1, b2 = part.barrier2](
                   int q, std::span<const double> p) {
    const double b = q == 1 ? b1(p) : b2(p);
    if (b >= kInfBarrier) return kInfBarrier;
    return -J(p) + b;
  };
  part.J_hat_gradient = [jh = part.J_hat](int q, std::span<const double> p) {
    const double h = 1e-6;
    Vec g(2);
    Vec pp(p.begin(), p.end());
    for (int i = 0; i < 2; ++i) {
      pp[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] + h;
      const double fp = jh(q, pp);
      pp[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] - h;
      const double fm = jh(q, pp);
      pp[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
      g[static_cast<std::size_t>(i)] = (fp - fm) / (2.0 * h);
    }
    return g;
  };
  return part;
}

}  // namespace hsk
