#include "hsk/closeness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsk {

namespace {

double masked_dist(std::span<const double> x, std::span<const double> y,
                   const std::vector<int>& mask) {
  double acc = 0.0;
  if (mask.empty()) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = x[i] - y[i];
      acc += e * e;
    }
  } else {
    for (int c : mask) {
      const double e = x[static_cast<std::size_t>(c)] - y[static_cast<std::size_t>(c)];
      acc += e * e;
    }
  }
  return std::sqrt(acc);
}

// Interpolated state of interval iv at time s (s within the interval).
void interp_state(const HybridArc& arc, const HybridArc::Interval& iv,
                  double s, Vec& out) {
  auto it = std::lower_bound(iv.t.begin(), iv.t.end(), s);
  std::size_t hi = static_cast<std::size_t>(it - iv.t.begin());
  if (hi == 0) hi = 1;
  if (hi >= iv.t.size()) hi = iv.t.size() - 1;
  const std::size_t lo = hi - 1;
  auto a = arc.state(iv, lo);
  auto b = arc.state(iv, hi);
  const double t0 = iv.t[lo], t1 = iv.t[hi];
  const double w = t1 > t0 ? std::clamp((s - t0) / (t1 - t0), 0.0, 1.0) : 0.0;
  out.assign(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * (b[i] - a[i]);
}

// Checks the directional condition "every sample of a up to the horizon has
// a match on b"; optionally records the best match per sample.
bool one_sided(const HybridArc& a, const HybridArc& b, double tau, double eps,
               const std::vector<int>& mask, bool forward,
               std::vector<ClosenessWitness>* witnesses) {
  Vec tmp;
  for (const auto& iv : a.intervals()) {
    const HybridArc::Interval* biv = b.find_interval(iv.j);
    for (std::size_t k = 0; k < iv.t.size(); ++k) {
      const double t = iv.t[k];
      if (t + iv.j > tau) continue;
      if (biv == nullptr) return false;
      const double lo = std::max(t - eps, biv->t.front());
      const double hi = std::min(t + eps, biv->t.back());
      if (lo > hi) return false;
      auto xs = a.state(iv, k);

      double best_dist = std::numeric_limits<double>::infinity();
      double best_s = lo;
      auto consider = [&](double s) {
        interp_state(b, *biv, s, tmp);
        const double d = masked_dist(xs, tmp, mask);
        if (d < best_dist) {
          best_dist = d;
          best_s = s;
        }
      };
      consider(std::clamp(t, lo, hi));
      consider(lo);
      if (hi != lo) consider(hi);
      auto first = std::lower_bound(biv->t.begin(), biv->t.end(), lo);
      auto last = std::upper_bound(biv->t.begin(), biv->t.end(), hi);
      for (auto it = first; it != last; ++it) {
        if (best_dist < eps && witnesses == nullptr) break;
        consider(*it);
      }
      if (!(best_dist < eps)) return false;
      if (witnesses != nullptr) {
        witnesses->push_back({t, iv.j, best_s, best_dist, forward});
      }
    }
  }
  return true;
}

}  // namespace

bool tau_eps_close(const HybridArc& a, const HybridArc& b, double tau,
                   double eps, const std::vector<int>& mask) {
  if (a.dim() != b.dim()) throw std::invalid_argument("tau_eps_close: arcs must share state dimension");
  if (!(eps > 0.0)) throw std::invalid_argument("tau_eps_close: eps must be positive");
  return one_sided(a, b, tau, eps, mask, true, nullptr) &&
         one_sided(b, a, tau, eps, mask, false, nullptr);
}

ClosenessReport min_epsilon(const HybridArc& a, const HybridArc& b, double tau,
                            const Vec& eps_grid,
                            const std::vector<int>& mask) {
  if (!std::is_sorted(eps_grid.begin(), eps_grid.end())) {
    throw std::invalid_argument("min_epsilon: eps grid must be ascending");
  }
  ClosenessReport report;
  report.tau = tau;
  report.eps_grid = eps_grid;
  for (double eps : eps_grid) {
    if (tau_eps_close(a, b, tau, eps, mask)) {
      report.found = true;
      report.min_eps = eps;
      one_sided(a, b, tau, eps, mask, true, &report.witnesses);
      one_sided(b, a, tau, eps, mask, false, &report.witnesses);
      return report;
    }
  }
  return report;  // exceeds grid
}

std::vector<std::pair<double, ClosenessReport>> closeness_curve(
    const std::function<HybridSystem(double)>& build, const Vec& params,
    const Vec& x0, const SolverConfig& cfg, const HybridArc& reference,
    double tau, const Vec& eps_grid, const std::vector<int>& mask) {
  std::vector<std::pair<double, ClosenessReport>> out;
  out.reserve(params.size());
  for (double p : params) {
    const HybridSystem sys = build(p);
    const Solution sol = simulate(sys, x0, cfg);
    out.emplace_back(p, min_epsilon(sol.arc, reference, tau, eps_grid, mask));
  }
  return out;
}

}  // namespace hsk
