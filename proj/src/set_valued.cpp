#include "hsk/set_valued.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hsk {

Selector Selector::constant(double value) {
  Selector s(Kind::Constant);
  s.value_ = value;
  return s;
}

Selector Selector::seeded_uniform(std::uint64_t seed) {
  Selector s(Kind::SeededUniform);
  s.stream_ = std::make_shared<std::mt19937_64>(seed);
  return s;
}

Selector Selector::custom(std::function<double(double, double)> fn) {
  Selector s(Kind::Custom);
  s.fn_ = std::move(fn);
  return s;
}

double Selector::select(double lo, double hi) const {
  if (lo > hi) throw std::invalid_argument("Selector: empty interval");
  switch (kind_) {
    case Kind::MaxRate: return hi;
    case Kind::MinRate: return lo;
    case Kind::Constant: return std::clamp(value_, lo, hi);
    case Kind::SeededUniform: {
      auto* rng = static_cast<std::mt19937_64*>(stream_.get());
      std::uniform_real_distribution<double> dist(lo, hi);
      return dist(*rng);
    }
    case Kind::Custom: {
      const double v = fn_(lo, hi);
      return std::clamp(v, lo, hi);
    }
  }
  return lo;
}

ConvexSetDescription ConvexSetDescription::interval(double a, double b) {
  if (a > b) throw std::invalid_argument("interval: a must be <= b");
  ConvexSetDescription s;
  s.kind_ = Kind::Interval;
  s.dim_ = 1;
  s.lower_ = {a};
  s.upper_ = {b};
  return s;
}

ConvexSetDescription ConvexSetDescription::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw std::invalid_argument("box: bounds must have equal positive size");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) throw std::invalid_argument("box: lower must be <= upper elementwise");
  }
  ConvexSetDescription s;
  s.kind_ = Kind::Box;
  s.dim_ = static_cast<int>(lower.size());
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

ConvexSetDescription ConvexSetDescription::halfspaces(Vec A, Vec b, int dim) {
  if (dim < 1 || b.empty() || A.size() != b.size() * static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("halfspaces: A must be m x dim with m = |b|");
  }
  ConvexSetDescription s;
  s.kind_ = Kind::Halfspaces;
  s.dim_ = dim;
  s.A_ = std::move(A);
  s.b_ = std::move(b);
  return s;
}

ConvexSetDescription ConvexSetDescription::simplex(int dim) {
  if (dim < 1) throw std::invalid_argument("simplex: dimension must be >= 1");
  ConvexSetDescription s;
  s.kind_ = Kind::Simplex;
  s.dim_ = dim;
  return s;
}

ConvexSetDescription ConvexSetDescription::hull(Vec vertices, int dim) {
  if (dim < 1 || vertices.empty() || vertices.size() % static_cast<std::size_t>(dim) != 0) {
    throw std::invalid_argument("hull: vertex list must be m x dim");
  }
  ConvexSetDescription s;
  s.kind_ = Kind::Hull;
  s.dim_ = dim;
  s.vertices_ = std::move(vertices);
  return s;
}

namespace {

// Distance from x to the convex hull of m row-major points, via projected
// gradient on barycentric weights.  Exact enough for membership tests on
// the small vertex lists used here.
double hull_distance(std::span<const double> x, const Vec& verts, int dim) {
  const std::size_t m = verts.size() / static_cast<std::size_t>(dim);
  Vec w(m, 1.0 / static_cast<double>(m));
  Vec p(static_cast<std::size_t>(dim));
  Vec grad(m);
  for (int iter = 0; iter < 400; ++iter) {
    std::fill(p.begin(), p.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (int d = 0; d < dim; ++d) p[static_cast<std::size_t>(d)] += w[i] * verts[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
    }
    for (std::size_t i = 0; i < m; ++i) {
      double g = 0.0;
      for (int d = 0; d < dim; ++d) {
        g += (p[static_cast<std::size_t>(d)] - x[static_cast<std::size_t>(d)]) * verts[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
      }
      grad[i] = g;
    }
    // Frank-Wolfe step toward the most improving vertex.
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (grad[i] < grad[best]) best = i;
    }
    const double step = 2.0 / (iter + 2.0);
    for (std::size_t i = 0; i < m; ++i) w[i] *= (1.0 - step);
    w[best] += step;
  }
  std::fill(p.begin(), p.end(), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (int d = 0; d < dim; ++d) p[static_cast<std::size_t>(d)] += w[i] * verts[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
  }
  double dist2 = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double e = p[static_cast<std::size_t>(d)] - x[static_cast<std::size_t>(d)];
    dist2 += e * e;
  }
  return std::sqrt(dist2);
}

// Solve the small symmetric system M y = r in place; returns false if M is
// numerically singular.
bool solve_sym(std::vector<double>& M, std::vector<double>& r, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::fabs(M[static_cast<std::size_t>(row * n + col)]) > std::fabs(M[static_cast<std::size_t>(piv * n + col)])) piv = row;
    }
    if (std::fabs(M[static_cast<std::size_t>(piv * n + col)]) < 1e-12) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(M[static_cast<std::size_t>(piv * n + c)], M[static_cast<std::size_t>(col * n + c)]);
      std::swap(r[static_cast<std::size_t>(piv)], r[static_cast<std::size_t>(col)]);
    }
    const double d = M[static_cast<std::size_t>(col * n + col)];
    for (int row = col + 1; row < n; ++row) {
      const double f = M[static_cast<std::size_t>(row * n + col)] / d;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) M[static_cast<std::size_t>(row * n + c)] -= f * M[static_cast<std::size_t>(col * n + c)];
      r[static_cast<std::size_t>(row)] -= f * r[static_cast<std::size_t>(col)];
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    double acc = r[static_cast<std::size_t>(row)];
    for (int c = row + 1; c < n; ++c) acc -= M[static_cast<std::size_t>(row * n + c)] * r[static_cast<std::size_t>(c)];
    r[static_cast<std::size_t>(row)] = acc / M[static_cast<std::size_t>(row * n + row)];
  }
  return true;
}

}  // namespace

double ConvexSetDescription::margin(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("margin: wrong dimension");
  switch (kind_) {
    case Kind::Interval:
    case Kind::Box: {
      double m = std::numeric_limits<double>::infinity();
      for (int i = 0; i < dim_; ++i) {
        m = std::min(m, x[static_cast<std::size_t>(i)] - lower_[static_cast<std::size_t>(i)]);
        m = std::min(m, upper_[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]);
      }
      return m;
    }
    case Kind::Halfspaces: {
      double m = std::numeric_limits<double>::infinity();
      const std::size_t rows = b_.size();
      for (std::size_t r = 0; r < rows; ++r) {
        double ax = 0.0, nrm2 = 0.0;
        for (int d = 0; d < dim_; ++d) {
          const double a = A_[r * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(d)];
          ax += a * x[static_cast<std::size_t>(d)];
          nrm2 += a * a;
        }
        const double nrm = std::sqrt(nrm2);
        m = std::min(m, nrm > 0.0 ? (b_[r] - ax) / nrm : (b_[r] >= 0.0 ? 0.0 : -std::numeric_limits<double>::infinity()));
      }
      return m;
    }
    case Kind::Simplex: {
      double m = std::numeric_limits<double>::infinity();
      double sum = 0.0;
      for (int i = 0; i < dim_; ++i) {
        m = std::min(m, x[static_cast<std::size_t>(i)]);
        sum += x[static_cast<std::size_t>(i)];
      }
      return std::min(m, -std::fabs(sum - 1.0));
    }
    case Kind::Hull:
      return -hull_distance(x, vertices_, dim_);
  }
  return -std::numeric_limits<double>::infinity();
}

Vec ConvexSetDescription::tangent_project(std::span<const double> x,
                                          std::span<const double> v,
                                          double tol) const {
  if (x.size() != static_cast<std::size_t>(dim_) || v.size() != static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("tangent_project: wrong dimension");
  }
  if (margin(x) < -tol) throw std::domain_error("tangent_project: point outside set");
  Vec d(v.begin(), v.end());

  switch (kind_) {
    case Kind::Interval:
    case Kind::Box: {
      for (int i = 0; i < dim_; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        if (x[k] <= lower_[k] + tol && d[k] < 0.0) d[k] = 0.0;
        if (x[k] >= upper_[k] - tol && d[k] > 0.0) d[k] = 0.0;
      }
      return d;
    }
    case Kind::Halfspaces: {
      // Active constraints at x; project v onto {d : a_i . d <= 0} by
      // enumerating KKT active subsets (the row counts here are small).
      std::vector<std::size_t> active;
      const std::size_t rows = b_.size();
      for (std::size_t r = 0; r < rows; ++r) {
        double ax = 0.0, nrm2 = 0.0;
        for (int c = 0; c < dim_; ++c) {
          const double a = A_[r * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)];
          ax += a * x[static_cast<std::size_t>(c)];
          nrm2 += a * a;
        }
        if (nrm2 > 0.0 && ax >= b_[r] - tol * std::sqrt(nrm2)) active.push_back(r);
      }
      const std::size_t m = active.size();
      if (m == 0) return d;
      if (m > 16) throw std::invalid_argument("tangent_project: too many active halfspaces");
      auto dot_row = [&](std::size_t r, std::span<const double> w) {
        double s = 0.0;
        for (int c = 0; c < dim_; ++c) s += A_[r * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)] * w[static_cast<std::size_t>(c)];
        return s;
      };
      const double feas_tol = 1e-10;
      for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<std::size_t> S;
        for (std::size_t i = 0; i < m; ++i) {
          if (mask & (std::size_t{1} << i)) S.push_back(active[i]);
        }
        // Candidate: projection of v onto the nullspace of rows in S,
        // d = v - A_S^T lambda with A_S A_S^T lambda = A_S v.
        Vec cand(v.begin(), v.end());
        std::vector<double> lam;
        const int ns = static_cast<int>(S.size());
        if (ns > 0) {
          std::vector<double> G(static_cast<std::size_t>(ns * ns));
          std::vector<double> rhs(static_cast<std::size_t>(ns));
          for (int i = 0; i < ns; ++i) {
            rhs[static_cast<std::size_t>(i)] = dot_row(S[static_cast<std::size_t>(i)], v);
            for (int jj = 0; jj < ns; ++jj) {
              double g = 0.0;
              for (int c = 0; c < dim_; ++c) {
                g += A_[S[static_cast<std::size_t>(i)] * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)] *
                     A_[S[static_cast<std::size_t>(jj)] * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)];
              }
              G[static_cast<std::size_t>(i * ns + jj)] = g;
            }
          }
          if (!solve_sym(G, rhs, ns)) continue;
          lam = rhs;
          bool lam_ok = true;
          for (double l : lam) {
            if (l < -feas_tol) { lam_ok = false; break; }
          }
          if (!lam_ok) continue;
          for (int i = 0; i < ns; ++i) {
            for (int c = 0; c < dim_; ++c) {
              cand[static_cast<std::size_t>(c)] -= lam[static_cast<std::size_t>(i)] * A_[S[static_cast<std::size_t>(i)] * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)];
            }
          }
        }
        bool feasible = true;
        for (std::size_t r : active) {
          double nrm2 = 0.0;
          for (int c = 0; c < dim_; ++c) {
            const double a = A_[r * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)];
            nrm2 += a * a;
          }
          if (dot_row(r, cand) > feas_tol * std::max(1.0, std::sqrt(nrm2))) { feasible = false; break; }
        }
        if (feasible) return cand;
      }
      throw std::runtime_error("tangent_project: active-set enumeration failed");
    }
    case Kind::Simplex: {
      // Tangent cone at x: {d : sum d = 0, d_i >= 0 where x_i = 0}.
      // Active-set sweep: pin the most violated zero coordinate, re-project
      // onto the sum constraint over the free coordinates, repeat.
      std::vector<bool> zero(static_cast<std::size_t>(dim_));
      std::vector<bool> pinned(static_cast<std::size_t>(dim_), false);
      for (int i = 0; i < dim_; ++i) zero[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] <= tol;
      for (int pass = 0; pass <= dim_; ++pass) {
        double mean = 0.0;
        int free_cnt = 0;
        for (int i = 0; i < dim_; ++i) {
          if (!pinned[static_cast<std::size_t>(i)]) {
            mean += v[static_cast<std::size_t>(i)];
            ++free_cnt;
          }
        }
        if (free_cnt == 0) {
          std::fill(d.begin(), d.end(), 0.0);
          return d;
        }
        mean /= free_cnt;
        int worst = -1;
        double worst_val = -1e-14;
        for (int i = 0; i < dim_; ++i) {
          const std::size_t k = static_cast<std::size_t>(i);
          d[k] = pinned[k] ? 0.0 : v[k] - mean;
          if (zero[k] && !pinned[k] && d[k] < worst_val) {
            worst_val = d[k];
            worst = i;
          }
        }
        if (worst < 0) return d;
        pinned[static_cast<std::size_t>(worst)] = true;
      }
      return d;
    }
    case Kind::Hull: {
      // Tangent cone generated by (p_i - x); nonnegative least squares via
      // cyclic coordinate descent on the generator weights.
      const std::size_t m = vertices_.size() / static_cast<std::size_t>(dim_);
      std::vector<Vec> g(m, Vec(static_cast<std::size_t>(dim_)));
      Vec g2(m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        for (int c = 0; c < dim_; ++c) {
          g[i][static_cast<std::size_t>(c)] = vertices_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)] - x[static_cast<std::size_t>(c)];
          g2[i] += g[i][static_cast<std::size_t>(c)] * g[i][static_cast<std::size_t>(c)];
        }
      }
      Vec lam(m, 0.0);
      Vec res(v.begin(), v.end());  // res = v - sum lam_i g_i
      for (int iter = 0; iter < 200 * static_cast<int>(m); ++iter) {
        double change = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          if (g2[i] <= 0.0) continue;
          double corr = 0.0;
          for (int c = 0; c < dim_; ++c) corr += res[static_cast<std::size_t>(c)] * g[i][static_cast<std::size_t>(c)];
          const double new_lam = std::max(0.0, lam[i] + corr / g2[i]);
          const double delta = new_lam - lam[i];
          if (delta != 0.0) {
            for (int c = 0; c < dim_; ++c) res[static_cast<std::size_t>(c)] -= delta * g[i][static_cast<std::size_t>(c)];
            lam[i] = new_lam;
            change += std::fabs(delta);
          }
        }
        if (change < 1e-14) break;
      }
      for (int c = 0; c < dim_; ++c) d[static_cast<std::size_t>(c)] = v[static_cast<std::size_t>(c)] - res[static_cast<std::size_t>(c)];
      return d;
    }
  }
  return d;
}

std::pair<double, double> sign_hull(double z) {
  if (z > 0.0) return {1.0, 1.0};
  if (z < 0.0) return {-1.0, -1.0};
  return {-1.0, 1.0};
}

Vec convex_combination(
    const std::vector<std::function<Vec(const Vec&)>>& fields,
    const Vec& weights, const Vec& x) {
  if (fields.size() != weights.size() || fields.empty()) {
    throw std::invalid_argument("convex_combination: one weight per field required");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("convex_combination: weights must be nonnegative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("convex_combination: weights must sum to 1");
  Vec acc;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    Vec vi = fields[i](x);
    if (acc.empty()) acc.assign(vi.size(), 0.0);
    if (vi.size() != acc.size()) throw std::invalid_argument("convex_combination: inconsistent field dimensions");
    for (std::size_t c = 0; c < vi.size(); ++c) acc[c] += weights[i] * vi[c];
  }
  return acc;
}

Vec best_response(const Vec& payoff) {
  if (payoff.empty()) throw std::invalid_argument("best_response: empty payoff");
  std::size_t k = 0;
  for (std::size_t i = 1; i < payoff.size(); ++i) {
    if (payoff[i] > payoff[k]) k = i;
  }
  Vec e(payoff.size(), 0.0);
  e[k] = 1.0;
  return e;
}

Vec sliding_rule(double c_value, const Vec& xi_J, const Vec& xi_c, double k,
                 const Selector& sel) {
  if (xi_J.size() != xi_c.size()) throw std::invalid_argument("sliding_rule: dimension mismatch");
  Vec out(xi_J.size());
  if (c_value < 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -k * xi_J[i];
  } else if (c_value > 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -k * xi_c[i];
  } else {
    const double lam = sel.select(0.0, 1.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = -k * (lam * xi_J[i] + (1.0 - lam) * xi_c[i]);
    }
  }
  return out;
}

double interval_select(double lo, double hi, const Selector& sel) {
  return sel.select(lo, hi);
}

}  // namespace hsk
