// Set-valued primitives (Krasovskii hulls, convex combinations, tangent-cone
// projections, best responses) and the selector mechanism that turns
// differential/difference inclusions into simulatable single-valued maps.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>

#include "hsk/core.hpp"

namespace hsk {

// Picks one point from an interval [lo, hi].  The seeded-uniform kind draws
// from a private stream, so a given seed reproduces the same selections in
// the same order.
class Selector {
 public:
  enum class Kind { MaxRate, MinRate, Constant, SeededUniform, Custom };

  static Selector max_rate() { return Selector(Kind::MaxRate); }
  static Selector min_rate() { return Selector(Kind::MinRate); }
  static Selector constant(double value);
  static Selector seeded_uniform(std::uint64_t seed);
  static Selector custom(std::function<double(double, double)> fn);

  double select(double lo, double hi) const;
  Kind kind() const { return kind_; }

 private:
  explicit Selector(Kind k) : kind_(k) {}
  Kind kind_;
  double value_ = 0.0;
  std::shared_ptr<void> stream_;  // SeededUniform engine
  std::function<double(double, double)> fn_;
};

// Description of the convex constraint sets used by the toolkit: intervals,
// boxes, intersections of halfspaces (A x <= b), the unit simplex, and
// finite convex hulls.
class ConvexSetDescription {
 public:
  enum class Kind { Interval, Box, Halfspaces, Simplex, Hull };

  static ConvexSetDescription interval(double a, double b);
  static ConvexSetDescription box(Vec lower, Vec upper);
  // A is m x dim row-major; the set is {x : A x <= b}.
  static ConvexSetDescription halfspaces(Vec A, Vec b, int dim);
  static ConvexSetDescription simplex(int dim);
  // vertices is m x dim row-major.
  static ConvexSetDescription hull(Vec vertices, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  // Signed membership margin: >= 0 inside (0 on equality-constrained sets
  // such as the simplex), negative outside.
  double margin(std::span<const double> x) const;

  // Euclidean projection of v onto the tangent cone of the set at x.
  // Throws std::domain_error when x is outside the set (margin < -tol).
  Vec tangent_project(std::span<const double> x, std::span<const double> v,
                      double tol = 1e-9) const;

 private:
  Kind kind_ = Kind::Box;
  int dim_ = 0;
  Vec lower_, upper_;  // interval / box
  Vec A_, b_;          // halfspaces
  Vec vertices_;       // hull
};

// Krasovskii regularization of sign: [1,1] for z>0, [-1,-1] for z<0, and
// the full convex hull [-1,1] at z=0.
std::pair<double, double> sign_hull(double z);

// Sum of w_i * f_i(x) for nonnegative weights summing to 1.
Vec convex_combination(
    const std::vector<std::function<Vec(const Vec&)>>& fields,
    const Vec& weights, const Vec& x);

// Vertex e_k of the unit simplex with k = argmax payoff; ties broken toward
// the lowest index.
Vec best_response(const Vec& payoff);

// Switching rule across the constraint surface c = 0: inside (c < 0) follow
// -k*xi_J, outside (c > 0) follow -k*xi_c, and on the surface blend with a
// selected weight lambda in [0, 1] (default 0.5).
Vec sliding_rule(double c_value, const Vec& xi_J, const Vec& xi_c, double k,
                 const Selector& sel = Selector::constant(0.5));

double interval_select(double lo, double hi, const Selector& sel);

}  // namespace hsk
