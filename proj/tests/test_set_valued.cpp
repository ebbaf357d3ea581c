#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hsk/set_valued.hpp"

using namespace hsk;

TEST_CASE("selectors pick points of the interval") {
  CHECK(Selector::max_rate().select(-1.0, 3.0) == 3.0);
  CHECK(Selector::min_rate().select(-1.0, 3.0) == -1.0);
  CHECK(Selector::constant(0.25).select(0.0, 4.0) == doctest::Approx(0.25));
  CHECK(Selector::constant(9.0).select(0.0, 4.0) == doctest::Approx(4.0));
  const Selector a = Selector::seeded_uniform(42);
  const Selector b = Selector::seeded_uniform(42);
  for (int i = 0; i < 100; ++i) {
    const double va = a.select(-2.0, 5.0);
    CHECK(va == b.select(-2.0, 5.0));
    CHECK(va >= -2.0);
    CHECK(va <= 5.0);
  }
  const Selector c = Selector::custom([](double lo, double hi) { return 0.9 * lo + 0.1 * hi; });
  CHECK(c.select(0.0, 10.0) == doctest::Approx(1.0));
}

TEST_CASE("box tangent projection clips outward components on faces") {
  const auto box = ConvexSetDescription::box({0.0, 0.0}, {1.0, 1.0});
  // Left face, outward velocity: both components blocked or passed per face.
  Vec p = box.tangent_project(Vec{0.0, 0.5}, Vec{-1.0, 0.0});
  CHECK(p[0] == doctest::Approx(0.0));
  CHECK(p[1] == doctest::Approx(0.0));
  // Inward velocity passes unchanged.
  p = box.tangent_project(Vec{0.0, 0.5}, Vec{2.0, -0.5});
  CHECK(p[0] == doctest::Approx(2.0));
  CHECK(p[1] == doctest::Approx(-0.5));
  // Corner: only the inward-pointing part survives.
  p = box.tangent_project(Vec{1.0, 1.0}, Vec{1.0, -3.0});
  CHECK(p[0] == doctest::Approx(0.0));
  CHECK(p[1] == doctest::Approx(-3.0));
  // Interior points project to the identity.
  p = box.tangent_project(Vec{0.5, 0.5}, Vec{-7.0, 9.0});
  CHECK(p[0] == doctest::Approx(-7.0));
  CHECK(p[1] == doctest::Approx(9.0));
  CHECK_THROWS_AS(box.tangent_project(Vec{2.0, 0.5}, Vec{1.0, 0.0}), std::domain_error);
}

TEST_CASE("halfspace tangent projection removes the outward normal part") {
  // Single constraint -x1 - 2 x2 <= 2, active at (0, -1).
  const auto hs = ConvexSetDescription::halfspaces({-1.0, -2.0}, {2.0}, 2);
  CHECK(std::abs(hs.margin(Vec{0.0, -1.0})) < 1e-12);
  Vec p = hs.tangent_project(Vec{0.0, -1.0}, Vec{-1.0, -2.0});
  CHECK(std::hypot(p[0], p[1]) < 1e-12);
  // Tangential velocity (2, -1) is orthogonal to the normal and survives.
  p = hs.tangent_project(Vec{0.0, -1.0}, Vec{2.0, -1.0});
  CHECK(p[0] == doctest::Approx(2.0));
  CHECK(p[1] == doctest::Approx(-1.0));
  // Idempotence and the cone property at a general active velocity.
  const Vec v{-3.0, 1.0};
  p = hs.tangent_project(Vec{0.0, -1.0}, v);
  const Vec pp = hs.tangent_project(Vec{0.0, -1.0}, p);
  CHECK(std::abs(pp[0] - p[0]) < 1e-12);
  CHECK(std::abs(pp[1] - p[1]) < 1e-12);
  // A small step along the projection stays in the set.
  const double step = 1e-6;
  CHECK(hs.margin(Vec{0.0 + step * p[0], -1.0 + step * p[1]}) >= -1e-12);
}

TEST_CASE("simplex and interval margins") {
  const auto sx = ConvexSetDescription::simplex(3);
  CHECK(sx.margin(Vec{1.0 / 3, 1.0 / 3, 1.0 / 3}) >= -1e-12);
  CHECK(sx.margin(Vec{1.0, 0.0, 0.0}) >= -1e-12);
  CHECK(sx.margin(Vec{0.5, 0.6, -0.1}) < 0.0);
  CHECK(sx.margin(Vec{0.5, 0.2, 0.2}) < 0.0);  // mass 0.9: off the affine slice
  const auto iv = ConvexSetDescription::interval(-1.0, 2.0);
  CHECK(iv.margin(Vec{0.5}) == doctest::Approx(1.5));
  CHECK(iv.margin(Vec{3.0}) == doctest::Approx(-1.0));
}

TEST_CASE("sign hull covers the Krasovskii regularization") {
  CHECK(sign_hull(2.0) == std::pair{1.0, 1.0});
  CHECK(sign_hull(-0.5) == std::pair{-1.0, -1.0});
  CHECK(sign_hull(0.0) == std::pair{-1.0, 1.0});
}

TEST_CASE("convex combination mixes vector fields") {
  std::vector<std::function<Vec(const Vec&)>> fields = {
      [](const Vec&) { return Vec{-1.0, -1.0}; },
      [](const Vec&) { return Vec{-1.0, 0.25}; }};
  const Vec out = convex_combination(fields, {0.5, 0.5}, {0.0, 0.0});
  CHECK(out[0] == doctest::Approx(-1.0));
  CHECK(out[1] == doctest::Approx(-0.375));
  const Vec pure = convex_combination(fields, {0.0, 1.0}, {0.0, 0.0});
  CHECK(pure[1] == doctest::Approx(0.25));
}

TEST_CASE("best response picks the lowest-index maximizing vertex") {
  CHECK(best_response({1.0, 3.0, 2.0}) == Vec{0.0, 1.0, 0.0});
  CHECK(best_response({2.0, 2.0}) == Vec{1.0, 0.0});
  CHECK(best_response({-5.0}) == Vec{1.0});
}

TEST_CASE("sliding rule switches fields across the constraint surface") {
  const Vec xi_J{1.0, 0.0}, xi_c{0.0, 2.0};
  Vec v = sliding_rule(-0.5, xi_J, xi_c, 0.1);
  CHECK(v[0] == doctest::Approx(-0.1));
  CHECK(v[1] == doctest::Approx(0.0));
  v = sliding_rule(0.5, xi_J, xi_c, 0.1);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(-0.2));
  // On the surface the default selection blends 50/50.
  v = sliding_rule(0.0, xi_J, xi_c, 0.1);
  CHECK(v[0] == doctest::Approx(-0.05));
  CHECK(v[1] == doctest::Approx(-0.1));
  // A selection of lambda = 1 pins the objective field.
  v = sliding_rule(0.0, xi_J, xi_c, 0.1, Selector::constant(1.0));
  CHECK(v[0] == doctest::Approx(-0.1));
  CHECK(v[1] == doctest::Approx(0.0));
}

TEST_CASE("hull margin separates inside from outside") {
  // Triangle (0,0), (1,0), (0,1).
  const auto hull = ConvexSetDescription::hull({0.0, 0.0, 1.0, 0.0, 0.0, 1.0}, 2);
  // The hull distance is iterative, so membership is only near-exact.
  CHECK(hull.margin(Vec{0.25, 0.25}) > -0.01);
  CHECK(hull.margin(Vec{1.0, 1.0}) < -0.5);
  CHECK(hull.margin(Vec{-0.1, 0.5}) < -0.05);
}

TEST_CASE("interval_select honors the selector") {
  CHECK(interval_select(1.0, 4.0, Selector::max_rate()) == 4.0);
  CHECK(interval_select(1.0, 4.0, Selector::min_rate()) == 1.0);
  CHECK(interval_select(1.0, 4.0, Selector::constant(0.5)) == doctest::Approx(1.0));
}
