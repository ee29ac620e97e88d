#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mobsamp/convex_body.hpp"
#include "mobsamp/error.hpp"

using namespace mobsamp;
using std::numbers::pi;

namespace {

std::vector<ConvexBody> shapes(int d) {
  Vec a(d), s(d);
  for (int i = 0; i < d; ++i) {
    a[i] = 0.5 + 0.25 * i;
    s[i] = 1.0 + 0.5 * i;
  }
  std::vector<ConvexBody> out{ConvexBody::ball(d, 1.3), ConvexBody::box(a), ConvexBody::ellipsoid(s)};
  if (d == 2) {
    // regular hexagon
    std::vector<Vec> v, n;
    for (int k = 0; k < 6; ++k) {
      v.push_back(Vec{std::cos(k * pi / 3), std::sin(k * pi / 3)});
      n.push_back(Vec{std::cos(k * pi / 3 + pi / 6), std::sin(k * pi / 3 + pi / 6)});
    }
    out.push_back(ConvexBody::polytope(v, n));
  }
  return out;
}

}  // namespace

TEST_SUITE("convex_body") {
  TEST_CASE("support function closed forms") {
    CHECK(support(ConvexBody::ball(2, 3.0), normalized(Vec{0.3, -0.7})) == doctest::Approx(3.0));
    const double r = 1 / std::sqrt(2.0);
    CHECK(support(ConvexBody::box(Vec{1, 1}), Vec{r, r}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(support(inflate(ConvexBody::ball(2, 1.0), 0.5), Vec{0, 1}) == doctest::Approx(1.5));
    CHECK(support(ConvexBody::ellipsoid(Vec{2, 1}), Vec{r, r}) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
  }

  TEST_CASE("non-unit directions are rejected") {
    CHECK_THROWS_AS(support(ConvexBody::ball(2, 1.0), Vec{1, 1}), InvalidInput);
  }

  TEST_CASE("support is even, homogeneous and subadditive") {
    CounterRng rng(8);
    for (int d = 2; d <= 4; ++d) {
      for (const auto& k : shapes(d)) {
        for (int t = 0; t < 200; ++t) {
          const Vec u = sample_direction(d, rng), v = sample_direction(d, rng);
          CHECK(support(k, u) == doctest::Approx(support(k, -u)).epsilon(1e-13));
          CHECK(support_unchecked(k, 2.5 * u) == doctest::Approx(2.5 * support(k, u)).epsilon(1e-13));
          CHECK(support_unchecked(k, u + v) <= support(k, u) + support(k, v) + 1e-12);
        }
      }
    }
  }

  TEST_CASE("mean width of balls and cubes") {
    for (int d = 1; d <= 4; ++d)
      for (double R : {0.5, 1.0, 3.0}) CHECK(std::abs(mean_width(ConvexBody::ball(d, R)) - 2 * R) < 1e-8);
    // box of side R in the plane: 4R / pi
    CHECK(std::abs(mean_width(ConvexBody::box(Vec{0.75, 0.75})) - 4 * 1.5 / pi) < 1e-8);
    for (int d = 2; d <= 4; ++d) {
      Vec h(d);
      for (int i = 0; i < d; ++i) h[i] = 1.0;
      const double closed = 4 * unit_ball_volume(d - 1) / unit_ball_volume(d);
      CHECK(std::abs(mean_width(ConvexBody::box(h)) - closed) < 1e-5);
    }
    CHECK(std::abs(mean_width(ConvexBody::box(Vec{1, 1, 1})) - 3.0) < 1e-5);
  }

  TEST_CASE("mean width of an ellipse against the perimeter integral") {
    // W = perimeter / pi in the plane; perimeter by direct quadrature
    const double a = 2.0, b = 1.0;
    std::vector<double> x, w;
    gauss_legendre(200, 0.0, 2 * pi, x, w);
    double per = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) per += w[i] * std::hypot(a * std::sin(x[i]), b * std::cos(x[i]));
    CHECK(std::abs(mean_width(ConvexBody::ellipsoid(Vec{a, b})) - per / pi) < 1e-8);
  }

  TEST_CASE("Minkowski additivity of the mean width") {
    for (int d = 2; d <= 4; ++d)
      for (const auto& k : shapes(d))
        for (double kappa : {0.1, 0.5, 2.0}) CHECK(std::abs(mean_width(inflate(k, kappa)) - mean_width(k) - 2 * kappa) < 1e-8);
    const auto sq = ConvexBody::box(Vec{1, 1});
    CHECK(std::abs(mean_width(inflate(sq, 0.25)) - mean_width(sq) - 0.5) < 1e-8);
    CHECK(mean_width(inflate(sq, 0.0)) == doctest::Approx(mean_width(sq)).epsilon(1e-15));
    CHECK_THROWS(inflate(sq, -0.1));
  }

  TEST_CASE("mean width is monotone and below the diameter") {
    const auto small = ConvexBody::box(Vec{0.5, 0.5});
    const auto big = ConvexBody::ball(2, 0.75);
    for (const Vec& t : default_sphere_quadrature(2).nodes) REQUIRE(support(small, t) <= support(big, t) + 1e-15);
    CHECK(mean_width(small) <= mean_width(big));
    for (int d = 2; d <= 4; ++d)
      for (const auto& k : shapes(d)) CHECK(mean_width(k) <= diameter(k) + 1e-9);
  }

  TEST_CASE("diameters") {
    CHECK(diameter(ConvexBody::ball(3, 1.5)) == doctest::Approx(3.0));
    CHECK(diameter(ConvexBody::box(Vec{0.8})) == doctest::Approx(1.6));
    CHECK(diameter(ConvexBody::box(Vec{1, 1})) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(diameter(inflate(ConvexBody::ball(2, 1.0), 1.0)) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(diameter(ConvexBody::ellipsoid(Vec{1, 3})) == doctest::Approx(6.0).epsilon(1e-9));
  }

  TEST_CASE("frequency membership") {
    CHECK(contains_frequency(ConvexBody::ball(2, 1.0), Vec{0, 0}));
    CHECK_FALSE(contains_frequency(ConvexBody::box(Vec{1, 1}), Vec{1.0001, 0}));
    CHECK(contains_frequency(ConvexBody::ball(2, 1.0), Vec{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}));
    CHECK(contains_frequency(ConvexBody::ellipsoid(Vec{2, 1}), Vec{1.9, 0.0}));
    CHECK_FALSE(contains_frequency(ConvexBody::ellipsoid(Vec{2, 1}), Vec{1.9, 0.5}));
    const auto hex = shapes(2).back();
    CHECK(contains_frequency(hex, Vec{0.5, 0.5}));
    CHECK_FALSE(contains_frequency(hex, Vec{0.0, 0.9}));
    const auto fat = inflate(ConvexBody::box(Vec{1, 1}), 0.5);
    CHECK(contains_frequency(fat, Vec{1.3, 1.3}));
    CHECK_FALSE(contains_frequency(fat, Vec{1.4, 1.4}));
    CHECK_THROWS_AS(contains_frequency(inflate(ConvexBody::ellipsoid(Vec{2, 1}), 0.1), Vec{0, 0}),
                    ApproximateMembershipError);
  }

  TEST_CASE("invalid shapes are rejected") {
    CHECK_THROWS(ConvexBody::ball(2, 0.0));
    CHECK_THROWS(ConvexBody::box(Vec{1, -1}));
    // vertex list not closed under negation
    CHECK_THROWS(ConvexBody::polytope({Vec{1, 0}, Vec{0, 1}, Vec{-1, 0}}, {Vec{1, 0}}));
  }
}
