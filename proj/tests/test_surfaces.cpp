#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "mobsamp/core_geometry.hpp"
#include "mobsamp/error.hpp"
#include "mobsamp/surfaces.hpp"

using namespace mobsamp;
using std::numbers::pi;

namespace {

// Length of the lines x1 = k spacing inside B(0, R), integrated across them:
// at height y the disk meets 2 floor(sqrt(R^2 - y^2) / spacing) + 1 lines.
double chord_oracle(double spacing, double R) {
  const int n = 2000000;
  const double h = 2 * R / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = -R + (i + 0.5) * h;
    total += 2 * std::floor(std::sqrt(R * R - y * y) / spacing) + 1;
  }
  return total * h;
}

SurfaceSet grid(double spacing) {
  return SurfaceSet::union_of({SurfaceSet::hyperplane_family(Vec{1, 0}, spacing),
                               SurfaceSet::hyperplane_family(Vec{0, 1}, spacing)});
}

std::vector<double> radii_10_to_50() {
  std::vector<double> r;
  for (double x = 10; x <= 50; x += 5) r.push_back(x);
  return r;
}

}  // namespace

TEST_SUITE("surfaces") {
  TEST_CASE("ball measure of single hyperplanes") {
    CHECK(measure_in_ball(SurfaceSet::single_hyperplane(Vec{1, 0}), Vec{0, 0}, 1.0) == doctest::Approx(2.0));
    CHECK(measure_in_ball(SurfaceSet::single_hyperplane(Vec{0, 0, 1}), Vec{0, 0, 0}, 1.0) == doctest::Approx(pi));
    CHECK(measure_in_ball(SurfaceSet::single_hyperplane(Vec{1, 0}, 0.6), Vec{0, 0}, 1.0) == doctest::Approx(1.6));
    CHECK(measure_in_ball(SurfaceSet::single_hyperplane(Vec{1, 0}, 1.5), Vec{0, 0}, 1.0) == 0.0);
  }

  TEST_CASE("hyperplane family approaches its density") {
    const auto fam = SurfaceSet::hyperplane_family(Vec{1, 0}, 0.5);
    const double R = 50.0;
    const double m = measure_in_ball(fam, Vec{0, 0}, R);
    CHECK(m == doctest::Approx(chord_oracle(0.5, R)).epsilon(1e-4));
    CHECK(std::abs(m / (pi * R * R) - 2.0) < 0.02);
  }

  TEST_CASE("sphere caps") {
    const auto s = SurfaceSet::sphere_shell(Vec{0, 0, 0}, 1.0);
    CHECK(measure_in_ball(s, Vec{0, 0, 0}, 2.0) == doctest::Approx(4 * pi));
    // cap of the unit sphere cut by a ball of radius r centred on it: area pi r^2
    for (double r : {0.1, 0.5, 1.0})
      CHECK(measure_in_ball(s, Vec{0, 0, 1}, r) == doctest::Approx(pi * r * r).epsilon(1e-12));
    const auto c = SurfaceSet::sphere_shell(Vec{0, 0}, 1.0);
    // arc of the unit circle within distance r of a point on it: 4 asin(r/2)
    CHECK(measure_in_ball(c, Vec{1, 0}, 0.7) == doctest::Approx(4 * std::asin(0.35)).epsilon(1e-12));
    CHECK(measure_in_ball(c, Vec{5, 0}, 1.0) == 0.0);
  }

  TEST_CASE("translation invariance and monotonicity in r") {
    CounterRng rng(3);
    const SurfaceSet shapes[] = {grid(0.7), SurfaceSet::sphere_shell(Vec{0.2, -0.1}, 1.3),
                                 SurfaceSet::hyperplane_family(normalized(Vec{1, 2}), 0.4, 0.1, {0, 3})};
    for (const auto& s : shapes) {
      for (int t = 0; t < 50; ++t) {
        const Vec x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Vec v{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double r = rng.uniform(0.1, 4);
        CHECK(measure_in_ball(translated(s, v), x + v, r) == doctest::Approx(measure_in_ball(s, x, r)).epsilon(1e-9));
        double prev = 0.0;
        for (double rr = 0.1; rr < 5; rr += 0.3) {
          const double m = measure_in_ball(s, x, rr);
          CHECK(m >= prev - 1e-12);
          prev = m;
        }
      }
    }
  }

  TEST_CASE("weighted points refuse sub-resolution queries and match the plane") {
    const Window w = Window::cube(2, -3, 3);
    const auto plane = SurfaceSet::single_hyperplane(Vec{1, 0});
    const auto disc = discretize(plane, w, 0.01);
    CHECK_THROWS_AS(measure_in_ball(disc, Vec{0, 0}, 0.02), ResolutionError);
    for (double r : {0.1, 0.5, 1.0})
      CHECK(std::abs(measure_in_ball(disc, Vec{0.01, 0.3}, r) / measure_in_ball(plane, Vec{0.01, 0.3}, r) - 1) < 0.02);
    const auto disc3 = discretize(SurfaceSet::single_hyperplane(Vec{0, 0, 1}), Window::cube(3, -2, 2), 0.02);
    CHECK(std::abs(measure_in_ball(disc3, Vec{0.1, 0, 0}, 0.5) / (pi * 0.25) - 1) < 0.02);
  }

  TEST_CASE("point files") {
    const auto path = std::filesystem::temp_directory_path() / "mobsamp_points.txt";
    {
      std::ofstream f(path);
      f << "# x y weight\n";
      for (int i = -100; i <= 100; ++i) f << i * 0.01 << ", 0 0.01\n";
    }
    const auto s = read_point_file(path.string(), 2, 0.01);
    CHECK(measure_in_ball(s, Vec{0, 0}, 0.5) == doctest::Approx(1.01).epsilon(0.02));
    {
      std::ofstream f(path);
      f << "1 2\n";
    }
    CHECK_THROWS(read_point_file(path.string(), 2, 0.01));
    std::filesystem::remove(path);
  }

  TEST_CASE("regularity profiles") {
    const Window w = Window::cube(2, -5, 5);
    CounterRng rng(9);
    const auto one = regularity_profile(SurfaceSet::single_hyperplane(Vec{1, 0}), {0.01, 0.1, 0.3}, {w, 64, 64}, rng);
    for (double v : one.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(check_phi0_floor(one, true).passed);

    const auto fam = SurfaceSet::hyperplane_family(Vec{1, 0}, 1.0);
    const auto p = regularity_profile(fam, {0.1, 0.4, 0.6, 0.9}, {w, 256, 64}, rng);
    CHECK(p.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.values[2] > 1.0);
    CHECK(p.values[3] > 1.0);

    const auto sph = regularity_profile(SurfaceSet::sphere_shell(Vec{0, 0, 0}, 1.0), {0.1},
                                        {Window::cube(3, -2, 2), 16, 64}, rng);
    CHECK(std::abs(sph.values[0] - 1.0) < 0.005);

    CHECK_THROWS(regularity_profile(fam, {0.5, 1.5}, {w, 8, 8}, rng));
  }

  TEST_CASE("phi floor verdicts") {
    CounterRng rng(2);
    const Window w = Window::cube(2, -2, 2);
    const auto disc = discretize(SurfaceSet::single_hyperplane(Vec{1, 0}), w, 0.01);
    const auto p = regularity_profile(disc, {0.05, 0.1, 0.2, 0.4}, {Window::cube(2, -1, 1), 64, 64}, rng);
    CHECK(check_phi0_floor(p, true).passed);

    const auto far = SurfaceSet::sphere_shell(Vec{100, 100}, 1.0);
    const auto empty = regularity_profile(far, {0.1, 0.2, 0.3}, {w, 32, 0}, rng);
    CHECK(empty.empty_warning);
    CHECK_FALSE(has_positive_measure(far, w));
    const auto v = check_phi0_floor(empty, false);
    CHECK_FALSE(v.checked);
    CHECK(v.passed);
  }

  TEST_CASE("surface density estimates") {
    const Window w = Window::cube(2, -10, 10);
    CounterRng rng(17);
    const auto fam = surface_density(SurfaceSet::hyperplane_family(Vec{1, 0}, 0.5), radii_10_to_50(), {w, 256}, rng);
    CHECK(std::abs(fam.estimate - 2.0) < 0.04);
    const auto two = surface_density(grid(0.5), radii_10_to_50(), {w, 256}, rng);
    CHECK(std::abs(two.estimate - 4.0) < 0.08);
    const auto wide = surface_density(SurfaceSet::hyperplane_family(Vec{1, 0}, 1.0), radii_10_to_50(), {w, 256}, rng);
    CHECK(std::abs(wide.estimate / fam.estimate - 0.5) < 0.01);

    const auto single = surface_density(SurfaceSet::single_hyperplane(Vec{1, 0}), radii_10_to_50(), {w, 256}, rng);
    for (std::size_t i = 0; i < single.radii.size(); ++i)
      CHECK(single.inf_density[i] <= 2.0 / (pi * single.radii[i]) + 1e-12);
    CHECK(std::abs(single.estimate) < 0.01);
  }

  TEST_CASE("sinc product nodal set") {
    std::vector<SurfaceSet> fams;
    for (int n = 0; n < 2; ++n) fams.push_back(SurfaceSet::hyperplane_family(Vec::unit(2, n), 0.5, 0.0, {0}));
    const auto lambda = SurfaceSet::union_of(fams);
    // the excluded planes pass through the origin
    CHECK(measure_in_ball(lambda, Vec{0, 0}, 0.4) == 0.0);
    CHECK(measure_in_ball(lambda, Vec{0.5, 0.25}, 0.1) == doctest::Approx(0.2));
  }

  TEST_CASE("crossings are detected and excised") {
    const auto g = grid(1.0);
    CHECK(has_crossings(g));
    CHECK_FALSE(has_crossings(SurfaceSet::hyperplane_family(Vec{1, 0}, 1.0)));
    const auto ex = SurfaceSet::crossing_excised(g, 0.1);
    // near a crossing each line loses a segment of length 0.2
    CHECK(measure_in_ball(ex, Vec{0, 0}, 0.5) == doctest::Approx(4 * 0.4).epsilon(1e-9));
    CHECK(measure_in_ball(ex, Vec{0.5, 0.5}, 0.3) == 0.0);
  }
}
