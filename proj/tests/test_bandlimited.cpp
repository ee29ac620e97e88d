#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "mobsamp/bandlimited.hpp"
#include "mobsamp/error.hpp"

using namespace mobsamp;
using std::numbers::pi;

namespace {

BandlimitedFunction cosine(int d, int axis, const ConvexBody& k) {
  Vec xi(d);
  xi[axis] = 1.0;
  return BandlimitedFunction(k, {xi, -xi}, {0.5, 0.5}, true);
}

BandlimitedFunction random_function(std::uint64_t seed, bool real = true, bool anchor = true) {
  CounterRng rng(seed);
  return synthesize(ConvexBody::ball(2, 1.0), 5, real, anchor, rng);
}

}  // namespace

TEST_SUITE("bandlimited") {
  TEST_CASE("single-term synthesis is a cosine with unit sup") {
    CounterRng rng(1);
    const auto f = synthesize(ConvexBody::ball(2, 1.0), 1, true, false, rng);
    REQUIRE(f.terms() == 2);
    CHECK(std::abs(f.coefficients()[0]) == doctest::Approx(0.5));
    CHECK(f.certified_sup().bound == doctest::Approx(1.0));
    // the sup is attained where the phase vanishes
    const Vec xi = f.frequencies()[0];
    const double phase = std::arg(f.coefficients()[0]);
    const Vec x = (-phase / (2 * pi * norm2(xi))) * xi;
    CHECK(f.evaluate(x) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("anchored corpus postconditions across 100 seeds") {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto f = random_function(s);
      REQUIRE(std::abs(f.evaluate(Vec{0, 0})) > 0.5);
      REQUIRE(f.coefficient_sum() <= 1.0 + 1e-12);
      REQUIRE(f.certified_sup().bound >= 0.999);
      REQUIRE(f.certified_sup().bound <= 1.0);
      for (const Vec& xi : f.frequencies()) REQUIRE(contains_frequency(f.spectrum(), xi));
    }
  }

  TEST_CASE("real-valued functions are real") {
    CounterRng pts(5);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto f = random_function(s);
      for (int i = 0; i < 100; ++i) {
        const Vec x{pts.uniform(-20, 20), pts.uniform(-20, 20)};
        REQUIRE(std::abs(f.evaluate_complex(x).imag()) < 1e-12);
      }
    }
  }

  TEST_CASE("construction validates spectrum and pairing") {
    const auto k = ConvexBody::ball(2, 1.0);
    CHECK_THROWS_AS(BandlimitedFunction(k, {Vec{1.1, 0}}, {1.0}), InvalidInput);
    CHECK_THROWS_AS(BandlimitedFunction(k, {Vec{0.5, 0}}, {1.0}, true), InvalidInput);
    CHECK_THROWS_AS(BandlimitedFunction(k, {}, {}), InvalidInput);
  }

  TEST_CASE("slices") {
    const auto k = ConvexBody::ball(2, 1.0);
    const auto f = cosine(2, 0, k);
    const auto g = slice(f, Vec{0, 0}, Vec{1, 0});
    for (double t : {0.0, 0.13, 0.5, 2.7}) CHECK(g.evaluate(Vec{t}) == doctest::Approx(std::cos(2 * pi * t)).epsilon(1e-13));
    const double a = 0.3;
    const auto h = slice(f, Vec{a, 0}, Vec{0, 1});
    CHECK(h.bandwidth() == 0.0);
    for (double t : {0.0, 1.0, -4.2}) CHECK(h.evaluate(Vec{t}) == doctest::Approx(std::cos(2 * pi * a)).epsilon(1e-13));
  }

  TEST_CASE("slice frequencies stay within the support function") {
    CounterRng rng(3);
    const ConvexBody shapes[] = {ConvexBody::ball(2, 1.0), ConvexBody::box(Vec{1, 0.5}), ConvexBody::ellipsoid(Vec{2, 1})};
    for (const auto& k : shapes) {
      for (int t = 0; t < 34; ++t) {
        const auto f = synthesize(k, 4, true, false, rng);
        const Vec theta = sample_direction(2, rng);
        const Vec y{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const auto g = slice(f, y, theta);
        const double h = support(k, theta);
        for (const Vec& nu : g.frequencies()) REQUIRE(std::abs(nu[0]) <= h + 1e-12);
      }
    }
  }

  TEST_CASE("slice compatibility and linearity") {
    CounterRng rng(4);
    for (std::uint64_t s = 0; s < 30; ++s) {
      const auto f = random_function(s, false, false);
      const auto g = random_function(s + 1000, false, false);
      const Vec theta = sample_direction(2, rng);
      const Vec y{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const auto sl = slice(f, y, theta);
      const double t = rng.uniform(-10, 10);
      CHECK(std::abs(sl.evaluate_complex(Vec{t}) - f.evaluate_complex(y + t * theta)) < 1e-12);
      const auto lc = linear_combination(0.3, f, -1.7, g);
      const Vec x{rng.uniform(-5, 5), rng.uniform(-5, 5)};
      CHECK(std::abs(lc.evaluate_complex(x) - (0.3 * f.evaluate_complex(x) - 1.7 * g.evaluate_complex(x))) < 1e-12);
    }
  }

  TEST_CASE("dilation scales frequencies") {
    const auto f = random_function(11);
    const auto g = dilate(f, 3.0);
    for (std::size_t j = 0; j < f.terms(); ++j) CHECK(norm(g.frequencies()[j] - 3.0 * f.frequencies()[j]) < 1e-15);
    CHECK(g.evaluate(Vec{0.1, -0.2}) == doctest::Approx(f.evaluate(Vec{0.3, -0.6})).epsilon(1e-12));
    CHECK(mean_width(g.spectrum()) == doctest::Approx(3 * mean_width(f.spectrum())));
  }

  TEST_CASE("complex extension") {
    const auto g = slice(cosine(1, 0, ConvexBody::ball(1, 1.0)), Vec{0.0}, Vec{1.0});
    const auto v = evaluate_complex(g, {0.0, 1.0});
    CHECK(std::abs(v) == doctest::Approx(std::cosh(2 * pi)).epsilon(1e-12));
    CHECK(std::abs(v) < std::exp(2 * pi));
    CHECK(evaluate_complex(g, {0.37, 0.0}).real() == doctest::Approx(g.evaluate(Vec{0.37})).epsilon(1e-13));
    CHECK_THROWS(evaluate_complex(g, {0.0, 60.0}));
  }

  TEST_CASE("growth bound over random slices") {
    CounterRng rng(6);
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto g = slice(random_function(s), Vec{0, 0}, sample_direction(2, rng));
      const std::complex<double> z{rng.uniform(-5, 5), rng.uniform(-2, 2)};
      CHECK(growth_bound_holds(g, z));
      // triangle-inequality oracle
      double tri = 0.0;
      for (std::size_t j = 0; j < g.terms(); ++j)
        tri += std::abs(g.coefficients()[j]) * std::exp(2 * pi * std::abs(g.frequencies()[j][0] * z.imag()));
      CHECK(std::abs(evaluate_complex(g, z)) <= tri * (1 + 1e-12));
    }
  }

  TEST_CASE("grid evaluation matches pointwise evaluation") {
    const auto g = slice(random_function(21), Vec{0, 0}, normalized(Vec{1, 3}));
    std::vector<double> out(2000);
    evaluate_grid(g, -3.0, 0.0137, out.size(), out.data());
    for (std::size_t i = 0; i < out.size(); i += 97) CHECK(std::abs(out[i] - g.evaluate(Vec{-3.0 + 0.0137 * i})) < 1e-12);
  }

  TEST_CASE("sup norm certificates") {
    const auto k = ConvexBody::ball(2, 1.0);
    const auto c1 = certify_sup_norm(cosine(2, 0, k), Window::cube(2, 0, 2), 1e-3);
    CHECK(c1.bound >= 1.0);
    CHECK(c1.bound <= 1.001);
    CHECK(c1.global);
    const auto f2 = linear_combination(0.5, cosine(2, 0, k), 0.5, cosine(2, 1, k));
    const auto c2 = certify_sup_norm(f2, Window::cube(2, 0, 2), 1e-3);
    CHECK(c2.bound >= 1.0);
    CHECK(c2.bound <= 1.001);
    CHECK_THROWS(certify_sup_norm(f2, Window::cube(2, 0, 0.5), 1e-3));
  }

  TEST_CASE("certified sup dominates a finer grid") {
    const Window w = Window::cube(2, 0, 2);
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto f = random_function(s, true, false);
      const auto cert = certify_sup_norm(f, w, 0.02);
      double mx = 0.0;
      const int n = 1000;
      for (int i = 0; i <= n; i += 3)
        for (int j = 0; j <= n; j += 3) mx = std::max(mx, std::abs(f.evaluate(Vec{2.0 * i / n, 2.0 * j / n})));
      REQUIRE(cert.bound >= mx);
    }
  }

  TEST_CASE("serialization lists every term") {
    const auto f = random_function(2);
    const std::string s = f.serialize();
    std::size_t lines = 0;
    for (char ch : s) lines += ch == '\n';
    CHECK(lines >= f.terms());
  }
}
