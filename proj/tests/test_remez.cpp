#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mobsamp/error.hpp"
#include "mobsamp/remez.hpp"
#include "mobsamp/scan1d.hpp"

using namespace mobsamp;
using std::numbers::pi;

namespace {

RealFunction1D cos1d() {
  RealFunction1D g;
  g.value = [](double t) { return std::cos(2 * pi * t); };
  g.bandwidth = 1.0;
  return g;
}

RealFunction1D constant1d(double c) {
  RealFunction1D g;
  g.value = [c](double) { return c; };
  g.bandwidth = 0.0;
  return g;
}

// Anchored one-dimensional slice through the origin.
RealFunction1D anchored_slice(std::uint64_t seed, double& sigma) {
  CounterRng rng(seed);
  const auto f = synthesize(ConvexBody::ball(2, 1.0), 6, true, true, rng);
  const auto g = slice(f, Vec{0, 0}, sample_direction(2, rng));
  sigma = std::max(g.bandwidth(), 1e-3);
  return as_real_function(g);
}

// Riemann-scan oracle for the sublevel measure on [0, R).
double scan_measure(const RealFunction1D& g, double R, double eps, int n) {
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += std::abs(g.value((i + 0.5) * R / n)) < eps;
  return R * hits / n;
}

}  // namespace

TEST_SUITE("remez") {
  TEST_CASE("sublevel measures of a cosine") {
    CHECK(sublevel_measure(cos1d(), 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    for (double eps : {std::sin(pi / 12), 0.01, 0.5, 0.9}) {
      const double closed = 2 / pi * std::asin(eps);
      CHECK(sublevel_measure(cos1d(), 1.0, eps) == doctest::Approx(closed).epsilon(1e-9));
      CHECK(std::abs(scan_measure(cos1d(), 1.0, eps, 1000000) - closed) < 1e-5);
    }
  }

  TEST_CASE("sublevel measure is monotone in epsilon and R") {
    double sigma = 0.0;
    const auto g = anchored_slice(3, sigma);
    double prev = 0.0;
    for (double eps : epsilon_grid()) {
      const double m = sublevel_measure(g, 6.0, eps);
      CHECK(m >= prev - 1e-12);
      CHECK(m <= 6.0);
      prev = m;
    }
    prev = 0.0;
    for (double R = 1.0; R <= 8.0; R += 1.0) {
      const double m = sublevel_measure(g, R, 0.3);
      CHECK(m >= prev - 1e-12);
      prev = m;
    }
    CHECK_THROWS(sublevel_measure(g, 6.0, 0.0));
  }

  TEST_CASE("sublevel measure agrees with a Riemann scan on random slices") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      double sigma = 0.0;
      const auto g = anchored_slice(s, sigma);
      for (double eps : {0.05, 0.2}) CHECK(std::abs(sublevel_measure(g, 4.0, eps) - scan_measure(g, 4.0, eps, 400000)) < 1e-4);
    }
  }

  TEST_CASE("Remez with F the whole interval passes for C = 1") {
    const auto r = remez_check(cos1d(), 1.0, 1.0, {{0.0, 1.0}}, 1.0);
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.sup_on_f == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("Remez on a cosine with F around a zero") {
    const IntervalSet F{{0.2, 0.3}};
    const auto r = remez_check(cos1d(), 1.0, 1.0, F, 1.0);
    CHECK(r.measure_f == doctest::Approx(0.1));
    CHECK(r.sup_on_f == doctest::Approx(std::cos(0.4 * pi)).epsilon(1e-9));
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-10));
    const double log_rhs = std::log(1.0) + (1.0 + std::numbers::e) * std::log(2 * std::numbers::e / 0.1) +
                           std::log(std::cos(0.4 * pi));
    CHECK(r.log_rhs == doctest::Approx(log_rhs).epsilon(1e-9));
    CHECK(minimal_remez_constant(cos1d(), 1.0, 1.0, F) == 1.0);
    CHECK_THROWS(remez_check(cos1d(), 1.0, 1.0, {{0.5, 0.5}}, 8.0));
  }

  TEST_CASE("random Remez instances pass at C = 8") {
    CounterRng frng(4);
    for (std::uint64_t s = 0; s < 100; ++s) {
      double sigma = 0.0;
      const auto g = anchored_slice(s, sigma);
      const double R = s % 2 ? 4.0 : 1.0;
      const IntervalSet F = random_interval_set(R, frng);
      const double m = interval_measure(F);
      REQUIRE(m >= 0.05 * R - 1e-12);
      REQUIRE(m <= 0.5 * R + 1e-12);
      const auto r = remez_check(g, sigma, R, F, 8.0);
      CHECK(r.pass);
      CHECK(r.final_line_pass);
      CHECK(sublevel_decay_check(g, sigma, R, 8.0).pass);
    }
  }

  TEST_CASE("sublevel decay for a cosine against the closed form") {
    const auto rep = sublevel_decay_check(cos1d(), 1.0, 1.0, 8.0);
    CHECK(rep.pass);
    for (std::size_t i = 0; i < rep.epsilon.size(); ++i) {
      const double eps = rep.epsilon[i];
      CHECK(rep.measure[i] == doctest::Approx(2 / pi * std::asin(std::min(eps, 1.0))).epsilon(1e-8));
      CHECK(2 / pi * std::asin(std::min(eps, 1.0)) <= 8 * std::pow(8 * eps, 1.0 / 8));
    }
    CHECK(rep.epsilon.front() == doctest::Approx(1e-8));
    CHECK(rep.epsilon.back() == doctest::Approx(1.0));
    CHECK(rep.fitted_exponent == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("sublevel decay passes trivially away from zero") {
    const auto rep = sublevel_decay_check(constant1d(0.5), 1e-3, 3.0, 8.0);
    CHECK(rep.pass);
    for (std::size_t i = 0; i < rep.epsilon.size(); ++i)
      if (rep.epsilon[i] < 0.5) CHECK(rep.measure[i] == 0.0);
  }

  TEST_CASE("log integral of a cosine and of the constant one") {
    CHECK(log_integral_direct(constant1d(1.0), 3.0) == 0.0);
    CHECK(log_integral_layer_cake(constant1d(1.0), 3.0) == 0.0);
    const double direct = log_integral_direct(cos1d(), 4.0);
    CHECK(direct == doctest::Approx(4 * std::log(2.0)).epsilon(1e-8));
    CHECK(log_integral_layer_cake(cos1d(), 4.0) == doctest::Approx(direct).epsilon(1e-3));
    const auto b = log_integral_bound_check(cos1d(), 1.0, 4.0, 8.0);
    CHECK(b.pass);
    CHECK(b.integral < b.bound);
  }

  TEST_CASE("layer cake agrees with direct quadrature on random slices") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      double sigma = 0.0;
      const auto g = anchored_slice(s, sigma);
      const double d = log_integral_direct(g, 8.0);
      CHECK(std::abs(log_integral_layer_cake(g, 8.0) - d) <= 0.01 * d + 1e-9);
      CHECK(log_integral_bound_check(g, sigma, 8.0, 8.0).pass);
    }
  }

  TEST_CASE("normalized log integrals decrease") {
    double sigma = 0.0;
    const auto g = anchored_slice(5, sigma);
    const auto v = normalized_log_integrals(g, {2, 4, 8, 16, 32});
    CHECK(strictly_decreasing(v));
    CHECK_FALSE(strictly_decreasing({1.0, 1.0}));
  }
}
