#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "mobsamp/core_geometry.hpp"
#include "mobsamp/parallel.hpp"
#include "mobsamp/rng.hpp"

using namespace mobsamp;
using std::numbers::pi;

TEST_SUITE("core_geometry") {
  TEST_CASE("unit ball volumes at small k") {
    CHECK(unit_ball_volume(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(unit_ball_volume(2) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
    CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2.0).epsilon(1e-15));
    CHECK_THROWS(unit_ball_volume(-1));
  }

  TEST_CASE("ball volume recursion holds up to k = 20") {
    using boost::math::tgamma;
    for (int k = 1; k <= 20; ++k) {
      const double rec = unit_ball_volume(k - 1) * std::sqrt(pi) * tgamma((k + 1) / 2.0) / tgamma(k / 2.0 + 1.0);
      CHECK(std::abs(unit_ball_volume(k) - rec) <= 1e-12 * std::max(1.0, rec));
    }
  }

  TEST_CASE("sphere area is d omega_d") {
    CHECK(sphere_area(2) == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(sphere_area(3) == doctest::Approx(4 * pi).epsilon(1e-15));
  }

  TEST_CASE("theorem constant values") {
    CHECK(theorem_constant(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(theorem_constant(2) - 3 * pi / 4) < 1e-12);
    // ratio to d omega_d / (2 omega_{d-1})
    CHECK(std::abs(theorem_constant(2) / (2 * pi / (2 * 2.0)) - 1.5) < 1e-12);
    CHECK(theorem_constant(3) == doctest::Approx(3.6).epsilon(1e-14));
  }

  TEST_CASE("theorem constant grows like sqrt(d)") {
    double lo = 1e9, hi = 0;
    for (int d = 1; d <= 50; ++d) {
      const double r = theorem_constant(d) / std::sqrt(d);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(lo > 0.5);
    CHECK(hi < 4.0);
    // limit (3/2) sqrt(2 pi)
    CHECK(std::abs(theorem_constant(50) / std::sqrt(50) / (1.5 * std::sqrt(2 * pi)) - 1) < 0.1);
  }

  TEST_CASE("quadrature invariants for d = 1..4") {
    for (int d = 1; d <= 4; ++d) {
      for (int level : {1, 2, 4}) {
        const auto q = build_sphere_quadrature(d, level);
        double total = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
          CHECK(std::abs(norm(q.nodes[i]) - 1.0) < 1e-12);
          CHECK(q.weights[i] > 0.0);
          total += q.weights[i];
        }
        CHECK(std::abs(total - sphere_area(d)) < 1e-10 * sphere_area(d) + 1e-11);
      }
    }
  }

  TEST_CASE("quadrature is symmetric under theta -> -theta") {
    for (int d = 2; d <= 4; ++d) {
      const auto q = build_sphere_quadrature(d, 1);
      std::map<std::array<long long, 4>, double> index;
      auto key = [](const Vec& t) {
        std::array<long long, 4> k{};
        for (int i = 0; i < t.dim(); ++i) k[i] = std::llround(t[i] * 1e7);
        return k;
      };
      for (std::size_t i = 0; i < q.size(); ++i) index[key(q.nodes[i])] = q.weights[i];
      int unmatched = 0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        const auto it = index.find(key(-q.nodes[i]));
        unmatched += it == index.end() || std::abs(it->second - q.weights[i]) > 1e-12 * q.weights[i];
      }
      CHECK(unmatched == 0);
      auto g = [](const Vec& t) { return std::exp(t[0]) + t[1] * t[1] * t[1]; };
      const double a = q.integrate(g);
      const double b = q.integrate([&](const Vec& t) { return g(-t); });
      CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
    }
  }

  TEST_CASE("first absolute moment of the sphere") {
    auto abs1 = [](const Vec& t) { return std::abs(t[0]); };
    CHECK(std::abs(default_sphere_quadrature(2).integrate(abs1) - 4.0) < 1e-8);
    CHECK(std::abs(default_sphere_quadrature(3).integrate(abs1) - 2 * pi) < 1e-6);
    CHECK(std::abs(default_sphere_quadrature(4).integrate(abs1) - 2 * unit_ball_volume(3)) < 1e-5);
  }

  TEST_CASE("unsupported dimension is rejected") {
    CHECK_THROWS_WITH(build_sphere_quadrature(5, 1), doctest::Contains("dimension"));
    CHECK_THROWS(build_sphere_quadrature(0, 1));
  }

  TEST_CASE("directions are centred and points fill the disk") {
    CounterRng rng(123);
    Vec mean(3);
    for (int i = 0; i < 100000; ++i) mean += sample_direction(3, rng);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(mean[i] / 1e5) < 0.02);

    CounterRng prng(321);
    double r = 0.0;
    for (int i = 0; i < 100000; ++i) r += norm(sample_point_in_ball(2, 1.0, prng));
    CHECK(std::abs(r / 1e5 - 2.0 / 3.0) < 0.01);
  }

  TEST_CASE("philox known answer") {
    const auto out = CounterRng::philox({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }

  TEST_CASE("seeded streams are reproducible and substreams differ") {
    CounterRng a(99), b(99);
    for (int i = 0; i < 5000; ++i) REQUIRE(a.uniform() == b.uniform());
    CounterRng s0 = CounterRng(99).substream(0), s1 = CounterRng(99).substream(1);
    CHECK(s0.next_u64() != s1.next_u64());
    CounterRng u(5);
    for (int i = 0; i < 10000; ++i) {
      const double x = u.uniform();
      REQUIRE(x >= 0.0);
      REQUIRE(x < 1.0);
    }
  }

  TEST_CASE("gauss legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(6, -1.0, 2.0, x, w);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 11);
    CHECK(s == doctest::Approx((std::pow(2.0, 12) - 1.0) / 12.0).epsilon(1e-13));
  }

  TEST_CASE("block reduction is independent of thread count") {
    auto run = [](int threads) {
      set_worker_threads(threads);
      const auto parts = map_blocks<RunningStats>(8, [](std::size_t b) {
        CounterRng r = CounterRng(1).substream(b);
        RunningStats s;
        for (std::size_t i = 0; i < kBlockSize; ++i) s.add(r.normal());
        return s;
      });
      RunningStats all;
      for (const auto& p : parts) all.merge(p);
      return std::pair{all.mean, all.variance()};
    };
    const auto one = run(1);
    const auto four = run(4);
    set_worker_threads(1);
    CHECK(one.first == four.first);
    CHECK(one.second == four.second);
  }
}
