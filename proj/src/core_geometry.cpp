#include "mobsamp/core_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/special_functions/legendre.hpp>

#include "mobsamp/error.hpp"

namespace mobsamp {

double unit_ball_volume(int k) {
  if (k < 0) throw InvalidInput("unit_ball_volume: k must be non-negative");
  const double half = 0.5 * k;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

double sphere_area(int d) { return d * unit_ball_volume(d); }

double theorem_constant(int d) {
  if (d < 1) throw InvalidInput("theorem_constant: d must be at least 1");
  const double dd = d;
  return unit_ball_volume(d) / unit_ball_volume(d - 1) * (3.0 * dd * dd) / (2.0 * dd + 4.0);
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  // legendre_p_zeros returns the non-negative zeros in increasing order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it)
    if (*it != 0.0) x.push_back(-*it);
  for (double z : zeros) x.push_back(z);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (double xi : x) {
    const double dp = boost::math::legendre_p_prime(n, xi);
    nodes.push_back(mid + half * xi);
    weights.push_back(half * 2.0 / ((1.0 - xi * xi) * dp * dp));
  }
}

namespace {

void check_dimension(int d) {
  if (d < 1 || d > kMaxQuadratureDim) {
    throw DimensionError("sphere quadrature: dimension " + std::to_string(d) +
                         " out of supported range [1, 4]");
  }
}

SphereQuadrature circle_rule(int level) {
  SphereQuadrature q;
  q.dimension = 2;
  q.level = level;
  const int n = 8192 * level;
  q.nodes.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    q.nodes.push_back(Vec{std::cos(t), std::sin(t)});
  }
  q.weights.assign(n, 2.0 * std::numbers::pi / n);
  return q;
}

// Lifts a rule on S^{d-2} to S^{d-1} via theta = (sin(b) u, cos(b)), with
// measure sin(b)^{d-2} db dsigma(u).
SphereQuadrature lift(const SphereQuadrature& lower, int level) {
  const int d = lower.dimension + 1;
  std::vector<double> bn, bw;
  std::vector<double> n1, w1, n2, w2;
  const int m = std::max(level, 8);
  gauss_legendre(m, 0.0, 0.5 * std::numbers::pi, n1, w1);
  gauss_legendre(m, 0.5 * std::numbers::pi, std::numbers::pi, n2, w2);
  bn = n1;
  bn.insert(bn.end(), n2.begin(), n2.end());
  bw = w1;
  bw.insert(bw.end(), w2.begin(), w2.end());

  SphereQuadrature q;
  q.dimension = d;
  q.level = level;
  q.nodes.reserve(bn.size() * lower.size());
  q.weights.reserve(bn.size() * lower.size());
  for (std::size_t i = 0; i < bn.size(); ++i) {
    const double s = std::sin(bn[i]);
    const double c = std::cos(bn[i]);
    const double jac = bw[i] * std::pow(s, d - 2);
    for (std::size_t j = 0; j < lower.size(); ++j) {
      Vec x(d);
      for (int k = 0; k < d - 1; ++k) x[k] = s * lower.nodes[j][k];
      x[d - 1] = c;
      q.nodes.push_back(x);
      q.weights.push_back(jac * lower.weights[j]);
    }
  }
  return q;
}

SphereQuadrature coarse_circle(int level, int n) {
  SphereQuadrature q;
  q.dimension = 2;
  q.level = level;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    q.nodes.push_back(Vec{std::cos(t), std::sin(t)});
  }
  q.weights.assign(n, 2.0 * std::numbers::pi / n);
  return q;
}

}  // namespace

SphereQuadrature build_sphere_quadrature(int d, int level) {
  check_dimension(d);
  if (level < 1) throw InvalidInput("sphere quadrature: level must be at least 1");
  if (d == 1) {
    SphereQuadrature q;
    q.dimension = 1;
    q.level = level;
    q.nodes = {Vec{1.0}, Vec{-1.0}};
    q.weights = {1.0, 1.0};
    return q;
  }
  if (d == 2) return circle_rule(level);
  SphereQuadrature q = coarse_circle(level, (d == 3 ? 1024 : 512) * level);
  for (int k = 3; k <= d; ++k) q = lift(q, level);
  return q;
}

const SphereQuadrature& default_sphere_quadrature(int d) {
  check_dimension(d);
  static std::array<SphereQuadrature, kMaxQuadratureDim + 1> cache;
  static std::array<std::once_flag, kMaxQuadratureDim + 1> flags;
  std::call_once(flags[d], [d] { cache[d] = build_sphere_quadrature(d, kDefaultQuadratureLevel); });
  return cache[d];
}

Vec sample_direction(int d, CounterRng& rng) {
  Vec v(d);
  for (;;) {
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    const double n = norm(v);
    if (n > 1e-300) return v / n;
  }
}

Vec sample_point_in_ball(int d, double radius, CounterRng& rng) {
  const Vec dir = sample_direction(d, rng);
  const double r = radius * std::pow(rng.uniform(), 1.0 / d);
  return r * dir;
}

Vec sample_point_in_window(const Window& w, CounterRng& rng) {
  Vec x(w.dim());
  for (int i = 0; i < w.dim(); ++i) x[i] = rng.uniform(w.lo[i], w.hi[i]);
  return x;
}

}  // namespace mobsamp
