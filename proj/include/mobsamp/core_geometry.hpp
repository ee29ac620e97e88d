#pragma once

#include <cstddef>
#include <vector>

#include "mobsamp/rng.hpp"
#include "mobsamp/vec.hpp"

namespace mobsamp {

/// Volume of the unit ball in R^k, pi^{k/2} / Gamma(k/2 + 1).
double unit_ball_volume(int k);

/// Surface measure of the unit sphere S^{d-1}, which equals d * omega_d.
double sphere_area(int d);

/// The dimensional constant of the density criterion,
/// (omega_d / omega_{d-1}) * 3 d^2 / (2d + 4).
double theorem_constant(int d);

inline constexpr int kMaxQuadratureDim = 4;
inline constexpr int kDefaultQuadratureLevel = 8;

/// Nodes and positive weights on S^{d-1}. The node set is closed under
/// antipodes (equal weights) and the weights sum to d * omega_d.
struct SphereQuadrature {
  int dimension = 0;
  int level = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// d = 1: the two points +-1. d = 2: equally spaced angles (8192 * level).
/// d = 3, 4: iterated product of the lower-dimensional rule with a
/// Gauss-Legendre rule in the polar angle, split at the equator
/// (max(level, 8) nodes per hemisphere); the circle factor uses 1024 * level
/// angles for d = 3 and 512 * level for d = 4.
SphereQuadrature build_sphere_quadrature(int d, int level = kDefaultQuadratureLevel);

/// Cached default-level rule (built once per dimension, thread-safe).
const SphereQuadrature& default_sphere_quadrature(int d);

/// Uniform direction on S^{d-1} (normalized Gaussian vector).
Vec sample_direction(int d, CounterRng& rng);

/// Uniform point in the ball B(0, radius) of R^d.
Vec sample_point_in_ball(int d, double radius, CounterRng& rng);

/// Uniform point in the window box.
Vec sample_point_in_window(const Window& w, CounterRng& rng);

/// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace mobsamp
