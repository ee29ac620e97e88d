#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mobsamp/core_geometry.hpp"
#include "mobsamp/vec.hpp"

namespace mobsamp {

class ConvexBody;

struct Ball {
  double radius;
};

/// Centered box with the given half-widths.
struct Box {
  Vec half_widths;
};

/// Axis-aligned centered ellipsoid with the given semi-axes.
struct Ellipsoid {
  Vec semi_axes;
};

/// Origin-symmetric polytope given by vertices and outward unit facet normals,
/// both closed under negation.
struct SymmetricPolytope {
  std::vector<Vec> vertices;
  std::vector<Vec> facet_normals;
};

/// Minkowski sum base + B(0, kappa).
struct Inflated {
  std::shared_ptr<const ConvexBody> base;
  double kappa;
};

using ConvexShape = std::variant<Ball, Box, Ellipsoid, SymmetricPolytope, Inflated>;

/// Origin-symmetric compact convex body, exposed through its support function.
class ConvexBody {
 public:
  static ConvexBody ball(int dim, double radius);
  static ConvexBody box(const Vec& half_widths);
  static ConvexBody ellipsoid(const Vec& semi_axes);
  /// Throws InvalidInput if vertices and facet normals are inconsistent.
  static ConvexBody polytope(std::vector<Vec> vertices, std::vector<Vec> facet_normals);

  int dimension() const { return dim_; }
  const ConvexShape& shape() const { return shape_; }
  std::string describe() const;

 private:
  ConvexBody(int dim, ConvexShape shape) : dim_(dim), shape_(std::move(shape)) {}
  friend ConvexBody inflate(const ConvexBody& k, double kappa);
  friend ConvexBody scaled(const ConvexBody& k, double lambda);

  int dim_;
  ConvexShape shape_;
};

/// h_K(theta) = max_{x in K} x . theta; theta must be a unit vector (1e-9).
double support(const ConvexBody& k, const Vec& theta);

/// Support function without the unit-norm check (positively homogeneous).
double support_unchecked(const ConvexBody& k, const Vec& v);

/// W(K) = (2 / (d omega_d)) * sum_i w_i h_K(theta_i).
double mean_width(const ConvexBody& k, const SphereQuadrature& q);
double mean_width(const ConvexBody& k);

/// 2 * max_theta h_K(theta), in closed form for every shape.
double diameter(const ConvexBody& k, const SphereQuadrature& q);
double diameter(const ConvexBody& k);

/// The kappa-neighborhood K + B(0, kappa).
ConvexBody inflate(const ConvexBody& k, double kappa);

/// lambda K for lambda > 0.
ConvexBody scaled(const ConvexBody& k, double lambda);

/// Exact membership. Inflated bodies are supported over Ball and Box bases
/// only; other bases raise ApproximateMembershipError.
bool contains_frequency(const ConvexBody& k, const Vec& xi);

/// Half-widths of the smallest centered box containing K, h_K(e_i).
Vec bounding_half_widths(const ConvexBody& k);

}  // namespace mobsamp
