#include "mobsamp/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mobsamp/error.hpp"

namespace mobsamp {

namespace {

constexpr double kMembershipSlack = 1e-12;

void require_positive(const Vec& v, const char* what) {
  for (int i = 0; i < v.dim(); ++i)
    if (!(v[i] > 0.0)) throw InvalidInput(std::string(what) + " must be positive");
}

bool has_negation(const std::vector<Vec>& pts, const Vec& p, double tol) {
  return std::any_of(pts.begin(), pts.end(), [&](const Vec& q) { return norm(q + p) <= tol; });
}

}  // namespace

ConvexBody ConvexBody::ball(int dim, double radius) {
  (void)Vec(dim);
  if (dim < 1) throw DimensionError("convex body dimension must be at least 1");
  if (!(radius > 0.0)) throw InvalidInput("ball radius must be positive");
  return ConvexBody(dim, Ball{radius});
}

ConvexBody ConvexBody::box(const Vec& half_widths) {
  if (half_widths.dim() < 1) throw DimensionError("convex body dimension must be at least 1");
  require_positive(half_widths, "box half-widths");
  return ConvexBody(half_widths.dim(), Box{half_widths});
}

ConvexBody ConvexBody::ellipsoid(const Vec& semi_axes) {
  if (semi_axes.dim() < 1) throw DimensionError("convex body dimension must be at least 1");
  require_positive(semi_axes, "ellipsoid semi-axes");
  return ConvexBody(semi_axes.dim(), Ellipsoid{semi_axes});
}

ConvexBody ConvexBody::polytope(std::vector<Vec> vertices, std::vector<Vec> facet_normals) {
  if (vertices.empty() || facet_normals.empty())
    throw InvalidInput("polytope needs vertices and facet normals");
  const int d = vertices.front().dim();
  if (d < 1) throw DimensionError("convex body dimension must be at least 1");
  double scale = 0.0;
  for (const Vec& v : vertices) {
    require_same_dim(v, d, "polytope vertex");
    scale = std::max(scale, norm(v));
  }
  if (!(scale > 0.0)) throw InvalidInput("polytope must have a non-zero vertex");
  const double tol = 1e-9 * scale;
  for (const Vec& v : vertices)
    if (!has_negation(vertices, v, tol)) throw InvalidInput("polytope vertices are not closed under negation");
  for (const Vec& n : facet_normals) {
    require_same_dim(n, d, "polytope facet normal");
    if (std::abs(norm(n) - 1.0) > 1e-9) throw InvalidInput("polytope facet normals must be unit vectors");
    if (!has_negation(facet_normals, n, 1e-9))
      throw InvalidInput("polytope facet normals are not closed under negation");
  }
  // Each facet must be spanned by at least d vertices and each vertex must lie
  // on at least d facets (one in d = 1).
  const std::size_t need = static_cast<std::size_t>(d == 1 ? 1 : d);
  std::vector<std::size_t> facets_per_vertex(vertices.size(), 0);
  for (const Vec& n : facet_normals) {
    double h = -INFINITY;
    for (const Vec& v : vertices) h = std::max(h, dot(v, n));
    if (!(h > 0.0)) throw InvalidInput("polytope does not contain the origin in its interior");
    std::size_t on_facet = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (std::abs(dot(vertices[i], n) - h) <= tol) {
        ++on_facet;
        ++facets_per_vertex[i];
      }
    }
    if (on_facet < need) throw InvalidInput("polytope facet normal is not supported by a facet of the vertex hull");
  }
  for (std::size_t c : facets_per_vertex)
    if (c < need) throw InvalidInput("polytope vertex lies on too few listed facets (facet list incomplete)");
  return ConvexBody(d, SymmetricPolytope{std::move(vertices), std::move(facet_normals)});
}

std::string ConvexBody::describe() const {
  std::ostringstream os;
  os.precision(10);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          os << "ball(d=" << dim_ << ", radius=" << s.radius << ")";
        } else if constexpr (std::is_same_v<T, Box>) {
          os << "box(half_widths=[";
          for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << s.half_widths[i];
          os << "])";
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          os << "ellipsoid(semi_axes=[";
          for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << s.semi_axes[i];
          os << "])";
        } else if constexpr (std::is_same_v<T, SymmetricPolytope>) {
          os << "polytope(d=" << dim_ << ", vertices=" << s.vertices.size()
             << ", facets=" << s.facet_normals.size() << ")";
        } else {
          os << "inflated(" << s.base->describe() << ", kappa=" << s.kappa << ")";
        }
      },
      shape_);
  return os.str();
}

double support_unchecked(const ConvexBody& k, const Vec& v) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return s.radius * norm(v);
        } else if constexpr (std::is_same_v<T, Box>) {
          double h = 0.0;
          for (int i = 0; i < v.dim(); ++i) h += s.half_widths[i] * std::abs(v[i]);
          return h;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double h = 0.0;
          for (int i = 0; i < v.dim(); ++i) h += (s.semi_axes[i] * v[i]) * (s.semi_axes[i] * v[i]);
          return std::sqrt(h);
        } else if constexpr (std::is_same_v<T, SymmetricPolytope>) {
          double h = -INFINITY;
          for (const Vec& x : s.vertices) h = std::max(h, dot(x, v));
          return h;
        } else {
          return support_unchecked(*s.base, v) + s.kappa * norm(v);
        }
      },
      k.shape());
}

double support(const ConvexBody& k, const Vec& theta) {
  require_same_dim(theta, k.dimension(), "support direction");
  if (std::abs(norm(theta) - 1.0) > 1e-9) throw InvalidInput("support: direction must be a unit vector");
  return support_unchecked(k, theta);
}

double mean_width(const ConvexBody& k, const SphereQuadrature& q) {
  if (q.dimension != k.dimension())
    throw DimensionError("mean_width: quadrature dimension does not match the body");
  const double total = q.integrate([&](const Vec& th) { return support_unchecked(k, th); });
  return 2.0 * total / sphere_area(k.dimension());
}

double mean_width(const ConvexBody& k) { return mean_width(k, default_sphere_quadrature(k.dimension())); }

namespace {

double closed_form_diameter(const ConvexBody& k) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return 2.0 * s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          return 2.0 * norm(s.half_widths);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double m = 0.0;
          for (int i = 0; i < s.semi_axes.dim(); ++i) m = std::max(m, s.semi_axes[i]);
          return 2.0 * m;
        } else if constexpr (std::is_same_v<T, SymmetricPolytope>) {
          double m = 0.0;
          for (const Vec& v : s.vertices) m = std::max(m, norm(v));
          return 2.0 * m;
        } else {
          return closed_form_diameter(*s.base) + 2.0 * s.kappa;
        }
      },
      k.shape());
}

}  // namespace

double diameter(const ConvexBody& k, const SphereQuadrature& q) {
  if (q.dimension != k.dimension())
    throw DimensionError("diameter: quadrature dimension does not match the body");
  return closed_form_diameter(k);
}

double diameter(const ConvexBody& k) { return closed_form_diameter(k); }

ConvexBody inflate(const ConvexBody& k, double kappa) {
  if (!(kappa >= 0.0)) throw InvalidInput("inflate: kappa must be non-negative");
  return ConvexBody(k.dimension(), Inflated{std::make_shared<const ConvexBody>(k), kappa});
}

ConvexBody scaled(const ConvexBody& k, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("scaled: factor must be positive");
  return std::visit(
      [&](const auto& s) -> ConvexBody {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return ConvexBody::ball(k.dimension(), lambda * s.radius);
        } else if constexpr (std::is_same_v<T, Box>) {
          return ConvexBody::box(lambda * s.half_widths);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return ConvexBody::ellipsoid(lambda * s.semi_axes);
        } else if constexpr (std::is_same_v<T, SymmetricPolytope>) {
          std::vector<Vec> v = s.vertices;
          for (auto& x : v) x *= lambda;
          return ConvexBody::polytope(std::move(v), s.facet_normals);
        } else {
          return inflate(scaled(*s.base, lambda), lambda * s.kappa);
        }
      },
      k.shape());
}

namespace {

// Euclidean distance from xi to the base body, where it is exactly computable.
double distance_to(const ConvexBody& k, const Vec& xi) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return std::max(0.0, norm(xi) - s.radius);
        } else if constexpr (std::is_same_v<T, Box>) {
          double d2 = 0.0;
          for (int i = 0; i < xi.dim(); ++i) {
            const double e = std::max(0.0, std::abs(xi[i]) - s.half_widths[i]);
            d2 += e * e;
          }
          return std::sqrt(d2);
        } else if constexpr (std::is_same_v<T, Inflated>) {
          return std::max(0.0, distance_to(*s.base, xi) - s.kappa);
        } else {
          throw ApproximateMembershipError(
              "contains_frequency: approximate membership only for inflated " + k.describe());
        }
      },
      k.shape());
}

}  // namespace

bool contains_frequency(const ConvexBody& k, const Vec& xi) {
  require_same_dim(xi, k.dimension(), "contains_frequency");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return norm(xi) <= s.radius * (1.0 + kMembershipSlack);
        } else if constexpr (std::is_same_v<T, Box>) {
          for (int i = 0; i < xi.dim(); ++i)
            if (std::abs(xi[i]) > s.half_widths[i] * (1.0 + kMembershipSlack)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double q = 0.0;
          for (int i = 0; i < xi.dim(); ++i) q += (xi[i] / s.semi_axes[i]) * (xi[i] / s.semi_axes[i]);
          return q <= 1.0 + 2.0 * kMembershipSlack;
        } else if constexpr (std::is_same_v<T, SymmetricPolytope>) {
          for (const Vec& n : s.facet_normals) {
            const double h = support_unchecked(k, n);
            if (dot(xi, n) > h + kMembershipSlack * std::max(1.0, h)) return false;
          }
          return true;
        } else {
          const double dist = distance_to(*s.base, xi);
          return dist <= s.kappa + kMembershipSlack * std::max(1.0, s.kappa);
        }
      },
      k.shape());
}

Vec bounding_half_widths(const ConvexBody& k) {
  Vec b(k.dimension());
  for (int i = 0; i < k.dimension(); ++i) b[i] = support_unchecked(k, Vec::unit(k.dimension(), i));
  return b;
}

}  // namespace mobsamp
