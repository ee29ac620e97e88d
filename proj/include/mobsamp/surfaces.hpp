#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mobsamp/rng.hpp"
#include "mobsamp/vec.hpp"

namespace mobsamp {

class SurfaceSet;

/// Parallel hyperplanes {x : x.n = offset + k * spacing}, k in Z minus `excluded`.
struct HyperplaneFamily {
  Vec normal;
  double spacing;
  double offset = 0.0;
  std::vector<std::int64_t> excluded;

  bool is_excluded(std::int64_t k) const;
};

struct SphereShell {
  Vec center;
  double radius;
};

/// Discrete stand-in for H^{d-1} restricted to a surface; resolution r0 is the
/// point spacing, and ball queries below 3 * r0 are refused.
struct WeightedPointMeasure {
  std::vector<Vec> points;  // sorted by first coordinate
  std::vector<double> weights;
  double resolution;
};

struct UnionOfSurfaces {
  std::vector<SurfaceSet> members;
};

/// A planar (d = 2) union of line families with the `radius`-neighborhoods of
/// all pairwise crossing points removed.
struct CrossingExcised {
  std::shared_ptr<const SurfaceSet> base;
  double radius;
};

using SurfaceShape = std::variant<HyperplaneFamily, SphereShell, WeightedPointMeasure, UnionOfSurfaces, CrossingExcised>;

/// Candidate sampling set Gamma together with its measure H^{d-1}|_Gamma.
class SurfaceSet {
 public:
  static SurfaceSet hyperplane_family(const Vec& normal, double spacing, double offset = 0.0,
                                      std::vector<std::int64_t> excluded = {});
  static SurfaceSet single_hyperplane(const Vec& normal, double offset = 0.0);
  static SurfaceSet sphere_shell(const Vec& center, double radius);
  static SurfaceSet weighted_points(std::vector<Vec> points, std::vector<double> weights, double resolution);
  static SurfaceSet union_of(std::vector<SurfaceSet> members);
  static SurfaceSet crossing_excised(const SurfaceSet& base, double radius);

  int dimension() const { return dim_; }
  const SurfaceShape& shape() const { return shape_; }
  std::string describe() const;

 private:
  SurfaceSet(int dim, SurfaceShape shape) : dim_(dim), shape_(std::move(shape)) {}
  int dim_;
  SurfaceShape shape_;
};

/// H^{d-1}(Gamma cap B(x, r)), closed form for the continuous shapes.
double measure_in_ball(const SurfaceSet& s, const Vec& x, double r);

/// Distance from a point on one of the excised lines to the nearest crossing
/// along that line (infinity if there is none nearby).
double crossing_distance(const CrossingExcised& ex, const Vec& p);

/// Gamma + v.
SurfaceSet translated(const SurfaceSet& s, const Vec& v);

/// True when Gamma has pairwise crossings of distinct line families (d = 2),
/// i.e. a crossing-excised subset is meaningful.
bool has_crossings(const SurfaceSet& s);

/// Uniformly scattered points of Gamma near the window.
std::vector<Vec> sample_points_on(const SurfaceSet& s, const Window& w, std::size_t n, CounterRng& rng);

/// Deterministic probe centers: plane/midpoint phase combinations, excluded
/// plane positions, crossing points and sphere centers inside the window.
std::vector<Vec> structured_centers(const SurfaceSet& s, const Window& w);

/// Lattice discretization of Gamma cap window at spacing r0 (families in
/// d = 2, 3, spheres in d = 2, 3, unions and excised sets recursively).
SurfaceSet discretize(const SurfaceSet& s, const Window& w, double r0);

/// Midpoint-rule nodes and weights for H^{d-1} on Gamma cap window (possibly
/// empty); the same patches as `discretize`, plus weighted points in the window.
void surface_quadrature(const SurfaceSet& s, const Window& w, double r0, std::vector<Vec>& points,
                        std::vector<double>& weights);

/// Reads "x1 ... xd weight" rows (whitespace or comma separated; '#' comments).
SurfaceSet read_point_file(const std::string& path, int d, double resolution);

struct RegularityProfile {
  std::vector<double> radii;         // admissible radii, increasing
  std::vector<double> values;        // phi(r_i)
  std::vector<double> skipped_radii; // refused (below resolution floor)
  double phi0 = 0.0;
  double phi0_spread = 0.0;          // max - min over the three smallest radii
  std::size_t centers_used = 0;
  bool empty_warning = false;
};

struct ProfileBudget {
  Window window;
  std::size_t uniform_centers = 256;
  std::size_t surface_centers = 256;
};

/// phi(r) = max over sampled centers of mu(B(x, r)) / (omega_{d-1} r^{d-1}).
/// A lower estimate of the true supremum.
RegularityProfile regularity_profile(const SurfaceSet& s, const std::vector<double>& radii,
                                     const ProfileBudget& budget, CounterRng& rng);

struct Phi0Verdict {
  bool checked = false;
  bool passed = true;
  double phi0 = 0.0;
  double tolerance = 0.02;
  std::string message;
};

Phi0Verdict check_phi0_floor(const RegularityProfile& profile, bool positive_measure);

struct DensityReport {
  std::vector<double> radii;
  std::vector<double> inf_density;  // per radius, min over centers
  double estimate = 0.0;            // fitted D in D + c / R over the top half
  double slope = 0.0;               // fitted c
  double uncertainty = 0.0;
  std::size_t centers_used = 0;
  std::string note;
};

struct DensityBudget {
  Window window;
  std::size_t uniform_centers = 256;
};

/// Lower surface density estimate; biased upward (the infimum is under-sampled).
DensityReport surface_density(const SurfaceSet& s, const std::vector<double>& radii,
                              const DensityBudget& budget, CounterRng& rng);

/// H^{d-1}(Gamma cap window) > 0, probed with ball queries.
bool has_positive_measure(const SurfaceSet& s, const Window& w);

}  // namespace mobsamp
