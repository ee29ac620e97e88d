#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "mobsamp/rng.hpp"
#include "mobsamp/surfaces.hpp"
#include "mobsamp/vec.hpp"

namespace mobsamp {

/// Line {foot + t * direction}, with foot the point closest to the origin.
struct Line {
  Vec direction;
  Vec foot;

  Vec at(double t) const { return foot + t * direction; }
};

/// Line through `point` with the given direction, foot re-projected onto direction-perp.
Line line_through(const Vec& point, const Vec& direction);

/// Orthonormal basis of direction-perp (d - 1 vectors).
std::vector<Vec> orthogonal_complement(const Vec& direction);

/// Kinematic measure of the lines meeting B(0, R): (d omega_d) (omega_{d-1} R^{d-1}).
double kinematic_mass(int d, double R);

/// One line from the kinematic measure restricted to B(0, R).
Line sample_line_hitting_ball(int d, double R, CounterRng& rng);

/// n lines, drawn block-wise from substreams of `rng` (the same lines the
/// estimators below use for the same generator).
std::vector<Line> sample_lines_hitting_ball(int d, double R, std::size_t n, const CounterRng& rng);

/// card(E cap line); nullopt when the line lies inside E.
using IntersectionCounter = std::function<std::optional<long>(const Line&)>;

struct CroftonEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t lines = 0;
  std::size_t discarded = 0;
  bool discard_warning = false;  // more than 0.1% of lines discarded
};

/// H^{d-1}(E) for E inside B(0, R).
CroftonEstimate crofton_area(const IntersectionCounter& counter, int d, double R, std::size_t n, const CounterRng& rng);

/// card(Gamma cap line cap closed ball B(center, radius)). Parallel lines
/// count 0 and tangent lines count 1; nullopt if the line lies on Gamma.
std::optional<long> count_intersections(const SurfaceSet& s, const Line& line, const Vec& center, double radius);

struct IdentityEstimate {
  double lhs = 0.0;
  double lhs_error = 0.0;
  double rhs = 0.0;
  double rhs_error = 0.0;
};

/// Both sides of the line-integration identity for g supported in B(0, R):
/// lhs by foot-point sampling, rhs = (d - 1) omega_{d-1} int g / |y| by
/// sampling proportional to 1 / |y|. Independent substreams.
IdentityEstimate weighted_line_integral(const std::function<double(const Vec&)>& g, int d, double R, std::size_t n,
                                        const CounterRng& rng);

}  // namespace mobsamp
