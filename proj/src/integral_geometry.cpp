#include "mobsamp/integral_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mobsamp/core_geometry.hpp"
#include "mobsamp/error.hpp"
#include "mobsamp/parallel.hpp"

namespace mobsamp {

std::vector<Vec> orthogonal_complement(const Vec& direction) {
  const int d = direction.dim();
  std::vector<Vec> basis;
  for (int axis = 0; axis < d && static_cast<int>(basis.size()) < d - 1; ++axis) {
    Vec v = Vec::unit(d, axis);
    v -= dot(v, direction) * direction;
    for (const Vec& b : basis) v -= dot(v, b) * b;
    const double n = norm(v);
    if (n > 1e-6) basis.push_back(v / n);
  }
  return basis;
}

Line line_through(const Vec& point, const Vec& direction) {
  const Vec u = normalized(direction);
  require_same_dim(point, u.dim(), "line point");
  return Line{u, point - dot(point, u) * u};
}

double kinematic_mass(int d, double R) {
  if (!(R > 0.0)) throw InvalidInput("kinematic_mass: radius must be positive");
  return sphere_area(d) * unit_ball_volume(d - 1) * std::pow(R, d - 1);
}

Line sample_line_hitting_ball(int d, double R, CounterRng& rng) {
  const Vec theta = sample_direction(d, rng);
  Vec foot(d);
  if (d > 1) {
    const Vec local = sample_point_in_ball(d - 1, R, rng);
    const auto basis = orthogonal_complement(theta);
    for (int i = 0; i < d - 1; ++i) foot += local[i] * basis[static_cast<std::size_t>(i)];
  }
  return Line{theta, foot};
}

std::vector<Line> sample_lines_hitting_ball(int d, double R, std::size_t n, const CounterRng& rng) {
  if (n < 1) throw InvalidInput("sample_lines_hitting_ball: need at least one line");
  std::vector<Line> out(n);
  for_each_block(block_count(n), [&](std::size_t b) {
    CounterRng local = rng.substream(b);
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) out[i] = sample_line_hitting_ball(d, R, local);
  });
  return out;
}

CroftonEstimate crofton_area(const IntersectionCounter& counter, int d, double R, std::size_t n,
                             const CounterRng& rng) {
  if (n < 1) throw InvalidInput("crofton_area: need at least one line");
  struct Partial {
    RunningStats stats;
    std::size_t discarded = 0;
  };
  const auto parts = map_blocks<Partial>(block_count(n), [&](std::size_t b) {
    Partial p;
    CounterRng local = rng.substream(b);
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) {
      const auto c = counter(sample_line_hitting_ball(d, R, local));
      if (!c) {
        ++p.discarded;
        continue;
      }
      if (*c < 0) throw InvalidInput("crofton_area: intersection counter returned a negative count");
      p.stats.add(static_cast<double>(*c));
    }
    return p;
  });
  RunningStats all;
  CroftonEstimate est;
  for (const auto& p : parts) {
    all.merge(p.stats);
    est.discarded += p.discarded;
  }
  // Discarded lines contribute nothing; rescale to the full line budget.
  const double kept = static_cast<double>(all.n) / static_cast<double>(n);
  const double scale = kinematic_mass(d, R) / (2.0 * unit_ball_volume(d - 1));
  est.lines = n;
  est.value = scale * all.mean * kept;
  est.standard_error = scale * all.standard_error() * kept;
  est.discard_warning = static_cast<double>(est.discarded) > 1e-3 * static_cast<double>(n);
  return est;
}

namespace {

std::optional<long> family_count(const HyperplaneFamily& f, const Line& l, double t0, double t1) {
  const double a = dot(l.foot, f.normal) - f.offset;
  const double b = dot(l.direction, f.normal);
  if (std::abs(b) < 1e-15) {
    const double k = std::round(a / f.spacing);
    if (std::abs(a - k * f.spacing) < 1e-12 && !f.is_excluded(static_cast<std::int64_t>(k))) return std::nullopt;
    return 0;
  }
  const double v0 = std::min(a + b * t0, a + b * t1);
  const double v1 = std::max(a + b * t0, a + b * t1);
  const auto kmin = static_cast<std::int64_t>(std::ceil(v0 / f.spacing));
  const auto kmax = static_cast<std::int64_t>(std::floor(v1 / f.spacing));
  if (kmax < kmin) return 0;
  long count = static_cast<long>(kmax - kmin + 1);
  for (std::int64_t k : f.excluded)
    if (k >= kmin && k <= kmax) --count;
  return count;
}

std::optional<long> sphere_count(const SphereShell& s, const Line& l, double t0, double t1) {
  const Vec w = l.foot - s.center;
  const double bh = dot(w, l.direction);
  const double c = norm2(w) - s.radius * s.radius;
  const double disc = bh * bh - c;
  if (disc < 0.0) return 0;
  if (disc == 0.0) return (-bh >= t0 && -bh <= t1) ? 1 : 0;
  const double q = std::sqrt(disc);
  long count = 0;
  for (double t : {-bh - q, -bh + q})
    if (t >= t0 && t <= t1) ++count;
  return count;
}

std::optional<long> count_in_range(const SurfaceSet& s, const Line& l, double t0, double t1) {
  return std::visit(
      [&](const auto& sh) -> std::optional<long> {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, HyperplaneFamily>) {
          return family_count(sh, l, t0, t1);
        } else if constexpr (std::is_same_v<T, SphereShell>) {
          return sphere_count(sh, l, t0, t1);
        } else if constexpr (std::is_same_v<T, WeightedPointMeasure>) {
          throw InvalidInput("count_intersections: a weighted point measure has no line intersections");
        } else if constexpr (std::is_same_v<T, UnionOfSurfaces>) {
          long total = 0;
          for (const auto& m : sh.members) {
            const auto c = count_in_range(m, l, t0, t1);
            if (!c) return std::nullopt;
            total += *c;
          }
          return total;
        } else {
          // Enumerate the crossings of the line with each family and drop
          // those inside the excised disks.
          std::vector<const HyperplaneFamily*> fams;
          std::function<void(const SurfaceSet&)> collect = [&](const SurfaceSet& t) {
            if (const auto* f = std::get_if<HyperplaneFamily>(&t.shape())) fams.push_back(f);
            if (const auto* u = std::get_if<UnionOfSurfaces>(&t.shape()))
              for (const auto& m : u->members) collect(m);
          };
          collect(*sh.base);
          long total = 0;
          for (const auto* f : fams) {
            const double a = dot(l.foot, f->normal) - f->offset;
            const double b = dot(l.direction, f->normal);
            if (std::abs(b) < 1e-15) {
              if (family_count(*f, l, t0, t1) == std::nullopt) return std::nullopt;
              continue;
            }
            const double v0 = std::min(a + b * t0, a + b * t1);
            const double v1 = std::max(a + b * t0, a + b * t1);
            const auto kmin = static_cast<std::int64_t>(std::ceil(v0 / f->spacing));
            const auto kmax = static_cast<std::int64_t>(std::floor(v1 / f->spacing));
            for (std::int64_t k = kmin; k <= kmax; ++k) {
              if (f->is_excluded(k)) continue;
              const double t = (static_cast<double>(k) * f->spacing - a) / b;
              if (crossing_distance(sh, l.at(t)) > sh.radius) ++total;
            }
          }
          return total;
        }
      },
      s.shape());
}

}  // namespace

std::optional<long> count_intersections(const SurfaceSet& s, const Line& line, const Vec& center, double radius) {
  require_same_dim(line.direction, s.dimension(), "line");
  const double tc = dot(center - line.foot, line.direction);
  const double off2 = norm2(line.at(tc) - center);
  const double h2 = radius * radius - off2;
  if (h2 < 0.0) return 0;
  const double h = std::sqrt(h2);
  return count_in_range(s, line, tc - h, tc + h);
}

IdentityEstimate weighted_line_integral(const std::function<double(const Vec&)>& g, int d, double R, std::size_t n,
                                        const CounterRng& rng) {
  if (d < 2) throw DimensionError("weighted_line_integral: the identity requires d >= 2");
  if (n < 2) throw InvalidInput("weighted_line_integral: need at least two samples");
  const double mass = kinematic_mass(d, R);
  auto run = [&](const CounterRng& base, bool radial) {
    const auto parts = map_blocks<RunningStats>(block_count(n), [&](std::size_t b) {
      RunningStats s;
      CounterRng local = base.substream(b);
      const std::size_t end = std::min(n, (b + 1) * kBlockSize);
      for (std::size_t i = b * kBlockSize; i < end; ++i) {
        if (radial) {
          // Density proportional to 1/|y| on B(0, R): radius R u^{1/(d-1)}.
          const double r = R * std::pow(local.uniform(), 1.0 / (d - 1));
          s.add(g(r * sample_direction(d, local)));
        } else {
          s.add(g(sample_line_hitting_ball(d, R, local).foot));
        }
      }
      return s;
    });
    RunningStats all;
    for (const auto& p : parts) all.merge(p);
    return all;
  };
  const RunningStats lhs = run(rng.substream(0), false);
  const RunningStats rhs = run(rng.substream(1), true);
  // int g / |y| = (d omega_d R^{d-1} / (d - 1)) E_q[g]; times (d - 1) omega_{d-1}.
  return IdentityEstimate{mass * lhs.mean, mass * lhs.standard_error(), mass * rhs.mean, mass * rhs.standard_error()};
}

}  // namespace mobsamp
