#include "mobsamp/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "mobsamp/core_geometry.hpp"
#include "mobsamp/error.hpp"

namespace mobsamp {

bool HyperplaneFamily::is_excluded(std::int64_t k) const {
  return std::binary_search(excluded.begin(), excluded.end(), k);
}

// ---------------------------------------------------------------- construction

SurfaceSet SurfaceSet::hyperplane_family(const Vec& normal, double spacing, double offset,
                                         std::vector<std::int64_t> excluded) {
  if (normal.dim() < 1) throw DimensionError("surface dimension must be at least 1");
  if (!(spacing > 0.0)) throw InvalidInput("hyperplane family spacing must be positive");
  if (std::abs(norm(normal) - 1.0) > 1e-9) throw InvalidInput("hyperplane family normal must be a unit vector");
  std::sort(excluded.begin(), excluded.end());
  excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
  return SurfaceSet(normal.dim(), HyperplaneFamily{normal, spacing, offset, std::move(excluded)});
}

SurfaceSet SurfaceSet::single_hyperplane(const Vec& normal, double offset) {
  // One plane of a family whose spacing is so large that no other plane is
  // ever reached by a query.
  return hyperplane_family(normal, 1e12, offset);
}

SurfaceSet SurfaceSet::sphere_shell(const Vec& center, double radius) {
  if (center.dim() < 1) throw DimensionError("surface dimension must be at least 1");
  if (!(radius > 0.0)) throw InvalidInput("sphere shell radius must be positive");
  return SurfaceSet(center.dim(), SphereShell{center, radius});
}

SurfaceSet SurfaceSet::weighted_points(std::vector<Vec> points, std::vector<double> weights, double resolution) {
  if (points.size() != weights.size()) throw InvalidInput("weighted points: points and weights differ in length");
  if (points.empty()) throw InvalidInput("weighted points: empty point set");
  if (!(resolution > 0.0)) throw InvalidInput("weighted points: resolution must be positive");
  const int d = points.front().dim();
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_same_dim(points[i], d, "weighted point");
    if (!(weights[i] >= 0.0)) throw InvalidInput("weighted points: weights must be non-negative");
  }
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a][0] < points[b][0]; });
  WeightedPointMeasure m;
  m.resolution = resolution;
  m.points.reserve(points.size());
  m.weights.reserve(points.size());
  for (std::size_t i : order) {
    m.points.push_back(points[i]);
    m.weights.push_back(weights[i]);
  }
  return SurfaceSet(d, std::move(m));
}

SurfaceSet SurfaceSet::union_of(std::vector<SurfaceSet> members) {
  if (members.empty()) throw InvalidInput("union of surfaces needs at least one member");
  const int d = members.front().dimension();
  for (const auto& m : members)
    if (m.dimension() != d) throw DimensionError("union of surfaces: members differ in dimension");
  // Distinct members may only overlap in measure zero: identical families are rejected.
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const auto* a = std::get_if<HyperplaneFamily>(&members[i].shape());
      const auto* b = std::get_if<HyperplaneFamily>(&members[j].shape());
      if (a && b && std::abs(std::abs(dot(a->normal, b->normal)) - 1.0) < 1e-12) {
        const double ratio = a->spacing / b->spacing;
        if (std::abs(ratio - std::round(ratio)) < 1e-9 || std::abs(1.0 / ratio - std::round(1.0 / ratio)) < 1e-9) {
          const double shift = std::remainder(a->offset - dot(a->normal, b->normal) * b->offset,
                                              std::min(a->spacing, b->spacing));
          if (std::abs(shift) < 1e-12)
            throw InvalidInput("union of surfaces: parallel families share planes (overlap of positive measure)");
        }
      }
    }
  }
  return SurfaceSet(d, UnionOfSurfaces{std::move(members)});
}

namespace {

void collect_families(const SurfaceSet& s, std::vector<const HyperplaneFamily*>& out, bool strict) {
  std::visit(
      [&](const auto& sh) {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, HyperplaneFamily>) {
          out.push_back(&sh);
        } else if constexpr (std::is_same_v<T, UnionOfSurfaces>) {
          for (const auto& m : sh.members) collect_families(m, out, strict);
        } else if constexpr (std::is_same_v<T, CrossingExcised>) {
          collect_families(*sh.base, out, strict);
        } else if (strict) {
          throw InvalidInput("crossing excision needs a union of hyperplane families");
        }
      },
      s.shape());
}

bool parallel(const Vec& a, const Vec& b) { return std::abs(std::abs(dot(a, b)) - 1.0) < 1e-12; }

}  // namespace

SurfaceSet SurfaceSet::crossing_excised(const SurfaceSet& base, double radius) {
  if (base.dimension() != 2) throw DimensionError("crossing excision is implemented for d = 2 only");
  if (!(radius > 0.0)) throw InvalidInput("crossing excision radius must be positive");
  std::vector<const HyperplaneFamily*> fams;
  collect_families(base, fams, true);
  return SurfaceSet(2, CrossingExcised{std::make_shared<const SurfaceSet>(base), radius});
}

std::string SurfaceSet::describe() const {
  std::ostringstream os;
  os.precision(10);
  std::visit(
      [&](const auto& sh) {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, HyperplaneFamily>) {
          os << "hyperplane_family(normal=[";
          for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << sh.normal[i];
          os << "], spacing=" << sh.spacing << ", offset=" << sh.offset;
          if (!sh.excluded.empty()) {
            os << ", excluded=[";
            for (std::size_t i = 0; i < sh.excluded.size(); ++i) os << (i ? "," : "") << sh.excluded[i];
            os << "]";
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, SphereShell>) {
          os << "sphere_shell(d=" << dim_ << ", radius=" << sh.radius << ")";
        } else if constexpr (std::is_same_v<T, WeightedPointMeasure>) {
          os << "weighted_points(n=" << sh.points.size() << ", resolution=" << sh.resolution << ")";
        } else if constexpr (std::is_same_v<T, UnionOfSurfaces>) {
          os << "union(";
          for (std::size_t i = 0; i < sh.members.size(); ++i) os << (i ? "; " : "") << sh.members[i].describe();
          os << ")";
        } else {
          os << "crossing_excised(" << sh.base->describe() << ", radius=" << sh.radius << ")";
        }
      },
      shape_);
  return os.str();
}

// ---------------------------------------------------------------- ball measure

namespace {

double family_measure(const HyperplaneFamily& f, int d, const Vec& x, double r) {
  const double s = dot(x, f.normal) - f.offset;
  const auto kmin = static_cast<std::int64_t>(std::ceil((s - r) / f.spacing));
  const auto kmax = static_cast<std::int64_t>(std::floor((s + r) / f.spacing));
  const double slice = unit_ball_volume(d - 1);
  const double expo = 0.5 * (d - 1);
  double total = 0.0;
  for (std::int64_t k = kmin; k <= kmax; ++k) {
    if (f.is_excluded(k)) continue;
    const double t = static_cast<double>(k) * f.spacing - s;
    const double h2 = std::max(0.0, r * r - t * t);
    total += (d == 1) ? 1.0 : slice * std::pow(h2, expo);
  }
  return total;
}

// Integral of sin^{d-2} over [0, a].
double sine_power_integral(int d, double a) {
  switch (d) {
    case 2: return a;
    case 3: return 1.0 - std::cos(a);
    case 4: return 0.5 * (a - std::sin(a) * std::cos(a));
    default: throw DimensionError("sphere shell cap area: dimension out of supported range [1, 4]");
  }
}

double sphere_measure(const SphereShell& sh, int d, const Vec& x, double r) {
  const double rho = sh.radius;
  const double dist = norm(x - sh.center);
  if (d == 1) {
    double count = 0.0;
    if (std::abs(sh.center[0] + rho - x[0]) <= r) count += 1.0;
    if (std::abs(sh.center[0] - rho - x[0]) <= r) count += 1.0;
    return count;
  }
  const double full = sphere_area(d) * std::pow(rho, d - 1);
  if (dist <= 1e-15 * rho) return rho <= r ? full : 0.0;
  const double c = (rho * rho + dist * dist - r * r) / (2.0 * rho * dist);
  if (c >= 1.0) return 0.0;
  if (c <= -1.0) return full;
  const double alpha = std::acos(c);
  return std::pow(rho, d - 1) * (d - 1) * unit_ball_volume(d - 1) * sine_power_integral(d, alpha);
}

double weighted_measure(const WeightedPointMeasure& m, const Vec& x, double r) {
  if (r < 3.0 * m.resolution * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "weighted point measure: radius " << r << " is below the resolution floor 3*r0 = " << 3.0 * m.resolution;
    throw ResolutionError(os.str());
  }
  const auto lo = std::lower_bound(m.points.begin(), m.points.end(), x[0] - r,
                                   [](const Vec& p, double v) { return p[0] < v; });
  double total = 0.0;
  const double r2 = r * r;
  for (auto it = lo; it != m.points.end() && (*it)[0] <= x[0] + r; ++it)
    if (norm2(*it - x) <= r2) total += m.weights[static_cast<std::size_t>(it - m.points.begin())];
  return total;
}

struct Interval {
  double lo, hi;
};

double merged_length(std::vector<Interval>& v) {
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double total = 0.0;
  double cur_lo = 0.0, cur_hi = 0.0;
  bool open = false;
  for (const auto& iv : v) {
    if (iv.hi <= iv.lo) continue;
    if (!open) {
      cur_lo = iv.lo;
      cur_hi = iv.hi;
      open = true;
    } else if (iv.lo <= cur_hi) {
      cur_hi = std::max(cur_hi, iv.hi);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = iv.lo;
      cur_hi = iv.hi;
    }
  }
  if (open) total += cur_hi - cur_lo;
  return total;
}

Vec line_direction(const Vec& n) { return Vec{-n[1], n[0]}; }

// Parameters s (along line k of family i) of crossings with other families in [s_lo, s_hi].
void crossings_on_line(const std::vector<const HyperplaneFamily*>& fams, std::size_t i, std::int64_t k, double s_lo,
                       double s_hi, std::vector<double>& out) {
  const HyperplaneFamily& fi = *fams[i];
  const Vec u = line_direction(fi.normal);
  const Vec p0 = (fi.offset + static_cast<double>(k) * fi.spacing) * fi.normal;
  for (std::size_t j = 0; j < fams.size(); ++j) {
    if (j == i || parallel(fi.normal, fams[j]->normal)) continue;
    const HyperplaneFamily& fj = *fams[j];
    const double un = dot(u, fj.normal);
    const double base = dot(p0, fj.normal);
    const double c1 = base + s_lo * un;
    const double c2 = base + s_hi * un;
    const auto mlo = static_cast<std::int64_t>(std::ceil((std::min(c1, c2) - fj.offset) / fj.spacing));
    const auto mhi = static_cast<std::int64_t>(std::floor((std::max(c1, c2) - fj.offset) / fj.spacing));
    for (std::int64_t m = mlo; m <= mhi; ++m) {
      if (fj.is_excluded(m)) continue;
      out.push_back((fj.offset + static_cast<double>(m) * fj.spacing - base) / un);
    }
  }
}

double excised_measure(const CrossingExcised& ex, const Vec& x, double r) {
  std::vector<const HyperplaneFamily*> fams;
  collect_families(*ex.base, fams, true);
  double total = 0.0;
  std::vector<double> cross;
  std::vector<Interval> cut;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const HyperplaneFamily& f = *fams[i];
    const Vec u = line_direction(f.normal);
    const double s = dot(x, f.normal) - f.offset;
    const double sc = dot(x, u);
    const auto kmin = static_cast<std::int64_t>(std::ceil((s - r) / f.spacing));
    const auto kmax = static_cast<std::int64_t>(std::floor((s + r) / f.spacing));
    for (std::int64_t k = kmin; k <= kmax; ++k) {
      if (f.is_excluded(k)) continue;
      const double t = static_cast<double>(k) * f.spacing - s;
      const double half = std::sqrt(std::max(0.0, r * r - t * t));
      const double lo = sc - half, hi = sc + half;
      cross.clear();
      crossings_on_line(fams, i, k, lo - ex.radius, hi + ex.radius, cross);
      cut.clear();
      for (double c : cross) cut.push_back({std::max(lo, c - ex.radius), std::min(hi, c + ex.radius)});
      total += (hi - lo) - merged_length(cut);
    }
  }
  return total;
}

}  // namespace

double measure_in_ball(const SurfaceSet& s, const Vec& x, double r) {
  require_same_dim(x, s.dimension(), "measure_in_ball center");
  if (!(r > 0.0)) throw InvalidInput("measure_in_ball: radius must be positive");
  const int d = s.dimension();
  return std::visit(
      [&](const auto& sh) -> double {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, HyperplaneFamily>) {
          return family_measure(sh, d, x, r);
        } else if constexpr (std::is_same_v<T, SphereShell>) {
          return sphere_measure(sh, d, x, r);
        } else if constexpr (std::is_same_v<T, WeightedPointMeasure>) {
          return weighted_measure(sh, x, r);
        } else if constexpr (std::is_same_v<T, UnionOfSurfaces>) {
          double total = 0.0;
          for (const auto& m : sh.members) total += measure_in_ball(m, x, r);
          return total;
        } else {
          return excised_measure(sh, x, r);
        }
      },
      s.shape());
}

SurfaceSet translated(const SurfaceSet& s, const Vec& v) {
  require_same_dim(v, s.dimension(), "translation");
  return std::visit(
      [&](const auto& sh) -> SurfaceSet {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, HyperplaneFamily>) {
          return SurfaceSet::hyperplane_family(sh.normal, sh.spacing, sh.offset + dot(v, sh.normal), sh.excluded);
        } else if constexpr (std::is_same_v<T, SphereShell>) {
          return SurfaceSet::sphere_shell(sh.center + v, sh.radius);
        } else if constexpr (std::is_same_v<T, WeightedPointMeasure>) {
          std::vector<Vec> pts = sh.points;
          for (auto& p : pts) p += v;
          return SurfaceSet::weighted_points(std::move(pts), sh.weights, sh.resolution);
        } else if constexpr (std::is_same_v<T, UnionOfSurfaces>) {
          std::vector<SurfaceSet> ms;
          for (const auto& m : sh.members) ms.push_back(translated(m, v));
          return SurfaceSet::union_of(std::move(ms));
        } else {
          return SurfaceSet::crossing_excised(translated(*sh.base, v), sh.radius);
        }
      },
      s.shape());
}

bool has_crossings(const SurfaceSet& s) {
  std::vector<const HyperplaneFamily*> fams;
  collect_families(s, fams, false);
  for (std::size_t i = 0; i < fams.size(); ++i)
    for (std::size_t j = i + 1; j < fams.size(); ++j)
      if (!parallel(fams[i]->normal, fams[j]->normal)) return true;
  return false;
}

// ---------------------------------------------------------------- sampling

namespace {

std::int64_t nearest_plane(const HyperplaneFamily& f, double value) {
  const auto k0 = static_cast<std::int64_t>(std::llround((value - f.offset) / f.spacing));
  for (std::int64_t step = 0; step < 1'000'000; ++step) {
    if (!f.is_excluded(k0 + step)) return k0 + step;
    if (!f.is_excluded(k0 - step)) return k0 - step;
  }
  throw InvalidInput("hyperplane family has no admissible plane near the window");
}

}  // namespace

double crossing_distance(const CrossingExcised& ex, const Vec& p) {
  std::vector<const HyperplaneFamily*> fams;
  collect_families(*ex.base, fams, true);
  double best = INFINITY;
  std::vector<double> cross;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const HyperplaneFamily& f = *fams[i];
    const double v = (dot(p, f.normal) - f.offset) / f.spacing;
    const auto k = static_cast<std::int64_t>(std::llround(v));
    if (f.is_excluded(k) || std::abs(v - static_cast<double>(k)) * f.spacing > 1e-9) continue;
    const double sc = dot(p, line_direction(f.normal));
    cross.clear();
    crossings_on_line(fams, i, k, sc - 4.0 * ex.radius, sc + 4.0 * ex.radius, cross);
    for (double c : cross) best = std::min(best, std::abs(c - sc));
  }
  return best;
}

namespace {

void sample_into(const SurfaceSet& s, const Window& w, std::size_t n, CounterRng& rng, std::vector<Vec>& out) {
  std::visit(
      [&](const auto& sh) {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, HyperplaneFamily>) {
          for (std::size_t i = 0; i < n; ++i) {
            const Vec x = sample_point_in_window(w, rng);
            const double v = dot(x, sh.normal);
            const std::int64_t k = nearest_plane(sh, v);
            out.push_back(x - (v - sh.offset - static_cast<double>(k) * sh.spacing) * sh.normal);
          }
        } else if constexpr (std::is_same_v<T, SphereShell>) {
          for (std::size_t i = 0; i < n; ++i)
            out.push_back(sh.center + sh.radius * sample_direction(s.dimension(), rng));
        } else if constexpr (std::is_same_v<T, WeightedPointMeasure>) {
          std::vector<std::size_t> inside;
          for (std::size_t i = 0; i < sh.points.size(); ++i)
            if (w.contains(sh.points[i])) inside.push_back(i);
          if (inside.empty()) return;
          for (std::size_t i = 0; i < n; ++i) {
            const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(inside.size()));
            out.push_back(sh.points[inside[std::min(j, inside.size() - 1)]]);
          }
        } else if constexpr (std::is_same_v<T, UnionOfSurfaces>) {
          const std::size_t m = sh.members.size();
          for (std::size_t i = 0; i < m; ++i) sample_into(sh.members[i], w, n / m + (i < n % m ? 1 : 0), rng, out);
        } else {
          std::vector<Vec> cand;
          for (std::size_t i = 0; i < n; ++i) {
            for (int attempt = 0; attempt < 32; ++attempt) {
              cand.clear();
              sample_into(*sh.base, w, 1, rng, cand);
              if (!cand.empty() && crossing_distance(sh, cand.front()) > sh.radius) {
                out.push_back(cand.front());
                break;
              }
            }
          }
        }
      },
      s.shape());
}

// Minimal-norm solution of N x = c for up to d independent rows, shifted
// toward `anchor` along the null space of N.
bool solve_phases(const std::vector<Vec>& rows, const std::vector<double>& c, const Vec& anchor, Vec& x) {
  const std::size_t m = rows.size();
  // Gram matrix G = N N^T, solve G z = c - N anchor, x = anchor + N^T z.
  std::vector<double> g(m * m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) g[i * m + j] = dot(rows[i], rows[j]);
    rhs[i] = c[i] - dot(rows[i], anchor);
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(g[r * m + col]) > std::abs(g[piv * m + col])) piv = r;
    if (std::abs(g[piv * m + col]) < 1e-12) return false;
    if (piv != col) {
      for (std::size_t j = 0; j < m; ++j) std::swap(g[col * m + j], g[piv * m + j]);
      std::swap(rhs[col], rhs[piv]);
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = g[r * m + col] / g[col * m + col];
      for (std::size_t j = 0; j < m; ++j) g[r * m + j] -= f * g[col * m + j];
      rhs[r] -= f * rhs[col];
    }
  }
  x = anchor;
  for (std::size_t i = 0; i < m; ++i) x += (rhs[i] / g[i * m + i]) * rows[i];
  return true;
}

}  // namespace

std::vector<Vec> sample_points_on(const SurfaceSet& s, const Window& w, std::size_t n, CounterRng& rng) {
  require_same_dim(w.lo, s.dimension(), "sampling window");
  std::vector<Vec> out;
  out.reserve(n);
  sample_into(s, w, n, rng, out);
  return out;
}

std::vector<Vec> structured_centers(const SurfaceSet& s, const Window& w) {
  const int d = s.dimension();
  std::vector<Vec> out;
  const Vec anchor = w.center();

  std::vector<const HyperplaneFamily*> fams;
  collect_families(s, fams, false);
  // Pick a maximal independent set of family normals.
  std::vector<const HyperplaneFamily*> basis;
  std::vector<Vec> rows;
  for (const auto* f : fams) {
    std::vector<Vec> trial = rows;
    trial.push_back(f->normal);
    Vec tmp(d);
    std::vector<double> zeros(trial.size(), 0.0);
    if (static_cast<int>(trial.size()) <= d && solve_phases(trial, zeros, Vec(d), tmp)) {
      rows = std::move(trial);
      basis.push_back(f);
    }
  }
  if (!basis.empty()) {
    std::vector<std::vector<double>> phases;
    for (const auto* f : basis) {
      const double a = dot(anchor, f->normal);
      const double base = f->offset + f->spacing * std::round((a - f->offset) / f->spacing);
      std::vector<double> ph{base, base + 0.5 * f->spacing, base - 0.5 * f->spacing};
      for (std::int64_t k : f->excluded) {
        const double pos = f->offset + static_cast<double>(k) * f->spacing;
        ph.push_back(pos);
        ph.push_back(pos + 0.5 * f->spacing);
      }
      phases.push_back(std::move(ph));
    }
    std::vector<std::size_t> idx(basis.size(), 0);
    for (std::size_t combos = 0; combos < 4096; ++combos) {
      std::vector<double> c(basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i) c[i] = phases[i][idx[i]];
      Vec x(d);
      if (solve_phases(rows, c, anchor, x)) out.push_back(x);
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == phases[pos].size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }

  // Pairwise crossings of non-parallel families inside the window (d = 2).
  if (d == 2) {
    for (std::size_t i = 0; i < fams.size(); ++i) {
      for (std::size_t j = i + 1; j < fams.size(); ++j) {
        const auto& a = *fams[i];
        const auto& b = *fams[j];
        if (parallel(a.normal, b.normal)) continue;
        auto range = [&](const HyperplaneFamily& f, std::int64_t& lo, std::int64_t& hi) {
          double vmin = INFINITY, vmax = -INFINITY;
          for (int cx = 0; cx < 2; ++cx)
            for (int cy = 0; cy < 2; ++cy) {
              const double v = dot(Vec{cx ? w.hi[0] : w.lo[0], cy ? w.hi[1] : w.lo[1]}, f.normal);
              vmin = std::min(vmin, v);
              vmax = std::max(vmax, v);
            }
          lo = static_cast<std::int64_t>(std::ceil((vmin - f.offset) / f.spacing));
          hi = static_cast<std::int64_t>(std::floor((vmax - f.offset) / f.spacing));
        };
        std::int64_t alo, ahi, blo, bhi;
        range(a, alo, ahi);
        range(b, blo, bhi);
        if ((ahi - alo + 1) * (bhi - blo + 1) > 4096) continue;
        for (std::int64_t k = alo; k <= ahi; ++k) {
          if (a.is_excluded(k)) continue;
          for (std::int64_t m = blo; m <= bhi; ++m) {
            if (b.is_excluded(m)) continue;
            Vec x(2);
            if (solve_phases({a.normal, b.normal},
                             {a.offset + static_cast<double>(k) * a.spacing, b.offset + static_cast<double>(m) * b.spacing},
                             Vec(2), x) &&
                w.contains(x))
              out.push_back(x);
          }
        }
      }
    }
  }

  std::function<void(const SurfaceSet&)> spheres = [&](const SurfaceSet& t) {
    if (const auto* sh = std::get_if<SphereShell>(&t.shape())) {
      auto add = [&](const Vec& x) {
        if (w.contains(x)) out.push_back(x);
      };
      add(sh->center);
      for (int i = 0; i < d; ++i) {
        add(sh->center + sh->radius * Vec::unit(d, i));
        add(sh->center - sh->radius * Vec::unit(d, i));
      }
    } else if (const auto* u = std::get_if<UnionOfSurfaces>(&t.shape())) {
      for (const auto& m : u->members) spheres(m);
    }
  };
  spheres(s);
  return out;
}

// ---------------------------------------------------------------- discretization

namespace {

// Parameter interval of {p0 + s u} inside the half-open window.
bool clip_line(const Vec& p0, const Vec& u, const Window& w, double& s0, double& s1) {
  s0 = -INFINITY;
  s1 = INFINITY;
  for (int i = 0; i < p0.dim(); ++i) {
    if (std::abs(u[i]) < 1e-15) {
      if (p0[i] < w.lo[i] || p0[i] >= w.hi[i]) return false;
      continue;
    }
    double a = (w.lo[i] - p0[i]) / u[i];
    double b = (w.hi[i] - p0[i]) / u[i];
    if (a > b) std::swap(a, b);
    s0 = std::max(s0, a);
    s1 = std::min(s1, b);
  }
  return s1 > s0;
}

void plane_index_range(const HyperplaneFamily& f, const Window& w, std::int64_t& lo, std::int64_t& hi) {
  double vmin = 0.0, vmax = 0.0;
  for (int i = 0; i < w.dim(); ++i) {
    const double a = w.lo[i] * f.normal[i], b = w.hi[i] * f.normal[i];
    vmin += std::min(a, b);
    vmax += std::max(a, b);
  }
  lo = static_cast<std::int64_t>(std::ceil((vmin - f.offset) / f.spacing));
  hi = static_cast<std::int64_t>(std::ceil((vmax - f.offset) / f.spacing)) - 1;
}

void discretize_into(const SurfaceSet& s, const Window& w, double r0, std::vector<Vec>& pts, std::vector<double>& wts) {
  const int d = s.dimension();
  std::visit(
      [&](const auto& sh) {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, HyperplaneFamily>) {
          std::int64_t lo, hi;
          plane_index_range(sh, w, lo, hi);
          for (std::int64_t k = lo; k <= hi; ++k) {
            if (sh.is_excluded(k)) continue;
            const double pos = sh.offset + static_cast<double>(k) * sh.spacing;
            if (d == 2) {
              const Vec p0 = pos * sh.normal;
              const Vec u = line_direction(sh.normal);
              double s0, s1;
              if (!clip_line(p0, u, w, s0, s1)) continue;
              const auto n = static_cast<std::size_t>(std::ceil((s1 - s0) / r0));
              const double step = (s1 - s0) / static_cast<double>(n);
              for (std::size_t j = 0; j < n; ++j) {
                pts.push_back(p0 + (s0 + (static_cast<double>(j) + 0.5) * step) * u);
                wts.push_back(step);
              }
            } else if (d == 3) {
              int axis = -1;
              for (int i = 0; i < 3; ++i)
                if (std::abs(std::abs(sh.normal[i]) - 1.0) < 1e-12) axis = i;
              if (axis < 0) throw InvalidInput("discretize: d = 3 families must have axis-aligned normals");
              const double coord = pos * sh.normal[axis];
              if (coord < w.lo[axis] || coord >= w.hi[axis]) continue;
              const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
              const auto n1 = static_cast<std::size_t>(std::ceil(w.side(a1) / r0));
              const auto n2 = static_cast<std::size_t>(std::ceil(w.side(a2) / r0));
              const double h1 = w.side(a1) / static_cast<double>(n1), h2 = w.side(a2) / static_cast<double>(n2);
              for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j) {
                  Vec p(3);
                  p[axis] = coord;
                  p[a1] = w.lo[a1] + (static_cast<double>(i) + 0.5) * h1;
                  p[a2] = w.lo[a2] + (static_cast<double>(j) + 0.5) * h2;
                  pts.push_back(p);
                  wts.push_back(h1 * h2);
                }
            } else {
              throw DimensionError("discretize: hyperplane families supported for d = 2, 3");
            }
          }
        } else if constexpr (std::is_same_v<T, SphereShell>) {
          if (d == 3) {
            const auto nb = static_cast<std::size_t>(std::ceil(std::numbers::pi * sh.radius / r0));
            const double db = std::numbers::pi / static_cast<double>(nb);
            for (std::size_t i = 0; i < nb; ++i) {
              const double beta = (static_cast<double>(i) + 0.5) * db;
              const double ring = 2.0 * std::numbers::pi * sh.radius * std::sin(beta);
              const auto na = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ring / r0)));
              const double da = 2.0 * std::numbers::pi / static_cast<double>(na);
              // Exact zone area split evenly over the ring.
              const double zone = 2.0 * std::numbers::pi * sh.radius * sh.radius *
                                  (std::cos(beta - 0.5 * db) - std::cos(beta + 0.5 * db)) / static_cast<double>(na);
              for (std::size_t j = 0; j < na; ++j) {
                const double a = (static_cast<double>(j) + 0.5) * da;
                const Vec p = sh.center + sh.radius * Vec{std::sin(beta) * std::cos(a), std::sin(beta) * std::sin(a),
                                                          std::cos(beta)};
                if (w.contains(p)) {
                  pts.push_back(p);
                  wts.push_back(zone);
                }
              }
            }
            return;
          }
          if (d != 2) throw DimensionError("discretize: sphere shells supported for d = 2, 3");
          const auto n = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi * sh.radius / r0));
          const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
          for (std::size_t j = 0; j < n; ++j) {
            const double a = (static_cast<double>(j) + 0.5) * step;
            const Vec p = sh.center + sh.radius * Vec{std::cos(a), std::sin(a)};
            if (w.contains(p)) {
              pts.push_back(p);
              wts.push_back(step * sh.radius);
            }
          }
        } else if constexpr (std::is_same_v<T, UnionOfSurfaces>) {
          for (const auto& m : sh.members) discretize_into(m, w, r0, pts, wts);
        } else if constexpr (std::is_same_v<T, WeightedPointMeasure>) {
          for (std::size_t i = 0; i < sh.points.size(); ++i) {
            if (w.contains(sh.points[i])) {
              pts.push_back(sh.points[i]);
              wts.push_back(sh.weights[i]);
            }
          }
        } else if constexpr (std::is_same_v<T, CrossingExcised>) {
          std::vector<Vec> bp;
          std::vector<double> bw;
          discretize_into(*sh.base, w, r0, bp, bw);
          for (std::size_t i = 0; i < bp.size(); ++i) {
            if (crossing_distance(sh, bp[i]) > sh.radius) {
              pts.push_back(bp[i]);
              wts.push_back(bw[i]);
            }
          }
        }
      },
      s.shape());
}

}  // namespace

void surface_quadrature(const SurfaceSet& s, const Window& w, double r0, std::vector<Vec>& points,
                        std::vector<double>& weights) {
  if (!(r0 > 0.0)) throw InvalidInput("surface_quadrature: resolution must be positive");
  require_same_dim(w.lo, s.dimension(), "quadrature window");
  points.clear();
  weights.clear();
  discretize_into(s, w, r0, points, weights);
}

SurfaceSet discretize(const SurfaceSet& s, const Window& w, double r0) {
  if (!(r0 > 0.0)) throw InvalidInput("discretize: resolution must be positive");
  require_same_dim(w.lo, s.dimension(), "discretization window");
  std::vector<Vec> pts;
  std::vector<double> wts;
  discretize_into(s, w, r0, pts, wts);
  return SurfaceSet::weighted_points(std::move(pts), std::move(wts), r0);
}

SurfaceSet read_point_file(const std::string& path, int d, double resolution) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open point file '" + path + "'");
  std::vector<Vec> pts;
  std::vector<double> wts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::vector<double> vals;
    double v;
    while (row >> v) vals.push_back(v);
    if (!row.eof()) throw InvalidInput(path + ":" + std::to_string(lineno) + ": non-numeric field");
    if (vals.empty()) continue;
    if (static_cast<int>(vals.size()) != d + 1)
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(d + 1) + " fields, got " +
                         std::to_string(vals.size()));
    pts.push_back(Vec::from_span(std::span<const double>(vals.data(), static_cast<std::size_t>(d))));
    wts.push_back(vals.back());
  }
  return SurfaceSet::weighted_points(std::move(pts), std::move(wts), resolution);
}

// ---------------------------------------------------------------- estimators

bool has_positive_measure(const SurfaceSet& s, const Window& w) {
  double half_diag = 0.0;
  for (int i = 0; i < w.dim(); ++i) half_diag += 0.25 * w.side(i) * w.side(i);
  half_diag = std::sqrt(half_diag);
  if (const auto* m = std::get_if<WeightedPointMeasure>(&s.shape()))
    half_diag = std::max(half_diag, 3.0 * m->resolution);
  return measure_in_ball(s, w.center(), half_diag) > 0.0;
}

RegularityProfile regularity_profile(const SurfaceSet& s, const std::vector<double>& radii,
                                     const ProfileBudget& budget, CounterRng& rng) {
  const int d = s.dimension();
  require_same_dim(budget.window.lo, d, "profile window");
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());
  for (double r : rs)
    if (!(r > 0.0 && r < 1.0)) throw InvalidInput("regularity_profile: radii must lie in (0, 1)");

  std::vector<Vec> centers;
  for (std::size_t i = 0; i < budget.uniform_centers; ++i) centers.push_back(sample_point_in_window(budget.window, rng));
  const auto on = sample_points_on(s, budget.window, budget.surface_centers, rng);
  centers.insert(centers.end(), on.begin(), on.end());
  const auto structured = structured_centers(s, budget.window);
  centers.insert(centers.end(), structured.begin(), structured.end());

  RegularityProfile p;
  p.centers_used = centers.size();
  const double floor_radius = [&] {
    if (const auto* m = std::get_if<WeightedPointMeasure>(&s.shape())) return 3.0 * m->resolution;
    return 0.0;
  }();
  for (double r : rs) {
    if (r < floor_radius * (1.0 - 1e-12)) {
      p.skipped_radii.push_back(r);
      continue;
    }
    const double norm_r = unit_ball_volume(d - 1) * std::pow(r, d - 1);
    double best = 0.0;
    for (const Vec& x : centers) best = std::max(best, measure_in_ball(s, x, r) / norm_r);
    p.radii.push_back(r);
    p.values.push_back(best);
  }
  if (p.values.empty()) throw ResolutionError("regularity_profile: every radius is below the resolution floor");
  p.empty_warning = std::all_of(p.values.begin(), p.values.end(), [](double v) { return v == 0.0; });

  const std::size_t k = std::min<std::size_t>(3, p.values.size());
  double vmax = -INFINITY, vmin = INFINITY;
  for (std::size_t i = 0; i < k; ++i) {
    vmax = std::max(vmax, p.values[i]);
    vmin = std::min(vmin, p.values[i]);
  }
  double intercept = vmax;
  if (k >= 2) {
    double mr = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      mr += p.radii[i] / static_cast<double>(k);
      mv += p.values[i] / static_cast<double>(k);
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      sxx += (p.radii[i] - mr) * (p.radii[i] - mr);
      sxy += (p.radii[i] - mr) * (p.values[i] - mv);
    }
    intercept = sxx > 0.0 ? mv - (sxy / sxx) * mr : mv;
  }
  p.phi0 = std::max(intercept, vmax);
  p.phi0_spread = vmax - vmin;
  return p;
}

Phi0Verdict check_phi0_floor(const RegularityProfile& profile, bool positive_measure) {
  Phi0Verdict v;
  v.phi0 = profile.phi0;
  if (!positive_measure) {
    v.checked = false;
    v.passed = true;
    v.message = "skipped: surface has zero measure in the window";
    return v;
  }
  v.checked = true;
  v.passed = profile.phi0 >= 1.0 - v.tolerance;
  std::ostringstream os;
  os.precision(6);
  os << "phi(0) = " << profile.phi0 << (v.passed ? " >= " : " < ") << 1.0 - v.tolerance;
  if (!v.passed) os << " (inconsistent surface construction or under-sampled profile)";
  v.message = os.str();
  return v;
}

DensityReport surface_density(const SurfaceSet& s, const std::vector<double>& radii, const DensityBudget& budget,
                              CounterRng& rng) {
  const int d = s.dimension();
  require_same_dim(budget.window.lo, d, "density window");
  if (radii.empty()) throw InvalidInput("surface_density: empty radius grid");
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());
  for (double r : rs)
    if (!(r > 0.0)) throw InvalidInput("surface_density: radii must be positive");

  std::vector<Vec> centers;
  for (std::size_t i = 0; i < budget.uniform_centers; ++i) centers.push_back(sample_point_in_window(budget.window, rng));
  const auto structured = structured_centers(s, budget.window);
  centers.insert(centers.end(), structured.begin(), structured.end());

  DensityReport rep;
  rep.radii = rs;
  rep.centers_used = centers.size();
  for (double r : rs) {
    const double vol = unit_ball_volume(d) * std::pow(r, d);
    double best = INFINITY;
    for (const Vec& x : centers) best = std::min(best, measure_in_ball(s, x, r) / vol);
    rep.inf_density.push_back(best);
  }

  const std::size_t n = rs.size();
  const std::size_t first = n / 2;
  const std::size_t m = n - first;
  if (m < 2) {
    rep.estimate = rep.inf_density.back();
    rep.uncertainty = 0.0;
  } else {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = first; i < n; ++i) {
      mx += 1.0 / rs[i] / static_cast<double>(m);
      my += rep.inf_density[i] / static_cast<double>(m);
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < n; ++i) {
      sxx += (1.0 / rs[i] - mx) * (1.0 / rs[i] - mx);
      sxy += (1.0 / rs[i] - mx) * (rep.inf_density[i] - my);
    }
    rep.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    rep.estimate = my - rep.slope * mx;
    double rss = 0.0;
    for (std::size_t i = first; i < n; ++i) {
      const double e = rep.inf_density[i] - (rep.estimate + rep.slope / rs[i]);
      rss += e * e;
    }
    rep.uncertainty = std::sqrt(rss / static_cast<double>(m)) + std::abs(rep.estimate - rep.inf_density.back());
  }
  std::ostringstream os;
  os << "upper estimate of the lower density: infimum over " << centers.size()
     << " sampled centers, extrapolated with D + c/R over the top " << m << " radii";
  rep.note = os.str();
  return rep;
}

}  // namespace mobsamp
