#include "mobsamp/scan1d.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "mobsamp/error.hpp"

namespace mobsamp {

RealFunction1D as_real_function(const BandlimitedFunction& g) {
  if (g.dimension() != 1) throw DimensionError("expected a one-dimensional function");
  RealFunction1D f;
  auto h = std::make_shared<const BandlimitedFunction>(g);
  f.value = [h](double t) { return h->evaluate(Vec{t}); };
  f.grid = [h](double t0, double step, std::size_t n, double* out) { evaluate_grid(*h, t0, step, n, out); };
  f.bandwidth = g.bandwidth();
  return f;
}

std::vector<double> sample_grid(const RealFunction1D& g, double a, double b, std::size_t n) {
  std::vector<double> v(n + 1);
  const double step = (b - a) / static_cast<double>(n);
  if (g.grid) {
    g.grid(a, step, n + 1, v.data());
  } else {
    for (std::size_t k = 0; k <= n; ++k) v[k] = g.value(a + static_cast<double>(k) * step);
  }
  return v;
}

namespace {

double bracket_root(const RealFunction1D& g, double lo, double hi, double flo, double fhi) {
  std::uintmax_t iters = 200;
  auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-12; };
  const auto r = boost::math::tools::toms748_solve(g.value, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

// Minimizer of s * g on [lo, hi].
std::pair<double, double> minimize_signed(const RealFunction1D& g, double lo, double hi, double s) {
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::brent_find_minima([&](double t) { return s * g.value(t); }, lo, hi,
                                                       std::numeric_limits<double>::digits / 2, iters);
  return {r.first, s * r.second};
}

}  // namespace

std::vector<Zero> find_zeros(const RealFunction1D& g, double a, double b) {
  if (!(b > a)) throw InvalidInput("find_zeros: empty interval");
  const double h = 1.0 / (32.0 * std::max(g.bandwidth, 1.0));
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / h));
  const double step = (b - a) / static_cast<double>(n);
  const auto v = sample_grid(g, a, b, n);
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  if (vmax <= 1e-13) throw DegenerateSliceError("degenerate slice: function vanishes on the scanned interval");

  auto t_at = [&](std::size_t k) { return a + static_cast<double>(k) * step; };
  std::vector<Zero> zeros;
  for (std::size_t k = 0; k <= n; ++k) {
    if (v[k] == 0.0) {
      const double left = k > 0 ? v[k - 1] : 0.0;
      const double right = k < n ? v[k + 1] : 0.0;
      zeros.push_back({t_at(k), (left * right > 0.0) ? 2 : 1});
      continue;
    }
    if (k < n && v[k + 1] != 0.0 && (v[k] < 0.0) != (v[k + 1] < 0.0)) {
      zeros.push_back({bracket_root(g, t_at(k), t_at(k + 1), v[k], v[k + 1]), 1});
    }
    // Sign-preserving dip: possible double zero or a pair the grid missed.
    if (k > 0 && k < n && v[k - 1] * v[k] > 0.0 && v[k] * v[k + 1] > 0.0 && std::abs(v[k]) <= std::abs(v[k - 1]) &&
        std::abs(v[k]) < std::abs(v[k + 1])) {
      const double s = v[k] > 0.0 ? 1.0 : -1.0;
      const auto [tm, gm] = minimize_signed(g, t_at(k - 1), t_at(k + 1), s);
      if (s * gm < 0.0) {
        zeros.push_back({bracket_root(g, t_at(k - 1), tm, v[k - 1], gm), 1});
        zeros.push_back({bracket_root(g, tm, t_at(k + 1), gm, v[k + 1]), 1});
      } else if (std::abs(gm) < 1e-10) {
        zeros.push_back({tm, 2});
      }
    }
  }
  std::sort(zeros.begin(), zeros.end(), [](const Zero& x, const Zero& y) { return x.t < y.t; });
  return zeros;
}

long count_zeros(const RealFunction1D& g, double s) {
  if (!(s > 0.0)) throw InvalidInput("count_zeros: half-width must be positive");
  long total = 0;
  for (const Zero& z : find_zeros(g, -s, s)) total += z.multiplicity;
  return total;
}

std::vector<Extremum> local_extrema(const RealFunction1D& g, double a, double b, double step) {
  if (!(b > a) || !(step > 0.0)) throw InvalidInput("local_extrema: bad interval or step");
  const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil((b - a) / step)));
  const double h = (b - a) / static_cast<double>(n);
  const auto v = sample_grid(g, a, b, n);
  std::vector<Extremum> out;
  for (std::size_t k = 1; k < n; ++k) {
    const bool is_max = v[k] > v[k - 1] && v[k] >= v[k + 1];
    const bool is_min = v[k] < v[k - 1] && v[k] <= v[k + 1];
    if (!is_max && !is_min) continue;
    const double lo = a + static_cast<double>(k - 1) * h;
    const double hi = a + static_cast<double>(k + 1) * h;
    const auto [t, val] = minimize_signed(g, lo, hi, is_min ? 1.0 : -1.0);
    out.push_back({t, val});
  }
  return out;
}

}  // namespace mobsamp
