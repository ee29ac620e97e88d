#include "mobsamp/nodal_ronkin.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mobsamp/convex_body.hpp"
#include "mobsamp/core_geometry.hpp"
#include "mobsamp/error.hpp"
#include "mobsamp/integral_geometry.hpp"
#include "mobsamp/parallel.hpp"
#include "mobsamp/scan1d.hpp"

namespace mobsamp {

namespace {

std::vector<Zero> slice_zeros(const BandlimitedFunction& f, const Vec& y, const Vec& theta, double a, double b) {
  const BandlimitedFunction g = slice(f, y, theta);
  return find_zeros(as_real_function(g), a, b);
}

}  // namespace

long count_slice_zeros(const BandlimitedFunction& f, const Vec& y, const Vec& theta, double s) {
  if (!f.real_valued()) throw InvalidInput("zero counting needs a real-valued function");
  const BandlimitedFunction g = slice(f, y, theta);
  return count_zeros(as_real_function(g), s);
}

ZeroCountProfile zero_count_profile(const BandlimitedFunction& f, const Vec& y, const Vec& theta,
                                    const std::vector<double>& radii) {
  if (radii.empty()) throw InvalidInput("zero_count_profile: no radii");
  ZeroCountProfile p;
  p.radii = radii;
  std::sort(p.radii.begin(), p.radii.end());
  const auto zeros = slice_zeros(f, y, theta, -p.radii.back(), p.radii.back());
  for (double s : p.radii) {
    long c = 0;
    for (const Zero& z : zeros)
      if (std::abs(z.t) <= s) c += z.multiplicity;
    p.counts.push_back(c);
  }
  return p;
}

JensenReport jensen_bound_check(const BandlimitedFunction& f, const Vec& y, const Vec& theta, double r) {
  if (!f.real_valued()) throw InvalidInput("jensen_bound_check: needs a real-valued function");
  if (!(r > 0.0)) throw InvalidInput("jensen_bound_check: radius must be positive");
  const BandlimitedFunction g = slice(f, y, theta);
  JensenReport rep;
  rep.g0 = std::abs(g.evaluate_complex(Vec{0.0}));
  if (rep.g0 == 0.0) throw InvalidInput("jensen_bound_check: g(0) = 0, the zero-count integral diverges");
  rep.h = support(f.spectrum(), theta);
  const auto zeros = find_zeros(as_real_function(g), -r, r);
  for (const Zero& z : zeros) {
    if (std::abs(z.t) < 1e-12) throw InvalidInput("jensen_bound_check: zero at t = 0");
    rep.lhs += z.multiplicity * std::log(r / std::abs(z.t));
    rep.zeros += z.multiplicity;
  }
  rep.rhs = 4.0 * rep.h * r + std::log(f.certified_sup().bound / rep.g0);
  rep.pass = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

NodalAreaEstimate nodal_area(const BandlimitedFunction& f, const Vec& center, double r, std::size_t n,
                             const CounterRng& rng) {
  if (!f.real_valued()) throw InvalidInput("nodal_area: needs a real-valued function");
  const int d = f.dimension();
  require_same_dim(center, d, "nodal_area center");
  if (n < 2) throw InvalidInput("nodal_area: need at least two lines");
  struct Partial {
    RunningStats stats;
    std::size_t degenerate = 0;
  };
  const auto parts = map_blocks<Partial>(block_count(n), [&](std::size_t b) {
    Partial p;
    CounterRng local = rng.substream(b);
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) {
      const Line l = sample_line_hitting_ball(d, r, local);
      const double half = std::sqrt(std::max(0.0, r * r - norm2(l.foot)));
      if (half <= 1e-12) {
        p.stats.add(0.0);
        continue;
      }
      try {
        long c = 0;
        for (const Zero& z : slice_zeros(f, center + l.foot, l.direction, -half, half)) c += z.multiplicity;
        p.stats.add(static_cast<double>(c));
      } catch (const DegenerateSliceError&) {
        ++p.degenerate;
      }
    }
    return p;
  });
  RunningStats all;
  NodalAreaEstimate est;
  for (const auto& p : parts) {
    all.merge(p.stats);
    est.degenerate += p.degenerate;
  }
  const double scale = kinematic_mass(d, r) / (2.0 * unit_ball_volume(d - 1));
  est.lines = n;
  est.value = scale * all.mean;
  est.standard_error = scale * all.standard_error();
  return est;
}

std::vector<double> log_spaced_radii(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) throw InvalidInput("log_spaced_radii: bad range");
  const auto n = static_cast<std::size_t>(std::ceil(std::log10(hi / lo) * per_decade));
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i)
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n)));
  out.back() = hi;
  return out;
}

RonkinReport ronkin_average(const BandlimitedFunction& f, double R, const std::vector<double>& radii, std::size_t n,
                            const CounterRng& rng) {
  if (!f.real_valued()) throw InvalidInput("ronkin_average: needs a real-valued function");
  if (!(R > 0.0)) throw InvalidInput("ronkin_average: radius must be positive");
  if (n < 2) throw InvalidInput("ronkin_average: need at least two lines");
  const int d = f.dimension();
  RonkinReport rep;
  rep.radii = radii;
  std::sort(rep.radii.begin(), rep.radii.end());
  const std::size_t nr = rep.radii.size();
  const double f_sup = f.certified_sup().bound;

  struct Partial {
    RunningStats integral;
    std::vector<RunningStats> counts;
    std::size_t degenerate = 0;
    long violations = 0;
  };
  const auto parts = map_blocks<Partial>(block_count(n), [&](std::size_t b) {
    Partial p;
    p.counts.resize(nr);
    CounterRng local = rng.substream(b);
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    std::vector<double> dist;
    for (std::size_t i = b * kBlockSize; i < end; ++i) {
      const Line l = sample_line_hitting_ball(d, R, local);
      const double y2 = norm2(l.foot);
      const double half = std::sqrt(std::max(0.0, R * R - y2));
      dist.clear();
      if (half > 1e-12) {
        try {
          for (const Zero& z : slice_zeros(f, l.foot, l.direction, -half, half))
            for (int k = 0; k < z.multiplicity; ++k) dist.push_back(std::sqrt(y2 + z.t * z.t));
        } catch (const DegenerateSliceError&) {
          ++p.degenerate;
          continue;
        }
      }
      double integral = 0.0;
      for (double rho : dist) integral += std::log(R / std::max(rho, 1e-300));
      p.integral.add(integral);
      for (std::size_t k = 0; k < nr; ++k) {
        double c = 0.0;
        for (double rho : dist)
          if (rho <= rep.radii[k]) c += 1.0;
        p.counts[k].add(c);
      }
      // Per-line form of the zero-count chain at scale R.
      const double fy = std::abs(f.evaluate_complex(l.foot));
      if (fy > 0.0) {
        const double u = 1.0 - y2 / (R * R);
        const double h = support(f.spectrum(), l.direction);
        const double bound = 4.0 * h * R * std::pow(u, 1.5) + u * std::log(f_sup / fy);
        if (integral > bound + 1e-9) ++p.violations;
      }
    }
    return p;
  });

  RunningStats integral;
  std::vector<RunningStats> counts(nr);
  for (const auto& p : parts) {
    integral.merge(p.integral);
    for (std::size_t k = 0; k < nr; ++k) counts[k].merge(p.counts[k]);
    rep.degenerate += p.degenerate;
    rep.line_violations += p.violations;
  }
  rep.lines = n;
  rep.average = d / (2.0 * R) * integral.mean;
  rep.standard_error = d / (2.0 * R) * integral.standard_error();
  const double scale = kinematic_mass(d, R) / (2.0 * unit_ball_volume(d - 1));
  for (std::size_t k = 0; k < nr; ++k) {
    rep.nodal_area.push_back(scale * counts[k].mean);
    rep.nodal_error.push_back(scale * counts[k].standard_error());
  }
  rep.bound = theorem_constant(d) / d * mean_width(f.spectrum());
  return rep;
}

double log_integral_unit_weight(int d, double R) { return d / ((d + 1.0) * R); }

LogIntegralEstimate log_integral_term(const BandlimitedFunction& f, double R, std::size_t n, const CounterRng& rng) {
  const int d = f.dimension();
  if (d < 2) throw DimensionError("log_integral_term: requires d >= 2");
  if (!(R > 0.0)) throw InvalidInput("log_integral_term: radius must be positive");
  if (n < 2) throw InvalidInput("log_integral_term: need at least two samples");
  struct Partial {
    RunningStats stats;
    std::size_t clipped = 0;
  };
  const auto parts = map_blocks<Partial>(block_count(n), [&](std::size_t b) {
    Partial p;
    CounterRng local = rng.substream(b);
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) {
      const double r = R * std::pow(local.uniform(), 1.0 / (d - 1));
      const Vec y = r * sample_direction(d, local);
      const double a = std::abs(f.evaluate_complex(y));
      double L = a > 0.0 ? -std::log(a) : INFINITY;
      if (L > 50.0) {
        L = 50.0;
        ++p.clipped;
      }
      p.stats.add(L * (R * R - r * r));
    }
    return p;
  });
  RunningStats all;
  LogIntegralEstimate est;
  for (const auto& p : parts) {
    all.merge(p.stats);
    est.clipped += p.clipped;
  }
  const double scale = d / (2.0 * R * R * R);
  est.samples = n;
  est.value = scale * all.mean;
  est.standard_error = scale * all.standard_error();
  const double frac = static_cast<double>(est.clipped) / static_cast<double>(n);
  if (frac > 0.005) {
    est.widened = true;
    est.standard_error += frac * 50.0 * d / (2.0 * R);
  }
  return est;
}

Lemma41Report lemma41_inequality_check(const BandlimitedFunction& f, double R, std::size_t lines,
                                       std::size_t samples, const CounterRng& rng) {
  const int d = f.dimension();
  Lemma41Report rep;
  const RonkinReport ronkin = ronkin_average(f, R, {R}, lines, rng.substream(0));
  const LogIntegralEstimate log_term = log_integral_term(f, R, samples, rng.substream(1));
  rep.lhs = ronkin.average;
  rep.lhs_error = ronkin.standard_error;
  rep.width_term = mean_width(f.spectrum()) * (3.0 * d / (4.0 + 2.0 * d)) * unit_ball_volume(d) /
                   unit_ball_volume(d - 1);
  rep.log_term = log_term.value;
  rep.log_error = log_term.standard_error;
  rep.rhs = rep.width_term + rep.log_term;
  rep.tolerance = 3.0 * std::hypot(rep.lhs_error, rep.log_error);
  rep.pass = rep.lhs <= rep.rhs + rep.tolerance;
  rep.line_violations = ronkin.line_violations;
  return rep;
}

double beta_integral_numeric(int d) {
  if (d < 2 || d > kMaxDim) throw DimensionError("beta_integral_numeric: d must be in [2, 4]");
  // Polar coordinates in R^{d-1}: |S^{d-2}| = (d - 1) omega_{d-1}.
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double radial =
      integrator.integrate([d](double r) { return std::pow(1.0 - r * r, 1.5) * std::pow(r, d - 2); }, 0.0, 1.0);
  return (d - 1) * radial;
}

double beta_integral_closed_form(int d) {
  return 3.0 / (2.0 * (2.0 + d)) * unit_ball_volume(d) / unit_ball_volume(d - 1);
}

}  // namespace mobsamp
