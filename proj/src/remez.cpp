#include "mobsamp/remez.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "mobsamp/error.hpp"

namespace mobsamp {

namespace {

constexpr double kLogClip = 50.0;

double solve_level(const RealFunction1D& g, double lo, double hi, double level, double glo, double ghi) {
  std::uintmax_t iters = 200;
  auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-13; };
  const auto r = boost::math::tools::toms748_solve([&](double t) { return g.value(t) - level; }, lo, hi, glo - level,
                                                   ghi - level, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

MonotonePieces::MonotonePieces(RealFunction1D g, double R) : g_(std::move(g)), R_(R) {
  if (!(R > 0.0)) throw InvalidInput("interval length must be positive");
  const double step = 1.0 / (64.0 * std::max(g_.bandwidth, 1.0));
  const auto ext = local_extrema(g_, 0.0, R, step);
  breaks_.push_back(0.0);
  values_.push_back(g_.value(0.0));
  for (const auto& e : ext) {
    if (e.t <= breaks_.back() || e.t >= R) continue;
    breaks_.push_back(e.t);
    values_.push_back(e.value);
  }
  breaks_.push_back(R);
  values_.push_back(g_.value(R));
  double vmax = 0.0;
  for (double v : values_) vmax = std::max(vmax, std::abs(v));
  if (vmax <= 1e-13) throw DegenerateSliceError("degenerate function: vanishes on [0, R]");
}

double MonotonePieces::sublevel(double eps, double a, double b) const {
  if (!(eps > 0.0)) throw InvalidInput("sublevel: epsilon must be positive");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    double lo = std::max(a, breaks_[i]);
    double hi = std::min(b, breaks_[i + 1]);
    if (hi <= lo) continue;
    const double glo = (lo == breaks_[i]) ? values_[i] : g_.value(lo);
    const double ghi = (hi == breaks_[i + 1]) ? values_[i + 1] : g_.value(hi);
    // On a monotone piece {-eps < g < eps} is one interval.
    const bool up = ghi >= glo;
    const double gmin = std::min(glo, ghi), gmax = std::max(glo, ghi);
    if (gmax <= -eps || gmin >= eps) continue;
    double s0, s1;  // parameter range where g is inside (-eps, eps)
    if (up) {
      s0 = (glo > -eps) ? lo : solve_level(g_, lo, hi, -eps, glo, ghi);
      s1 = (ghi < eps) ? hi : solve_level(g_, lo, hi, eps, glo, ghi);
    } else {
      s0 = (glo < eps) ? lo : solve_level(g_, lo, hi, eps, glo, ghi);
      s1 = (ghi > -eps) ? hi : solve_level(g_, lo, hi, -eps, glo, ghi);
    }
    total += std::max(0.0, s1 - s0);
  }
  return total;
}

double MonotonePieces::sup_abs(double a, double b) const {
  double m = std::max(std::abs(g_.value(a)), std::abs(g_.value(b)));
  for (std::size_t i = 0; i < breaks_.size(); ++i)
    if (breaks_[i] > a && breaks_[i] < b) m = std::max(m, std::abs(values_[i]));
  return m;
}

double sublevel_measure(const RealFunction1D& g, double R, double eps) {
  return MonotonePieces(g, R).sublevel(eps);
}

double interval_measure(const IntervalSet& f) {
  double m = 0.0;
  for (const auto& [a, b] : f) m += std::max(0.0, b - a);
  return m;
}

namespace {

RemezReport remez_from_pieces(const MonotonePieces& p, double sigma, const IntervalSet& f, double C) {
  const double R = p.R();
  RemezReport rep;
  rep.measure_f = interval_measure(f);
  if (!(rep.measure_f > 0.0)) throw InvalidInput("remez_check: F has zero measure");
  for (const auto& [a, b] : f) {
    if (a < 0.0 || b > R || b < a) throw InvalidInput("remez_check: F must lie inside [0, R)");
    rep.sup_on_f = std::max(rep.sup_on_f, p.sup_abs(a, b));
  }
  rep.lhs = p.sup_abs(0.0, R);
  const double base = std::log(2.0 * std::numbers::e * R / rep.measure_f);
  const double log_sup_f = std::log(std::max(rep.sup_on_f, 1e-300));
  rep.log_rhs = std::log(C) + (C + std::numbers::e * sigma * R) * base + log_sup_f;
  rep.pass = std::log(rep.lhs) <= rep.log_rhs + 1e-12;
  rep.final_line_pass = 0.0 <= std::log(8.0) + std::numbers::e * sigma * R * base + log_sup_f + 1e-12;
  return rep;
}

}  // namespace

RemezReport remez_check(const RealFunction1D& g, double sigma, double R, const IntervalSet& f, double C) {
  if (!(C > 0.0)) throw InvalidInput("remez_check: C must be positive");
  return remez_from_pieces(MonotonePieces(g, R), sigma, f, C);
}

double minimal_remez_constant(const RealFunction1D& g, double sigma, double R, const IntervalSet& f) {
  const MonotonePieces p(g, R);
  for (double C : {1.0, 2.0, 4.0, 8.0, 16.0})
    if (remez_from_pieces(p, sigma, f, C).pass) return C;
  return 0.0;
}

IntervalSet random_interval_set(double R, CounterRng& rng) {
  const int k = 1 + static_cast<int>(rng.uniform() * 4.0);
  const double total = rng.uniform(0.05, 0.5) * R;
  // Split the total among k pieces and the free space among k + 1 gaps.
  std::vector<double> piece(static_cast<std::size_t>(k)), gap(static_cast<std::size_t>(k) + 1);
  double ps = 0.0, gs = 0.0;
  for (auto& x : piece) ps += (x = rng.uniform(0.2, 1.0));
  for (auto& x : gap) gs += (x = rng.uniform(0.0, 1.0));
  const double free = R - total;
  IntervalSet out;
  double t = 0.0;
  for (int i = 0; i < k; ++i) {
    t += gap[static_cast<std::size_t>(i)] / gs * free;
    const double len = piece[static_cast<std::size_t>(i)] / ps * total;
    out.emplace_back(t, std::min(R, t + len));
    t += len;
  }
  return out;
}

std::vector<double> epsilon_grid(std::size_t n) {
  std::vector<double> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back(std::pow(10.0, -8.0 + 8.0 * static_cast<double>(i) / (n - 1)));
  return e;
}

SublevelReport sublevel_decay_check(const RealFunction1D& g, double sigma, double R, double C,
                                    const std::vector<double>& eps) {
  const MonotonePieces p(g, R);
  SublevelReport rep;
  rep.R = R;
  rep.epsilon = eps;
  rep.pass = true;
  std::vector<double> lx, ly;
  for (double e : eps) {
    const double m = p.sublevel(e);
    const double b = C * R * std::pow(C * e, 1.0 / (C * sigma * R));
    rep.measure.push_back(m);
    rep.bound.push_back(b);
    if (m > b * (1.0 + 1e-12)) rep.pass = false;
    if (m > 0.0) {
      lx.push_back(std::log(e));
      ly.push_back(std::log(m));
    }
  }
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    rep.fitted_exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return rep;
}

namespace {

double direct_from_pieces(const MonotonePieces& p) {
  const RealFunction1D& g = p.function();
  std::vector<double> cuts = p.breaks();
  for (const Zero& z : find_zeros(g, 0.0, p.R())) cuts.push_back(z.t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-13; }), cuts.end());
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto integrand = [&](double t) {
    const double a = std::abs(g.value(t));
    return a > 0.0 ? std::min(-std::log(a), kLogClip) : kLogClip;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) total += integrator.integrate(integrand, cuts[i], cuts[i + 1]);
  return total;
}

double layer_cake_from_pieces(const MonotonePieces& p) {
  // m(lambda) has kinks where e^{-lambda} meets a local value of |g|.
  std::vector<double> knots{0.0, kLogClip};
  for (double v : p.values()) {
    const double a = std::abs(v);
    if (a > 0.0 && a < 1.0 && -std::log(a) < kLogClip) knots.push_back(-std::log(a));
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto m = [&](double lambda) { return p.sublevel(std::exp(-lambda)); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (knots[i + 1] - knots[i] > 1e-12) total += integrator.integrate(m, knots[i], knots[i + 1], 1e-9);
  return total;
}

}  // namespace

double log_integral_direct(const RealFunction1D& g, double R) { return direct_from_pieces(MonotonePieces(g, R)); }

double log_integral_layer_cake(const RealFunction1D& g, double R) {
  return layer_cake_from_pieces(MonotonePieces(g, R));
}

LogIntegralBoundReport log_integral_bound_check(const RealFunction1D& g, double sigma, double R, double C) {
  const MonotonePieces p(g, R);
  LogIntegralBoundReport rep;
  rep.integral = layer_cake_from_pieces(p);
  rep.direct = direct_from_pieces(p);
  const double c_prime = C * C * std::pow(C, 1.0 / (C * sigma * R));
  rep.bound = c_prime * sigma * R * R;
  rep.pass = rep.integral <= rep.bound;
  return rep;
}

std::vector<double> normalized_log_integrals(const RealFunction1D& g, const std::vector<double>& radii) {
  std::vector<double> out;
  for (double R : radii) out.push_back(log_integral_direct(g, R) / (R * R));
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace mobsamp
