#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mobsamp/rng.hpp"
#include "mobsamp/scan1d.hpp"

namespace mobsamp {

/// A real function on [0, R) together with its monotone pieces: the interior
/// critical points split [0, R] into intervals on which g is monotone.
class MonotonePieces {
 public:
  MonotonePieces(RealFunction1D g, double R);

  double R() const { return R_; }
  const RealFunction1D& function() const { return g_; }
  /// Breakpoints 0 = b_0 < ... < b_k = R and the values of g there.
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

  /// m_1({t in [a, b] : |g(t)| < eps}) for [a, b] inside [0, R].
  double sublevel(double eps, double a, double b) const;
  double sublevel(double eps) const { return sublevel(eps, 0.0, R_); }

  /// max |g| on [a, b].
  double sup_abs(double a, double b) const;

 private:
  RealFunction1D g_;
  double R_;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// m_1([0, R) cap {|g| < eps}).
double sublevel_measure(const RealFunction1D& g, double R, double eps);

using IntervalSet = std::vector<std::pair<double, double>>;

double interval_measure(const IntervalSet& f);

struct RemezReport {
  double lhs = 0.0;          // sup over [0, R) of |g|
  double sup_on_f = 0.0;     // sup over F of |g|
  double measure_f = 0.0;
  double log_rhs = 0.0;      // log of C (2eR/m(F))^{C + e sigma R} sup_F |g|
  bool pass = false;
  bool final_line_pass = false;  // 1 <= 8 (2eR/m(F))^{e sigma R} sup_F |g|
};

RemezReport remez_check(const RealFunction1D& g, double sigma, double R, const IntervalSet& f, double C);

/// Smallest C in {1, 2, 4, 8, 16} that passes, or 0 if none does.
double minimal_remez_constant(const RealFunction1D& g, double sigma, double R, const IntervalSet& f);

/// Random union of 1..4 disjoint intervals in [0, R) with total measure
/// drawn uniformly from [0.05 R, 0.5 R].
IntervalSet random_interval_set(double R, CounterRng& rng);

struct SublevelReport {
  double R = 0.0;
  std::vector<double> epsilon;
  std::vector<double> measure;
  std::vector<double> bound;    // C R (C eps)^{1 / (C sigma R)}
  double fitted_exponent = 0.0; // slope of log m against log eps where m > 0
  bool pass = false;
};

/// Log grid of eps over [1e-8, 1].
std::vector<double> epsilon_grid(std::size_t n = 33);

SublevelReport sublevel_decay_check(const RealFunction1D& g, double sigma, double R, double C,
                                    const std::vector<double>& eps = epsilon_grid());

/// min(log(1/|g|), 50) integrated over [0, R] between zeros and extrema.
double log_integral_direct(const RealFunction1D& g, double R);

/// The same integral as int_0^50 m_1({|g| < e^{-lambda}}) d lambda.
double log_integral_layer_cake(const RealFunction1D& g, double R);

struct LogIntegralBoundReport {
  double integral = 0.0;   // layer-cake value
  double direct = 0.0;     // direct quadrature
  double bound = 0.0;      // C' sigma R^2, C' = C^2 C^{1/(C sigma R)}
  bool pass = false;
};

LogIntegralBoundReport log_integral_bound_check(const RealFunction1D& g, double sigma, double R, double C);

/// (1/R^2) int_0^R log(1/|g|) for each R.
std::vector<double> normalized_log_integrals(const RealFunction1D& g, const std::vector<double>& radii);

bool strictly_decreasing(const std::vector<double>& v);

}  // namespace mobsamp
