#pragma once

#include <cstddef>
#include <vector>

#include "mobsamp/bandlimited.hpp"
#include "mobsamp/rng.hpp"
#include "mobsamp/vec.hpp"

namespace mobsamp {

/// Zero count of the slice t -> f(y + t theta) on [-s, s], with multiplicity.
long count_slice_zeros(const BandlimitedFunction& f, const Vec& y, const Vec& theta, double s);

struct ZeroCountProfile {
  std::vector<double> radii;
  std::vector<long> counts;  // non-decreasing
};

ZeroCountProfile zero_count_profile(const BandlimitedFunction& f, const Vec& y, const Vec& theta,
                                    const std::vector<double>& radii);

struct JensenReport {
  double lhs = 0.0;      // sum over zeros |t| <= r of log(r / |t|)
  double rhs = 0.0;      // 4 h_K(theta) r + log(sup / |g(0)|)
  double h = 0.0;
  double g0 = 0.0;
  long zeros = 0;
  bool pass = false;     // lhs <= rhs + 1e-9
};

/// Real zeros of the slice against the growth bound at radius r. Throws when
/// g(0) = 0.
JensenReport jensen_bound_check(const BandlimitedFunction& f, const Vec& y, const Vec& theta, double r);

struct NodalAreaEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t lines = 0;
  std::size_t degenerate = 0;
};

/// H^{d-1}({f = 0} cap B(center, r)) by Crofton over n lines.
NodalAreaEstimate nodal_area(const BandlimitedFunction& f, const Vec& center, double r, std::size_t n,
                             const CounterRng& rng);

/// Geometric radii lo .. hi with `per_decade` points per factor 10 (both ends included).
std::vector<double> log_spaced_radii(double lo, double hi, int per_decade);

struct RonkinReport {
  double average = 0.0;          // (1/(omega_d R^d)) int_0^R H^{d-1}({f=0} cap B(0,r)) dr / r
  double standard_error = 0.0;
  double bound = 0.0;            // (A_d / d) W(K)
  std::vector<double> radii;     // radial profile
  std::vector<double> nodal_area;
  std::vector<double> nodal_error;
  std::size_t lines = 0;
  std::size_t degenerate = 0;
  long line_violations = 0;      // per-line zero-count inequality failures
};

/// Lines meeting B(0, R) with each line's zeros accumulated exactly:
/// a zero at distance rho from the origin contributes log(R / rho).
RonkinReport ronkin_average(const BandlimitedFunction& f, double R, const std::vector<double>& radii, std::size_t n,
                            const CounterRng& rng);

struct LogIntegralEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
  std::size_t clipped = 0;
  bool widened = false;   // clip fraction above 0.5%
};

/// ((d-1) / (2 omega_d R^{d+2})) int_{B(0,R)} log(1/|f|) (R^2 - |y|^2) / |y|,
/// with log(1/|f|) clipped at 50.
LogIntegralEstimate log_integral_term(const BandlimitedFunction& f, double R, std::size_t n, const CounterRng& rng);

/// d / ((d + 1) R): the term above when log(1/|f|) is replaced by 1.
double log_integral_unit_weight(int d, double R);

struct Lemma41Report {
  double lhs = 0.0;
  double lhs_error = 0.0;
  double width_term = 0.0;  // W(K) (3d / (4 + 2d)) (omega_d / omega_{d-1})
  double log_term = 0.0;
  double log_error = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;   // 3 combined standard errors
  bool pass = false;
  long line_violations = 0;
};

Lemma41Report lemma41_inequality_check(const BandlimitedFunction& f, double R, std::size_t lines,
                                       std::size_t samples, const CounterRng& rng);

/// (1 / omega_{d-1}) int_{B^{d-1}} (1 - |y|^2)^{3/2} by quadrature.
double beta_integral_numeric(int d);
/// (3 / (2 (2 + d))) omega_d / omega_{d-1}.
double beta_integral_closed_form(int d);

}  // namespace mobsamp
