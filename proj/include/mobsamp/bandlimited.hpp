#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "mobsamp/convex_body.hpp"
#include "mobsamp/rng.hpp"
#include "mobsamp/vec.hpp"

namespace mobsamp {

/// An upper bound on sup |f| together with how it was obtained.
struct SupCertificate {
  double bound = 0.0;
  std::string method;        // "coefficient-sum", "grid-periodic", "grid-window"
  bool global = false;       // false: valid on the scanned window only
  double resolution = 0.0;   // grid spacing actually used (0 when no grid)
};

/// f(x) = sum_j c_j exp(2 pi i xi_j . x) with every xi_j in the spectrum K.
class BandlimitedFunction {
 public:
  BandlimitedFunction(ConvexBody spectrum, std::vector<Vec> frequencies, std::vector<std::complex<double>> coefficients,
                      bool real_valued = false);

  /// The constant function `value` (single zero frequency).
  static BandlimitedFunction constant(const ConvexBody& spectrum, double value);

  int dimension() const { return spectrum_.dimension(); }
  const ConvexBody& spectrum() const { return spectrum_; }
  const std::vector<Vec>& frequencies() const { return freqs_; }
  const std::vector<std::complex<double>>& coefficients() const { return coeffs_; }
  std::size_t terms() const { return freqs_.size(); }
  bool real_valued() const { return real_; }

  std::complex<double> evaluate_complex(const Vec& x) const;
  /// Real part of f(x) (the value itself for real-valued f).
  double evaluate(const Vec& x) const;

  /// max_j |xi_j|.
  double bandwidth() const;
  /// sum_j |c_j|, a global bound on sup |f|.
  double coefficient_sum() const;

  const SupCertificate& certified_sup() const { return sup_; }
  void set_certified_sup(SupCertificate c) { sup_ = std::move(c); }

  /// Text form: header line, then one "xi_1 ... xi_d re im" row per term.
  std::string serialize() const;

 private:
  ConvexBody spectrum_;
  std::vector<Vec> freqs_;
  std::vector<std::complex<double>> coeffs_;
  bool real_;
  SupCertificate sup_;
};

/// Random member of PW_inf(K) with m base frequencies, normalized so that the
/// certified sup norm is 1. With `real_valued`, terms are paired as
/// (xi, c), (-xi, conj c). With `anchor`, coefficient phases are contracted
/// (phi -> phi / 3) when needed so that |f(0)| > 1/2.
BandlimitedFunction synthesize(const ConvexBody& k, std::size_t m, bool real_valued, bool anchor, CounterRng& rng);

/// g(t) = f(y + t theta) as a one-dimensional function with spectrum
/// [-h_K(theta), h_K(theta)].
BandlimitedFunction slice(const BandlimitedFunction& f, const Vec& y, const Vec& theta);

/// Analytic extension of a one-dimensional g at t + i s. Refuses |s| h > 50,
/// h the bandwidth.
std::complex<double> evaluate_complex(const BandlimitedFunction& g, std::complex<double> z);

/// |g(t + i s)| <= certified_sup * exp(2 pi h |s|).
bool growth_bound_holds(const BandlimitedFunction& g, std::complex<double> z);

/// Real parts of a one-dimensional g at t0 + k step, k < n.
void evaluate_grid(const BandlimitedFunction& g, double t0, double step, std::size_t n, double* out);

/// Grid scan of |f| over the window plus a Lipschitz remainder. For a
/// frequency lattice with period covered by the window, the scan is over one
/// period and the bound is global. Never exceeds the coefficient sum.
SupCertificate certify_sup_norm(const BandlimitedFunction& f, const Window& w, double resolution);

/// a f + b g (same spectrum).
BandlimitedFunction linear_combination(double a, const BandlimitedFunction& f, double b, const BandlimitedFunction& g);

/// x -> f(lambda x), with spectrum lambda K.
BandlimitedFunction dilate(const BandlimitedFunction& f, double lambda);

}  // namespace mobsamp
