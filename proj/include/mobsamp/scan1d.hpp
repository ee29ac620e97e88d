#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mobsamp/bandlimited.hpp"

namespace mobsamp {

/// Real function of one variable with a known frequency bound. `grid`, when
/// set, evaluates t0 + k step for k < n in one pass.
struct RealFunction1D {
  std::function<double(double)> value;
  std::function<void(double, double, std::size_t, double*)> grid;
  double bandwidth = 1.0;
};

/// Real part of a one-dimensional band-limited function (holds its own copy).
RealFunction1D as_real_function(const BandlimitedFunction& g);

struct Zero {
  double t;
  int multiplicity;  // 1 at sign changes, 2 at sign-preserving touches
};

/// Zeros in [a, b]: sign-change scan at step 1 / (32 max(bandwidth, 1)),
/// bracketing to 1e-12, plus Brent refinement of |g| minima below 1e-10.
/// Throws DegenerateSliceError when the scanned maximum is <= 1e-13.
std::vector<Zero> find_zeros(const RealFunction1D& g, double a, double b);

/// Number of zeros in [-s, s] counted with multiplicity.
long count_zeros(const RealFunction1D& g, double s);

struct Extremum {
  double t;
  double value;
};

/// Interior local extrema of g on [a, b], located on a grid of the given step
/// and refined with Brent's method; sorted by t.
std::vector<Extremum> local_extrema(const RealFunction1D& g, double a, double b, double step);

/// Values of g on the uniform grid a + k (b - a) / n, k = 0..n.
std::vector<double> sample_grid(const RealFunction1D& g, double a, double b, std::size_t n);

}  // namespace mobsamp
