#include "mobsamp/bandlimited.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include "mobsamp/error.hpp"

namespace mobsamp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> phase(double x) { return {std::cos(kTwoPi * x), std::sin(kTwoPi * x)}; }

bool close_vec(const Vec& a, const Vec& b, double tol) {
  for (int i = 0; i < a.dim(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

}  // namespace

BandlimitedFunction::BandlimitedFunction(ConvexBody spectrum, std::vector<Vec> frequencies,
                                         std::vector<std::complex<double>> coefficients, bool real_valued)
    : spectrum_(std::move(spectrum)), freqs_(std::move(frequencies)), coeffs_(std::move(coefficients)),
      real_(real_valued) {
  if (freqs_.size() != coeffs_.size()) throw InvalidInput("bandlimited function: frequency/coefficient count mismatch");
  if (freqs_.empty()) throw InvalidInput("bandlimited function: needs at least one term");
  const int d = spectrum_.dimension();
  for (const Vec& xi : freqs_) {
    require_same_dim(xi, d, "frequency");
    if (!contains_frequency(spectrum_, xi)) {
      std::ostringstream os;
      os.precision(12);
      os << "bandlimited function: frequency (";
      for (int i = 0; i < d; ++i) os << (i ? ", " : "") << xi[i];
      os << ") lies outside the spectrum " << spectrum_.describe();
      throw InvalidInput(os.str());
    }
  }
  if (real_) {
    std::vector<bool> used(freqs_.size(), false);
    for (std::size_t i = 0; i < freqs_.size(); ++i) {
      if (used[i]) continue;
      const double tol = 1e-12 * std::max(1.0, std::abs(coeffs_[i]));
      bool matched = false;
      for (std::size_t j = i; j < freqs_.size() && !matched; ++j) {
        if (used[j] || !close_vec(freqs_[j], -freqs_[i], 1e-12)) continue;
        if (std::abs(coeffs_[j] - std::conj(coeffs_[i])) > tol) continue;
        used[i] = used[j] = true;
        matched = true;
      }
      if (!matched) throw InvalidInput("bandlimited function: real-valued flag set but terms are not conjugate-paired");
    }
  }
  sup_ = SupCertificate{coefficient_sum(), "coefficient-sum", true, 0.0};
}

BandlimitedFunction BandlimitedFunction::constant(const ConvexBody& spectrum, double value) {
  return BandlimitedFunction(spectrum, {Vec(spectrum.dimension())}, {std::complex<double>(value, 0.0)}, true);
}

std::complex<double> BandlimitedFunction::evaluate_complex(const Vec& x) const {
  require_same_dim(x, dimension(), "evaluation point");
  std::complex<double> s = 0.0;
  for (std::size_t j = 0; j < freqs_.size(); ++j) s += coeffs_[j] * phase(dot(freqs_[j], x));
  return s;
}

double BandlimitedFunction::evaluate(const Vec& x) const { return evaluate_complex(x).real(); }

double BandlimitedFunction::bandwidth() const {
  double h = 0.0;
  for (const Vec& xi : freqs_) h = std::max(h, norm(xi));
  return h;
}

double BandlimitedFunction::coefficient_sum() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::abs(c);
  return s;
}

std::string BandlimitedFunction::serialize() const {
  std::ostringstream os;
  os.precision(17);
  os << "bandlimited d=" << dimension() << " terms=" << terms() << " real=" << (real_ ? 1 : 0)
     << " spectrum=" << spectrum_.describe() << "\n";
  for (std::size_t j = 0; j < freqs_.size(); ++j) {
    for (int i = 0; i < dimension(); ++i) os << freqs_[j][i] << ' ';
    os << coeffs_[j].real() << ' ' << coeffs_[j].imag() << "\n";
  }
  return os.str();
}

BandlimitedFunction synthesize(const ConvexBody& k, std::size_t m, bool real_valued, bool anchor, CounterRng& rng) {
  if (m < 1) throw InvalidInput("synthesize: need at least one frequency");
  const int d = k.dimension();
  const Vec half = bounding_half_widths(k);
  double last_f0 = 0.0;
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<Vec> base;
    std::vector<std::complex<double>> coef;
    for (std::size_t j = 0; j < m; ++j) {
      Vec xi(d);
      bool inside = false;
      for (int tries = 0; tries < 100000 && !inside; ++tries) {
        for (int i = 0; i < d; ++i) xi[i] = rng.uniform(-half[i], half[i]);
        inside = contains_frequency(k, xi);
      }
      if (!inside) throw InvalidInput("synthesize: rejection sampling of the spectrum failed");
      base.push_back(xi);
      const double re = rng.normal(), im = rng.normal();
      coef.emplace_back(re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0);
    }
    auto assemble = [&](const std::vector<std::complex<double>>& c) {
      std::vector<Vec> xs;
      std::vector<std::complex<double>> cs;
      for (std::size_t j = 0; j < m; ++j) {
        xs.push_back(base[j]);
        cs.push_back(c[j]);
        if (real_valued) {
          xs.push_back(-base[j]);
          cs.push_back(std::conj(c[j]));
        }
      }
      double total = 0.0;
      for (const auto& v : cs) total += std::abs(v);
      for (auto& v : cs) v /= total;
      BandlimitedFunction f(k, std::move(xs), std::move(cs), real_valued);
      f.set_certified_sup(SupCertificate{1.0, "coefficient-sum", true, 0.0});
      return f;
    };
    BandlimitedFunction f = assemble(coef);
    if (!anchor) return f;
    last_f0 = std::abs(f.evaluate_complex(Vec(d)));
    if (last_f0 > 0.5) return f;
    for (auto& c : coef) c = std::polar(std::abs(c), std::arg(c) / 3.0);
    BandlimitedFunction g = assemble(coef);
    last_f0 = std::abs(g.evaluate_complex(Vec(d)));
    if (last_f0 > 0.5) return g;
  }
  std::ostringstream os;
  os << "synthesize: anchoring failed after 16 attempts (last |f(0)| = " << last_f0 << ")";
  throw InvalidInput(os.str());
}

BandlimitedFunction slice(const BandlimitedFunction& f, const Vec& y, const Vec& theta) {
  const int d = f.dimension();
  require_same_dim(y, d, "slice base point");
  require_same_dim(theta, d, "slice direction");
  const double h = support(f.spectrum(), theta);
  std::vector<Vec> nus;
  std::vector<std::complex<double>> as;
  for (std::size_t j = 0; j < f.terms(); ++j) {
    const double nu = dot(f.frequencies()[j], theta);
    if (std::abs(nu) > h + 1e-12) throw InvalidInput("slice: projected frequency exceeds the support function");
    nus.push_back(Vec{std::clamp(nu, -h, h)});
    as.push_back(f.coefficients()[j] * phase(dot(f.frequencies()[j], y)));
  }
  BandlimitedFunction g(ConvexBody::box(Vec{std::max(h, 1e-300)}), std::move(nus), std::move(as), f.real_valued());
  g.set_certified_sup(f.certified_sup());
  return g;
}

std::complex<double> evaluate_complex(const BandlimitedFunction& g, std::complex<double> z) {
  if (g.dimension() != 1) throw DimensionError("evaluate_complex: needs a one-dimensional function");
  const double h = g.bandwidth();
  if (h > 0.0 && std::abs(z.imag()) * h > 50.0)
    throw InvalidInput("evaluate_complex: |Im z| * bandwidth exceeds the overflow guard (50)");
  std::complex<double> s = 0.0;
  for (std::size_t j = 0; j < g.terms(); ++j) {
    const double nu = g.frequencies()[j][0];
    s += g.coefficients()[j] * std::exp(std::complex<double>(0.0, kTwoPi * nu) * z);
  }
  return s;
}

bool growth_bound_holds(const BandlimitedFunction& g, std::complex<double> z) {
  const double bound = g.certified_sup().bound * std::exp(kTwoPi * g.bandwidth() * std::abs(z.imag()));
  return std::abs(evaluate_complex(g, z)) <= bound * (1.0 + 1e-12);
}

void evaluate_grid(const BandlimitedFunction& g, double t0, double step, std::size_t n, double* out) {
  if (g.dimension() != 1) throw DimensionError("evaluate_grid: needs a one-dimensional function");
  const std::size_t m = g.terms();
  std::vector<std::complex<double>> z(m), w(m);
  constexpr std::size_t kResync = 256;
  for (std::size_t k = 0; k < n; ++k) {
    if (k % kResync == 0) {
      const double t = t0 + static_cast<double>(k) * step;
      for (std::size_t j = 0; j < m; ++j) {
        const double nu = g.frequencies()[j][0];
        z[j] = g.coefficients()[j] * phase(nu * t);
        w[j] = phase(nu * step);
      }
    }
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      s += z[j].real();
      z[j] *= w[j];
    }
    out[k] = s;
  }
}

namespace {

// Smallest q <= 16 with q x integral for every x, or 0.
int common_denominator(const std::vector<double>& xs) {
  int q = 1;
  for (double x : xs) {
    int qx = 0;
    for (int c = 1; c <= 16; ++c) {
      if (std::abs(x * c - std::round(x * c)) < 1e-9) {
        qx = c;
        break;
      }
    }
    if (qx == 0) return 0;
    q = std::lcm(q, qx);
    if (q > 16 * 16) return 0;
  }
  return q;
}

}  // namespace

SupCertificate certify_sup_norm(const BandlimitedFunction& f, const Window& w, double resolution) {
  const int d = f.dimension();
  require_same_dim(w.lo, d, "sup-norm window");
  if (!(resolution > 0.0)) throw InvalidInput("certify_sup_norm: resolution must be positive");
  const double width = mean_width(f.spectrum());
  for (int i = 0; i < d; ++i)
    if (w.side(i) < 2.0 / width * (1.0 - 1e-12))
      throw InvalidInput("certify_sup_norm: window side must be at least 2 / W(K)");

  const double coef_sum = f.coefficient_sum();
  const double lipschitz = 2.0 * std::numbers::pi * coef_sum * f.bandwidth();

  // Period per axis (0: constant along that axis, -1: aperiodic).
  bool periodic = true;
  std::vector<double> period(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    std::vector<double> comps;
    bool all_zero = true;
    for (const Vec& xi : f.frequencies()) {
      comps.push_back(xi[i]);
      if (xi[i] != 0.0) all_zero = false;
    }
    if (all_zero) {
      period[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    const int q = common_denominator(comps);
    if (q == 0 || w.side(i) < q) periodic = false;
    period[static_cast<std::size_t>(i)] = q;
  }

  std::vector<double> lo(static_cast<std::size_t>(d)), span(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    lo[static_cast<std::size_t>(i)] = w.lo[i];
    span[static_cast<std::size_t>(i)] = periodic ? period[static_cast<std::size_t>(i)] : w.side(i);
  }
  constexpr double kMaxPoints = 4194304.0;
  double res = resolution;
  auto total_points = [&](double r) {
    double n = 1.0;
    for (double s : span) n *= std::ceil(s / r) + 1.0;
    return n;
  };
  while (total_points(res) > kMaxPoints) res *= 1.25;

  std::vector<std::size_t> npts(static_cast<std::size_t>(d));
  std::vector<double> step(static_cast<std::size_t>(d));
  double diag2 = 0.0;
  for (std::size_t i = 0; i < npts.size(); ++i) {
    if (span[i] == 0.0) {
      npts[i] = 1;
      step[i] = 0.0;
      continue;
    }
    npts[i] = static_cast<std::size_t>(std::ceil(span[i] / res)) + 1;
    step[i] = span[i] / static_cast<double>(npts[i] - 1);
    diag2 += step[i] * step[i];
  }
  const double rho = 0.5 * std::sqrt(diag2);

  // Separable tables: tab[i][k * m + j] = exp(2 pi i xi_j[i] (lo_i + k step_i)).
  const std::size_t m = f.terms();
  std::vector<std::vector<std::complex<double>>> tab(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < tab.size(); ++i) {
    tab[i].resize(npts[i] * m);
    for (std::size_t k = 0; k < npts[i]; ++k)
      for (std::size_t j = 0; j < m; ++j)
        tab[i][k * m + j] = phase(f.frequencies()[j][static_cast<int>(i)] * (lo[i] + static_cast<double>(k) * step[i]));
  }
  double grid_max = 0.0;
  std::vector<std::vector<std::complex<double>>> partial(static_cast<std::size_t>(d) + 1,
                                                         std::vector<std::complex<double>>(m));
  partial[0] = f.coefficients();
  std::function<void(std::size_t)> recurse = [&](std::size_t axis) {
    const auto& prev = partial[axis];
    auto& next = partial[axis + 1];
    for (std::size_t k = 0; k < npts[axis]; ++k) {
      const std::complex<double>* row = &tab[axis][k * m];
      if (axis + 1 == tab.size()) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += prev[j] * row[j];
        grid_max = std::max(grid_max, std::abs(s));
      } else {
        for (std::size_t j = 0; j < m; ++j) next[j] = prev[j] * row[j];
        recurse(axis + 1);
      }
    }
  };
  recurse(0);

  SupCertificate c;
  c.resolution = res;
  if (periodic) {
    // At an interior maximum of |f|^2 the gradient vanishes; the Hessian of
    // |f|^2 is bounded by 2 (|grad f|^2 + |f| |D^2 f|).
    const double curvature = 8.0 * std::numbers::pi * std::numbers::pi * coef_sum * coef_sum * f.bandwidth() *
                             f.bandwidth();
    c.bound = std::sqrt(grid_max * grid_max + curvature * rho * rho);
    c.method = "grid-periodic";
    c.global = true;
  } else {
    c.bound = grid_max + lipschitz * rho;
    c.method = "grid-window";
    c.global = false;
  }
  if (coef_sum <= c.bound) {
    c.bound = coef_sum;
    c.method = "coefficient-sum";
    c.global = true;
    c.resolution = 0.0;
  }
  return c;
}

BandlimitedFunction linear_combination(double a, const BandlimitedFunction& f, double b, const BandlimitedFunction& g) {
  if (f.spectrum().describe() != g.spectrum().describe())
    throw InvalidInput("linear_combination: spectra differ");
  std::vector<Vec> xs = f.frequencies();
  std::vector<std::complex<double>> cs;
  for (const auto& c : f.coefficients()) cs.push_back(a * c);
  xs.insert(xs.end(), g.frequencies().begin(), g.frequencies().end());
  for (const auto& c : g.coefficients()) cs.push_back(b * c);
  return BandlimitedFunction(f.spectrum(), std::move(xs), std::move(cs), f.real_valued() && g.real_valued());
}

BandlimitedFunction dilate(const BandlimitedFunction& f, double lambda) {
  std::vector<Vec> xs = f.frequencies();
  for (auto& x : xs) x *= lambda;
  BandlimitedFunction g(scaled(f.spectrum(), lambda), std::move(xs), f.coefficients(), f.real_valued());
  g.set_certified_sup(f.certified_sup());
  return g;
}

}  // namespace mobsamp
