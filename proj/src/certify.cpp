#include "mobsamp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "mobsamp/core_geometry.hpp"
#include "mobsamp/error.hpp"
#include "mobsamp/nodal_ronkin.hpp"
#include "mobsamp/parallel.hpp"

namespace mobsamp {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "CERTIFIED";
    case Verdict::NotCertified: return "NOT-CERTIFIED";
    default: return "INCONCLUSIVE";
  }
}

CertifyBudget default_certify_budget(int d) {
  CertifyBudget b;
  b.window = Window::cube(d, -10.0, 10.0);
  for (double r = 10.0; r <= 50.0 + 1e-9; r += 5.0) b.density_radii.push_back(r);
  b.profile_radii = log_spaced_radii(1e-4, 0.5, 8);
  return b;
}

namespace {

Assessment assess(const SurfaceSet& gamma, double scale, const CertifyBudget& budget, const CounterRng& rng) {
  Assessment a;
  a.surface_id = gamma.describe();
  try {
    a.positive_measure = has_positive_measure(gamma, budget.window);
    if (!a.positive_measure) {
      a.verdict = Verdict::NotCertified;
      a.diagnostic = "surface has zero measure in the window";
      return a;
    }
    CounterRng density_rng = rng.substream(0);
    CounterRng profile_rng = rng.substream(1);
    const DensityReport dens =
        surface_density(gamma, budget.density_radii, DensityBudget{budget.window, budget.density_centers}, density_rng);
    const RegularityProfile prof = regularity_profile(
        gamma, budget.profile_radii, ProfileBudget{budget.window, budget.profile_centers, budget.surface_centers},
        profile_rng);
    a.density = dens.estimate;
    a.density_uncertainty = dens.uncertainty;
    a.centers_used = dens.centers_used;
    a.phi0 = prof.phi0;
    a.phi0_spread = prof.phi0_spread;
    a.phi_check = check_phi0_floor(prof, true);
    a.threshold = a.phi0 * scale;
    a.margin = a.density - a.threshold;
    a.uncertainty = a.density_uncertainty + a.phi0_spread * scale;
    if (!a.phi_check.passed) {
      a.verdict = Verdict::Inconclusive;
      a.diagnostic = a.phi_check.message;
    } else if (a.margin > a.uncertainty) {
      a.verdict = Verdict::Certified;
    } else if (std::abs(a.margin) <= a.uncertainty) {
      a.verdict = Verdict::Inconclusive;
    } else {
      a.verdict = Verdict::NotCertified;
    }
  } catch (const std::exception& e) {
    a.verdict = Verdict::Inconclusive;
    a.diagnostic = e.what();
  }
  return a;
}

}  // namespace

CertificationReport certify(const SurfaceSet& gamma, const ConvexBody& k, const CertifyBudget& budget,
                            const CounterRng& rng) {
  if (gamma.dimension() != k.dimension()) throw DimensionError("certify: surface and spectrum dimensions differ");
  const int d = k.dimension();
  CertificationReport r;
  r.spectrum_id = k.describe();
  r.dimension = d;
  r.mean_width = mean_width(k);
  r.constant = theorem_constant(d);
  const double scale = r.constant * r.mean_width;

  r.assessments.push_back(assess(gamma, scale, budget, rng.substream(0)));
  if (d == 2 && budget.excision_radius > 0.0 && has_crossings(gamma)) {
    r.assessments.push_back(
        assess(SurfaceSet::crossing_excised(gamma, budget.excision_radius), scale, budget, rng.substream(1)));
    r.notes.push_back("crossing-excised subset evaluated: a sampling set's superset is a sampling set");
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < r.assessments.size(); ++i) {
    const auto& a = r.assessments[i];
    const auto& b = r.assessments[best];
    auto rank = [](Verdict v) { return v == Verdict::Certified ? 2 : v == Verdict::Inconclusive ? 1 : 0; };
    if (rank(a.verdict) > rank(b.verdict) ||
        (rank(a.verdict) == rank(b.verdict) && a.margin - a.uncertainty > b.margin - b.uncertainty))
      best = i;
  }
  r.decisive = best;
  r.verdict = r.assessments[best].verdict;
  r.margin = r.assessments[best].margin;
  r.uncertainty = r.assessments[best].uncertainty;
  r.notes.push_back("the density condition is sufficient, not necessary: NOT-CERTIFIED does not mean that sampling fails");
  r.notes.push_back("the lower density is an upper estimate (infimum over finitely many centers), biased upward");
  return r;
}

std::string format_report(const CertificationReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "verdict = " << to_string(r.verdict) << "\n";
  os << "dimension = " << r.dimension << "\n";
  os << "spectrum = " << r.spectrum_id << "\n";
  os << "mean_width = " << r.mean_width << "\n";
  os << "constant_A_d = " << r.constant << "\n";
  os << "margin = " << r.margin << "\n";
  os << "uncertainty = " << r.uncertainty << "\n";
  os << "decisive_candidate = " << r.decisive << "\n";
  for (std::size_t i = 0; i < r.assessments.size(); ++i) {
    const auto& a = r.assessments[i];
    const std::string p = "candidate." + std::to_string(i) + ".";
    os << p << "surface = " << a.surface_id << "\n";
    os << p << "verdict = " << to_string(a.verdict) << "\n";
    os << p << "positive_measure = " << (a.positive_measure ? "true" : "false") << "\n";
    os << p << "density = " << a.density << "\n";
    os << p << "density_uncertainty = " << a.density_uncertainty << "\n";
    os << p << "density_bias = upward\n";
    os << p << "centers = " << a.centers_used << "\n";
    os << p << "phi0 = " << a.phi0 << "\n";
    os << p << "phi0_spread = " << a.phi0_spread << "\n";
    os << p << "phi0_check = " << a.phi_check.message << "\n";
    os << p << "threshold = " << a.threshold << "\n";
    os << p << "margin = " << a.margin << "\n";
    os << p << "uncertainty = " << a.uncertainty << "\n";
    if (!a.diagnostic.empty()) os << p << "diagnostic = " << a.diagnostic << "\n";
  }
  for (const auto& n : r.notes) os << "note = " << n << "\n";
  return os.str();
}

namespace {

// Calls fn(x) for the cell centers of a uniform grid over the window.
void for_cell_centers(const Window& w, double step, const std::function<void(const Vec&)>& fn) {
  const int d = w.dim();
  std::vector<std::size_t> n(static_cast<std::size_t>(d));
  std::vector<double> h(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    n[static_cast<std::size_t>(i)] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(w.side(i) / step)));
    h[static_cast<std::size_t>(i)] = w.side(i) / static_cast<double>(n[static_cast<std::size_t>(i)]);
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  Vec x(d);
  while (true) {
    for (int i = 0; i < d; ++i)
      x[i] = w.lo[i] + (static_cast<double>(idx[static_cast<std::size_t>(i)]) + 0.5) * h[static_cast<std::size_t>(i)];
    fn(x);
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == n[pos]) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
}

double cell_volume(const Window& w, double step) {
  double v = 1.0;
  for (int i = 0; i < w.dim(); ++i) v *= w.side(i) / std::max(1.0, std::ceil(w.side(i) / step));
  return v;
}

double default_step(const ConvexBody& k) { return std::min(0.5, 1.0 / (8.0 * diameter(k))); }

}  // namespace

double sampling_ratio_for(const BandlimitedFunction& f, const std::vector<Vec>& nodes,
                          const std::vector<double>& weights, double p, const Window& w, double volume_step) {
  if (nodes.empty()) return 0.0;
  const bool sup = std::isinf(p);
  double surf = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double a = std::abs(f.evaluate_complex(nodes[i]));
    surf = sup ? std::max(surf, a) : surf + weights[i] * std::pow(a, p);
  }
  double vol = 0.0;
  for_cell_centers(w, volume_step, [&](const Vec& x) {
    const double a = std::abs(f.evaluate_complex(x));
    vol = sup ? std::max(vol, a) : vol + std::pow(a, p);
  });
  if (sup) {
    vol = std::max(vol, surf);  // the window supremum includes the surface nodes
    return vol > 0.0 ? surf / vol : 0.0;
  }
  vol *= cell_volume(w, volume_step);
  return vol > 0.0 ? std::pow(surf / vol, 1.0 / p) : 0.0;
}

SamplingRatioReport sampling_ratio(const SurfaceSet& gamma, const ConvexBody& k, double p, const Window& w,
                                   const SamplingRatioOptions& options, const CounterRng& rng) {
  const int d = k.dimension();
  if (gamma.dimension() != d) throw DimensionError("sampling_ratio: surface and spectrum dimensions differ");
  require_same_dim(w.lo, d, "sampling window");
  if (!(p >= 1.0)) throw InvalidInput("sampling_ratio: p must be in [1, infinity]");
  if (options.corpus < 1) throw InvalidInput("sampling_ratio: corpus must be non-empty");
  const double width = mean_width(k);
  for (int i = 0; i < d; ++i)
    if (w.side(i) < 20.0 / width * (1.0 - 1e-12))
      throw InvalidInput("sampling_ratio: window side must be at least 20 / W(K)");
  const double sstep = options.surface_step > 0.0 ? options.surface_step : default_step(k);
  double vstep = options.volume_step > 0.0 ? options.volume_step : default_step(k);
  // Keep the volume grid below 2^18 cells.
  auto cells = [&](double h) {
    double n = 1.0;
    for (int i = 0; i < d; ++i) n *= std::ceil(w.side(i) / h);
    return n;
  };
  while (cells(vstep) > 262144.0) vstep *= 1.25;

  std::vector<Vec> nodes;
  std::vector<double> weights;
  surface_quadrature(gamma, w, sstep, nodes, weights);

  SamplingRatioReport rep;
  rep.p = p;
  rep.surface_nodes = nodes.size();
  for (double x : weights) rep.surface_measure += x;
  rep.ratios.assign(options.corpus, 0.0);
  for_each_block(options.corpus, [&](std::size_t i) {
    CounterRng local = rng.substream(i);
    const BandlimitedFunction f = synthesize(k, options.terms, true, false, local);
    rep.ratios[i] = sampling_ratio_for(f, nodes, weights, p, w, vstep);
  });
  std::vector<double> s = rep.ratios;
  std::sort(s.begin(), s.end());
  auto q = [&](double t) {
    const double pos = t * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
  };
  rep.min = s.front();
  rep.q1 = q(0.25);
  rep.median = q(0.5);
  rep.q3 = q(0.75);
  rep.max = s.back();
  rep.note = nodes.empty() ? "surface does not meet the window: ratios are 0"
                           : "windowed norms stand in for global norms: ratios are estimates subject to truncation bias";
  return rep;
}

SurfaceSet section5_surface(int d) {
  if (d < 2 || d > 3) throw DimensionError("section5 example: d must be 2 or 3");
  std::vector<SurfaceSet> fams;
  for (int n = 0; n < d; ++n) fams.push_back(SurfaceSet::hyperplane_family(Vec::unit(d, n), 0.5, 0.0, {0}));
  return SurfaceSet::union_of(std::move(fams));
}

double section5_function(const Vec& x) {
  double v = 1.0;
  for (int n = 0; n < x.dim(); ++n)
    v *= x[n] == 0.0 ? 2.0 * std::numbers::pi : std::sin(2.0 * std::numbers::pi * x[n]) / x[n];
  return v;
}

Section5Report section5_example(int d, const CounterRng& rng, std::size_t nodal_points) {
  const SurfaceSet lambda = section5_surface(d);
  Section5Report rep;
  rep.dimension = d;
  CertifyBudget b = default_certify_budget(d);
  CounterRng dens_rng = rng.substream(0);
  const DensityReport dens = surface_density(lambda, b.density_radii, DensityBudget{b.window, b.density_centers}, dens_rng);
  rep.density = dens.estimate;
  rep.density_uncertainty = dens.uncertainty;
  rep.reading_volume = 2.0 * d;

  Vec ones(d);
  for (int i = 0; i < d; ++i) ones[i] = 1.0;
  rep.mean_width = mean_width(ConvexBody::box(ones));
  rep.mean_width_closed = 4.0 * unit_ball_volume(d - 1) / unit_ball_volume(d);
  rep.mean_width_ok = std::abs(rep.mean_width - rep.mean_width_closed) <= 1e-5;
  rep.constant_times_width = theorem_constant(d) * rep.mean_width_closed;
  rep.inequality_holds = rep.constant_times_width >= 2.0;
  rep.inequality_holds_volume = rep.constant_times_width >= 2.0 * d;

  CounterRng pts_rng = rng.substream(1);
  const auto pts = sample_points_on(lambda, Window::cube(d, -5.0, 5.0), nodal_points, pts_rng);
  rep.nodal_points = pts.size();
  for (const Vec& x : pts) rep.max_nodal_value = std::max(rep.max_nodal_value, std::abs(section5_function(x)));
  rep.nodal_ok = rep.nodal_points == nodal_points && rep.max_nodal_value < 1e-9;

  std::ostringstream os;
  os.precision(6);
  os << "numerical lower density " << rep.density << " +- " << rep.density_uncertainty << " (volume normalization); "
     << "stated value 2; slab-slice value 2d = " << rep.reading_volume
     << "; the two agree if the density is normalized by the sphere area d omega_d R^d instead of omega_d R^d";
  rep.discrepancy = os.str();
  return rep;
}

}  // namespace mobsamp
