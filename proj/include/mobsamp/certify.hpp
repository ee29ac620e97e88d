#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mobsamp/bandlimited.hpp"
#include "mobsamp/convex_body.hpp"
#include "mobsamp/rng.hpp"
#include "mobsamp/surfaces.hpp"

namespace mobsamp {

enum class Verdict { Certified, NotCertified, Inconclusive };

const char* to_string(Verdict v);

struct CertifyBudget {
  Window window;
  std::vector<double> density_radii;
  std::vector<double> profile_radii;
  std::size_t density_centers = 256;
  std::size_t profile_centers = 256;
  std::size_t surface_centers = 256;
  /// Radius of the disks removed around crossings when Gamma is a planar
  /// union of line families (0 disables the excised candidate).
  double excision_radius = 1e-3;
};

/// Window [-10, 10]^d, density radii 10, 15, ..., 50 and profile radii
/// log-spaced over [1e-4, 0.5].
CertifyBudget default_certify_budget(int d);

/// The density condition evaluated for one candidate set.
struct Assessment {
  std::string surface_id;
  bool positive_measure = false;
  double density = 0.0;
  double density_uncertainty = 0.0;
  std::size_t centers_used = 0;
  double phi0 = 0.0;
  double phi0_spread = 0.0;
  Phi0Verdict phi_check;
  double threshold = 0.0;    // phi0 A_d W(K)
  double margin = 0.0;       // density - threshold
  double uncertainty = 0.0;  // density uncertainty + spread A_d W(K)
  Verdict verdict = Verdict::Inconclusive;
  std::string diagnostic;
};

struct CertificationReport {
  std::string spectrum_id;
  int dimension = 0;
  double mean_width = 0.0;
  double constant = 0.0;     // A_d
  /// Gamma itself and, for planar line grids, the crossing-excised subset.
  std::vector<Assessment> assessments;
  std::size_t decisive = 0;
  Verdict verdict = Verdict::Inconclusive;
  double margin = 0.0;
  double uncertainty = 0.0;
  std::vector<std::string> notes;
};

CertificationReport certify(const SurfaceSet& gamma, const ConvexBody& k, const CertifyBudget& budget,
                            const CounterRng& rng);

/// Key-value text form of the report.
std::string format_report(const CertificationReport& r);

struct SamplingRatioOptions {
  std::size_t corpus = 200;
  std::size_t terms = 8;
  double surface_step = 0.0;  // 0: min(0.5, 1 / (8 diam K))
  double volume_step = 0.0;   // same default
};

struct SamplingRatioReport {
  double p = 2.0;
  std::vector<double> ratios;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
  std::size_t surface_nodes = 0;
  double surface_measure = 0.0;  // H^{d-1}(Gamma cap W) by the same quadrature
  std::string note;
};

/// Windowed ratio ||f||_{L^p(Gamma cap W)} / ||f||_{L^p(W)} over a synthesized
/// corpus; p = infinity (pass INFINITY) compares maxima.
SamplingRatioReport sampling_ratio(const SurfaceSet& gamma, const ConvexBody& k, double p, const Window& w,
                                   const SamplingRatioOptions& options, const CounterRng& rng);

/// The same ratio for one function.
double sampling_ratio_for(const BandlimitedFunction& f, const std::vector<Vec>& nodes,
                          const std::vector<double>& weights, double p, const Window& w, double volume_step);

/// Union of d families with normals e_n, spacing 1/2 and plane 0 removed:
/// the zero set of prod_n sin(2 pi x_n) / x_n.
SurfaceSet section5_surface(int d);
double section5_function(const Vec& x);

struct Section5Report {
  int dimension = 0;
  double density = 0.0;
  double density_uncertainty = 0.0;
  double reading_stated = 2.0;      // value stated for the example
  double reading_volume = 0.0;      // 2d from the slab-slice formula
  double mean_width = 0.0;          // quadrature
  double mean_width_closed = 0.0;   // 4 omega_{d-1} / omega_d
  bool mean_width_ok = false;
  double constant_times_width = 0.0;
  bool inequality_holds = false;    // A_d W >= 2
  bool inequality_holds_volume = false;  // A_d W >= 2d
  std::size_t nodal_points = 0;
  double max_nodal_value = 0.0;
  bool nodal_ok = false;
  std::string discrepancy;
};

Section5Report section5_example(int d, const CounterRng& rng, std::size_t nodal_points = 1000);

}  // namespace mobsamp
