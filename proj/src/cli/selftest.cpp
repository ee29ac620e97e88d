#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "mobsamp/certify.hpp"
#include "mobsamp/integral_geometry.hpp"
#include "mobsamp/nodal_ronkin.hpp"
#include "mobsamp/remez.hpp"
#include "mobsamp/scan1d.hpp"

namespace mobsamp::cli {

namespace {

using std::numbers::pi;

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

ConvexBody unit_ball(int d) { return ConvexBody::ball(d, 1.0); }

BandlimitedFunction cosine(int d, int axis) {
  Vec xi(d);
  xi[axis] = 1.0;
  return BandlimitedFunction(unit_ball(d), {xi, -xi}, {0.5, 0.5}, true);
}

struct Check {
  const char* name;
  std::function<bool()> run;
};

std::vector<Check> checks() {
  return {
      {"unit ball volumes k=0..3",
       [] {
         return near(unit_ball_volume(0), 1, 1e-14) && near(unit_ball_volume(1), 2, 1e-14) &&
                near(unit_ball_volume(2), pi, 1e-14) && near(unit_ball_volume(3), 4 * pi / 3, 1e-14);
       }},
      {"circle quadrature weights sum to 2 pi",
       [] {
         const auto q = build_sphere_quadrature(2, 3);
         return near(q.integrate([](const Vec&) { return 1.0; }), 2 * pi, 1e-10);
       }},
      {"seeded streams repeat",
       [] {
         CounterRng a(7), b(7);
         for (int i = 0; i < 1000; ++i)
           if (a.next_u64() != b.next_u64()) return false;
         return true;
       }},
      {"ball support is the radius",
       [] { return near(support(ConvexBody::ball(3, 3.0), normalized(Vec{1, 2, 2})), 3.0, 1e-14); }},
      {"inflated ball support",
       [] { return near(support(inflate(unit_ball(2), 0.5), normalized(Vec{1, 1})), 1.5, 1e-14); }},
      {"ball mean width is the diameter", [] { return near(mean_width(ConvexBody::ball(3, 1.5)), 3.0, 1e-8); }},
      {"interval mean width", [] { return near(mean_width(ConvexBody::box(Vec{0.7})), 1.4, 1e-14); }},
      {"inflate by zero keeps the width",
       [] {
         const auto k = ConvexBody::box(Vec{1, 2});
         return near(mean_width(inflate(k, 0.0)), mean_width(k), 1e-12);
       }},
      {"diameter of an inflated ball", [] { return near(diameter(inflate(unit_ball(2), 1.0)), 4.0, 1e-9); }},
      {"frequency membership",
       [] {
         return contains_frequency(unit_ball(2), Vec{0, 0}) &&
                !contains_frequency(ConvexBody::box(Vec{1, 1}), Vec{1.0001, 0}) &&
                contains_frequency(unit_ball(2), Vec{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
       }},
      {"hyperplane chord and disk",
       [] {
         return near(measure_in_ball(SurfaceSet::single_hyperplane(Vec{1, 0}), Vec{0, 0}, 1.0), 2.0, 1e-12) &&
                near(measure_in_ball(SurfaceSet::single_hyperplane(Vec{0, 0, 1}), Vec{0, 0, 0}, 1.0), pi, 1e-12);
       }},
      {"hyperplane profile is flat",
       [] {
         CounterRng rng(1);
         const auto s = SurfaceSet::single_hyperplane(Vec{1, 0});
         const auto p = regularity_profile(s, {0.01, 0.1, 0.5}, {Window::cube(2, -2, 2), 32, 32}, rng);
         return near(p.phi0, 1.0, 1e-9) && check_phi0_floor(p, true).passed;
       }},
      {"lines hit the ball",
       [] {
         for (const Line& l : sample_lines_hitting_ball(3, 2.0, 500, CounterRng(3)))
           if (norm(l.foot) > 2.0 + 1e-12) return false;
         return true;
       }},
      {"unit cosine has sup one",
       [] {
         CounterRng rng(5);
         const auto f = synthesize(unit_ball(2), 1, true, false, rng);
         return near(f.certified_sup().bound, 1.0, 1e-3);
       }},
      {"anchored corpus is anchored and in band",
       [] {
         for (std::uint64_t s = 0; s < 100; ++s) {
           CounterRng rng(s);
           const auto f = synthesize(unit_ball(2), 6, true, true, rng);
           if (!(std::abs(f.evaluate(Vec{0, 0})) > 0.5)) return false;
           for (const Vec& xi : f.frequencies())
             if (!contains_frequency(f.spectrum(), xi)) return false;
         }
         return true;
       }},
      {"slices of a cosine",
       [] {
         const auto f = cosine(2, 0);
         const auto g = slice(f, Vec{0, 0}, Vec{1, 0});
         const auto h = slice(f, Vec{0.3, 0}, Vec{0, 1});
         return near(g.evaluate(Vec{0.1}), std::cos(2 * pi * 0.1), 1e-12) &&
                near(h.evaluate(Vec{0.7}), std::cos(2 * pi * 0.3), 1e-12);
       }},
      {"complex extension on the real axis",
       [] {
         const auto g = slice(cosine(2, 0), Vec{0, 0}, normalized(Vec{1, 1}));
         return near(evaluate_complex(g, {0.37, 0.0}).real(), g.evaluate(Vec{0.37}), 1e-12);
       }},
      {"certified sup of cosines",
       [] {
         const auto a = certify_sup_norm(cosine(2, 0), Window::cube(2, 0, 2), 1e-3).bound;
         const auto f = linear_combination(0.5, cosine(2, 0), 0.5, cosine(2, 1));
         const auto b = certify_sup_norm(f, Window::cube(2, 0, 2), 1e-3).bound;
         return a >= 1 - 1e-12 && a <= 1.001 && b >= 1 - 1e-12 && b <= 1.001;
       }},
      {"cosine has four zeros in [-1, 1]",
       [] { return count_zeros(as_real_function(slice(cosine(1, 0), Vec{0.0}, Vec{1.0})), 1.0) == 4; }},
      {"constant function passes Jensen",
       [] {
         const auto f = BandlimitedFunction::constant(unit_ball(2), 1.0);
         const auto j = jensen_bound_check(f, Vec{0, 0}, Vec{1, 0}, 2.0);
         return j.lhs == 0.0 && j.pass;
       }},
      {"constant function has no nodal set",
       [] {
         const auto f = BandlimitedFunction::constant(unit_ball(2), 1.0);
         const auto n = nodal_area(f, Vec{0, 0}, 1.0, 200, CounterRng(2));
         const auto r = ronkin_average(f, 2.0, {1.0, 2.0}, 200, CounterRng(2));
         const auto lt = log_integral_term(f, 2.0, 200, CounterRng(2));
         return n.value == 0.0 && r.average == 0.0 && r.average <= r.bound && lt.value == 0.0;
       }},
      {"sublevel set of a cosine at eps = 1",
       [] {
         const auto g = as_real_function(slice(cosine(1, 0), Vec{0.0}, Vec{1.0}));
         return near(sublevel_measure(g, 1.0, 1.0), 1.0, 1e-9) && sublevel_measure(g, 1.0, 1e-6) < 1e-5;
       }},
      {"Remez with F the whole interval",
       [] {
         const auto g = as_real_function(slice(cosine(1, 0), Vec{0.0}, Vec{1.0}));
         return remez_check(g, 1.0, 1.0, {{0.0, 1.0}}, 1.0).pass;
       }},
      {"log integral of the constant one",
       [] {
         const auto g = as_real_function(BandlimitedFunction::constant(unit_ball(1), 1.0));
         return log_integral_direct(g, 3.0) == 0.0;
       }},
      {"single hyperplane is not certified",
       [] {
         auto b = default_certify_budget(2);
         b.density_centers = b.profile_centers = b.surface_centers = 32;
         const auto r = certify(SurfaceSet::single_hyperplane(Vec{1, 0}), ConvexBody::ball(2, 0.1), b, CounterRng(4));
         return r.verdict == Verdict::NotCertified;
       }},
      {"sup ratio never exceeds one",
       [] {
         SamplingRatioOptions o;
         o.corpus = 8;
         const auto s = SurfaceSet::hyperplane_family(Vec{1, 0}, 1.0);
         const auto r = sampling_ratio(s, ConvexBody::ball(2, 0.5), INFINITY, Window::cube(2, 0, 20.5), o, CounterRng(6));
         return r.max <= 1.0 + 1e-12;
       }},
      {"sinc product vanishes on its nodal set", [] { return std::abs(section5_function(Vec{0.5, 0.3})) < 1e-12; }},
  };
}

}  // namespace

int selftest(std::ostream& out) {
  int failed = 0;
  for (const Check& c : checks()) {
    bool ok = false;
    std::string what;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      what = e.what();
    }
    out << (ok ? "[ok]   " : "[FAIL] ") << c.name;
    if (!what.empty()) out << " (" << what << ")";
    out << "\n";
    failed += !ok;
  }
  out << (failed ? std::to_string(failed) + " check(s) failed\n" : "all checks passed\n");
  return failed ? 1 : 0;
}

}  // namespace mobsamp::cli
