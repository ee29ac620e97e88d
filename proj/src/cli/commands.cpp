#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "mobsamp/certify.hpp"
#include "mobsamp/cli.hpp"
#include "mobsamp/integral_geometry.hpp"
#include "mobsamp/nodal_ronkin.hpp"
#include "mobsamp/parallel.hpp"
#include "mobsamp/remez.hpp"
#include "mobsamp/scan1d.hpp"
#include "output.hpp"

namespace mobsamp::cli {

int selftest(std::ostream& out);

namespace {

struct Context {
  std::string command;
  ExperimentConfig cfg;
  std::uint64_t hash = 0;
  std::string out_dir;
  std::ostream* out = nullptr;
  std::ostringstream report;

  CsvWriter csv(std::vector<std::string> columns) const {
    return CsvWriter(std::move(columns), command, cfg.seed, hash);
  }

  void line(const std::string& key, const std::string& value) { report << key << " = " << value << "\n"; }
  void line(const std::string& key, double value) { line(key, fmt(value)); }

  void finish() {
    std::ostringstream head;
    head << "tool = mobsamp " << kToolVersion << "\n"
         << "command = " << command << "\n"
         << "seed = " << cfg.seed << "\n"
         << "config_hash = " << hex64(hash) << "\n";
    const std::string text = head.str() + report.str();
    *out << text;
    write_file(out_dir, command + "_report.txt", text);
  }
};

int dimension_of(const Context& c) {
  if (c.cfg.dimension < 1) throw ConfigError("config field 'dimension': required for '" + c.command + "'");
  return c.cfg.dimension;
}

ConvexBody spectrum_of(const Context& c) { return parse_spectrum(require_spectrum(c.cfg), dimension_of(c)); }

SurfaceSet surface_of(const Context& c) {
  return parse_surface(require_surface(c.cfg), dimension_of(c), c.cfg.base_dir);
}

Window window_of(const Context& c, double lo_default, double hi_default, const std::string& key = "window") {
  const auto w = param_numbers(c.cfg, key, {lo_default, hi_default});
  if (w.size() != 2 || !(w[0] < w[1]))
    throw ConfigError("config field 'params." + key + "': expected [lo, hi] with lo < hi");
  return Window::cube(dimension_of(c), w[0], w[1]);
}

std::size_t count_param(const Context& c, const std::string& key, std::size_t fallback) {
  const double v = param_number(c.cfg, key, static_cast<double>(fallback));
  if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("config field 'params." + key + "': expected a positive integer");
  return static_cast<std::size_t>(v);
}

CounterRng rng_of(const Context& c) { return CounterRng(c.cfg.seed); }

int cmd_mean_width(Context& c) {
  const ConvexBody k = spectrum_of(c);
  const int level = c.cfg.budgets.quadrature_level;
  const int d = k.dimension();
  auto width_at = [&](int l) { return d == 1 ? mean_width(k) : mean_width(k, build_sphere_quadrature(d, l)); };
  const double w = width_at(level);
  const double tol = std::abs(w - width_at(2 * level));
  CsvWriter csv = c.csv({"level", "mean_width"});
  csv.row(std::vector<double>{double(level), w});
  csv.row(std::vector<double>{double(2 * level), width_at(2 * level)});
  write_file(c.out_dir, "mean_width.csv", csv.str());
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6f ± %.1e", w, tol);
  c.line("spectrum", k.describe());
  c.line("mean_width", buf);
  c.line("theorem_constant", theorem_constant(d));
  c.line("threshold_phi1", theorem_constant(d) * w);
  c.finish();
  return 0;
}

std::vector<double> density_radii(const Context& c) {
  if (!c.cfg.budgets.radius_grid.empty()) return c.cfg.budgets.radius_grid;
  return default_certify_budget(dimension_of(c)).density_radii;
}

int cmd_density(Context& c) {
  const SurfaceSet s = surface_of(c);
  DensityBudget budget{window_of(c, -10.0, 10.0), c.cfg.budgets.centers};
  CounterRng rng = rng_of(c);
  const DensityReport r = surface_density(s, density_radii(c), budget, rng);
  CsvWriter csv = c.csv({"R", "inf_density"});
  for (std::size_t i = 0; i < r.radii.size(); ++i) csv.row(std::vector<double>{r.radii[i], r.inf_density[i]});
  write_file(c.out_dir, "density.csv", csv.str());
  c.line("surface", s.describe());
  c.line("density", r.estimate);
  c.line("density_uncertainty", r.uncertainty);
  c.line("slope", r.slope);
  c.line("centers", std::to_string(r.centers_used));
  if (!r.note.empty()) c.line("note", r.note);
  c.finish();
  return 0;
}

int cmd_phi_profile(Context& c) {
  const SurfaceSet s = surface_of(c);
  const Window w = window_of(c, -10.0, 10.0);
  ProfileBudget budget{w, c.cfg.budgets.centers, c.cfg.budgets.centers};
  const auto radii = param_numbers(c.cfg, "radii", default_certify_budget(s.dimension()).profile_radii);
  CounterRng rng = rng_of(c);
  const RegularityProfile p = regularity_profile(s, radii, budget, rng);
  const Phi0Verdict v = check_phi0_floor(p, has_positive_measure(s, w));
  CsvWriter csv = c.csv({"r", "phi"});
  for (std::size_t i = 0; i < p.radii.size(); ++i) csv.row(std::vector<double>{p.radii[i], p.values[i]});
  write_file(c.out_dir, "phi_profile.csv", csv.str());
  c.line("surface", s.describe());
  c.line("phi0", p.phi0);
  c.line("phi0_spread", p.phi0_spread);
  c.line("skipped_radii", std::to_string(p.skipped_radii.size()));
  c.line("phi0_floor_check", !v.checked ? "skipped" : (v.passed ? "pass" : "fail"));
  if (!v.message.empty()) c.line("phi0_floor_message", v.message);
  if (p.empty_warning) c.line("warning", "no surface mass near the sampled centers");
  c.finish();
  return 0;
}

int cmd_certify(Context& c) {
  const ConvexBody k = spectrum_of(c);
  const SurfaceSet s = surface_of(c);
  CertifyBudget budget = default_certify_budget(dimension_of(c));
  budget.window = window_of(c, budget.window.lo[0], budget.window.hi[0]);
  budget.density_radii = density_radii(c);
  budget.profile_radii = param_numbers(c.cfg, "profile_radii", budget.profile_radii);
  budget.density_centers = budget.profile_centers = budget.surface_centers = c.cfg.budgets.centers;
  budget.excision_radius = param_number(c.cfg, "excision_radius", budget.excision_radius);
  const CertificationReport r = certify(s, k, budget, rng_of(c));
  CsvWriter csv = c.csv({"surface", "density", "density_uncertainty", "phi0", "threshold", "margin", "uncertainty",
                         "verdict"});
  for (const Assessment& a : r.assessments)
    csv.row({a.surface_id, fmt(a.density), fmt(a.density_uncertainty), fmt(a.phi0), fmt(a.threshold), fmt(a.margin),
             fmt(a.uncertainty), to_string(a.verdict)});
  write_file(c.out_dir, "certify.csv", csv.str());
  c.report << format_report(r);
  c.finish();
  return r.verdict == Verdict::Certified ? 0 : 2;
}

int cmd_crofton(Context& c) {
  const SurfaceSet s = surface_of(c);
  const int d = dimension_of(c);
  const double R = param_number(c.cfg, "R", 1.0);
  const Vec center = [&] {
    const auto v = param_numbers(c.cfg, "center", std::vector<double>(d, 0.0));
    if (static_cast<int>(v.size()) != d) throw ConfigError("config field 'params.center': wrong length");
    return Vec::from_span(v);
  }();
  IntersectionCounter counter = [&](const Line& l) {
    return count_intersections(s, Line{l.direction, l.foot + center}, center, R);
  };
  const std::size_t n = c.cfg.budgets.lines;
  const double exact = measure_in_ball(s, center, R);
  CsvWriter csv = c.csv({"lines", "estimate", "standard_error", "discarded"});
  CroftonEstimate last;
  for (std::size_t m : {n / 8, n / 4, n / 2, n}) {
    if (m < 2) continue;
    last = crofton_area(counter, d, R, m, rng_of(c).substream(m));
    csv.row(std::vector<double>{double(m), last.value, last.standard_error, double(last.discarded)});
  }
  write_file(c.out_dir, "crofton.csv", csv.str());
  c.line("surface", s.describe());
  c.line("ball_radius", R);
  c.line("estimate", last.value);
  c.line("standard_error", last.standard_error);
  c.line("reference_measure", exact);
  c.line("lines", std::to_string(last.lines));
  c.line("discarded", std::to_string(last.discarded));
  if (last.discard_warning) c.line("warning", "more than 0.1% of lines were discarded");
  c.finish();
  return 0;
}

BandlimitedFunction corpus_function(const ConvexBody& k, std::size_t terms, std::uint64_t seed, std::size_t index) {
  CounterRng rng = CounterRng(seed).substream(index);
  return synthesize(k, terms, true, true, rng);
}

int cmd_ronkin(Context& c) {
  const ConvexBody k = spectrum_of(c);
  const std::size_t terms = count_param(c, "terms", 8);
  const double R = param_number(c.cfg, "R", 10.0);
  const auto radii = param_numbers(c.cfg, "radii", {R / 8, R / 4, R / 2, R});
  const BandlimitedFunction f = corpus_function(k, terms, c.cfg.seed, 0);
  const RonkinReport r = ronkin_average(f, R, radii, c.cfg.budgets.lines, rng_of(c).substream(1));
  const LogIntegralEstimate lt = log_integral_term(f, R, c.cfg.budgets.samples, rng_of(c).substream(2));
  CsvWriter csv = c.csv({"r", "nodal_area", "standard_error"});
  for (std::size_t i = 0; i < r.radii.size(); ++i)
    csv.row(std::vector<double>{r.radii[i], r.nodal_area[i], r.nodal_error[i]});
  write_file(c.out_dir, "ronkin.csv", csv.str());
  c.line("spectrum", k.describe());
  c.line("R", R);
  c.line("ronkin_average", r.average);
  c.line("standard_error", r.standard_error);
  c.line("width_bound", r.bound);
  c.line("log_term", lt.value);
  c.line("log_term_error", lt.standard_error);
  c.line("lines", std::to_string(r.lines));
  c.line("degenerate_lines", std::to_string(r.degenerate));
  c.line("line_violations", std::to_string(r.line_violations));
  c.finish();
  return 0;
}

Vec random_direction(int d, CounterRng& rng) { return sample_direction(d, rng); }

int cmd_jensen(Context& c) {
  const ConvexBody k = spectrum_of(c);
  const int d = k.dimension();
  const std::size_t functions = count_param(c, "functions", 100);
  const std::size_t terms = count_param(c, "terms", 8);
  const auto radii = param_numbers(c.cfg, "radii", {1.0, 2.0, 4.0});
  CsvWriter csv = c.csv({"function", "r", "zeros", "lhs", "rhs", "pass"});
  std::size_t checks = 0, violations = 0;
  double worst = -INFINITY;
  for (std::size_t i = 0; i < functions; ++i) {
    const BandlimitedFunction f = corpus_function(k, terms, c.cfg.seed, i);
    CounterRng rng = CounterRng(c.cfg.seed, 1).substream(i);
    const Vec theta = random_direction(d, rng);
    for (double r : radii) {
      const JensenReport j = jensen_bound_check(f, Vec(d), theta, r);
      ++checks;
      if (!j.pass) ++violations;
      worst = std::max(worst, j.lhs - j.rhs);
      csv.row({std::to_string(i), fmt(r), std::to_string(j.zeros), fmt(j.lhs), fmt(j.rhs), j.pass ? "1" : "0"});
    }
  }
  write_file(c.out_dir, "jensen.csv", csv.str());
  c.line("spectrum", k.describe());
  c.line("checks", std::to_string(checks));
  c.line("violations", std::to_string(violations));
  c.line("max_lhs_minus_rhs", worst);
  c.finish();
  return 0;
}

int cmd_remez(Context& c) {
  const ConvexBody k = spectrum_of(c);
  const int d = k.dimension();
  const std::size_t instances = count_param(c, "instances", 100);
  const std::size_t terms = count_param(c, "terms", 8);
  const double R = param_number(c.cfg, "R", 4.0);
  const double C = param_number(c.cfg, "C", 8.0);
  CsvWriter csv = c.csv({"instance", "sigma", "measure_f", "lhs", "sup_on_f", "log_rhs", "lemma_pass",
                         "sublevel_pass", "minimal_C"});
  std::size_t lemma_pass = 0, sublevel_pass = 0;
  std::map<double, std::size_t> minimal;
  for (std::size_t i = 0; i < instances; ++i) {
    const BandlimitedFunction f = corpus_function(k, terms, c.cfg.seed, i);
    CounterRng rng = CounterRng(c.cfg.seed, 1).substream(i);
    const BandlimitedFunction g = slice(f, Vec(d), random_direction(d, rng));
    const RealFunction1D h = as_real_function(g);
    const double sigma = std::max(g.bandwidth(), 1e-3);
    const IntervalSet F = random_interval_set(R, rng);
    const RemezReport rr = remez_check(h, sigma, R, F, C);
    const SublevelReport sr = sublevel_decay_check(h, sigma, R, C);
    const double cmin = minimal_remez_constant(h, sigma, R, F);
    lemma_pass += rr.pass;
    sublevel_pass += sr.pass;
    ++minimal[cmin];
    csv.row({std::to_string(i), fmt(sigma), fmt(rr.measure_f), fmt(rr.lhs), fmt(rr.sup_on_f), fmt(rr.log_rhs),
             rr.pass ? "1" : "0", sr.pass ? "1" : "0", fmt(cmin)});
  }
  write_file(c.out_dir, "remez.csv", csv.str());
  c.line("spectrum", k.describe());
  c.line("R", R);
  c.line("C", C);
  c.line("instances", std::to_string(instances));
  c.line("lemma_pass", std::to_string(lemma_pass));
  c.line("sublevel_pass", std::to_string(sublevel_pass));
  for (const auto& [cm, n] : minimal) c.line("minimal_C[" + fmt(cm) + "]", std::to_string(n));
  c.finish();
  return 0;
}

double p_param(const Context& c) {
  if (!c.cfg.params.contains("p")) return INFINITY;
  const Json& p = c.cfg.params.at("p");
  if (p.is_string() && (p.get<std::string>() == "inf" || p.get<std::string>() == "infinity")) return INFINITY;
  const double v = param_number(c.cfg, "p", INFINITY);
  if (!(v >= 1.0)) throw ConfigError("config field 'params.p': expected a number >= 1 or \"inf\"");
  return v;
}

int cmd_sampling_ratio(Context& c) {
  const ConvexBody k = spectrum_of(c);
  const SurfaceSet s = surface_of(c);
  const double side = std::max(20.0 / mean_width(k), 10.0);
  const Window w = window_of(c, 0.0, side, "ratio_window");
  SamplingRatioOptions opt;
  opt.corpus = c.cfg.budgets.corpus;
  opt.terms = count_param(c, "terms", opt.terms);
  opt.surface_step = param_number(c.cfg, "surface_step", 0.0);
  opt.volume_step = param_number(c.cfg, "volume_step", 0.0);
  const double p = p_param(c);
  const SamplingRatioReport r = sampling_ratio(s, k, p, w, opt, rng_of(c));
  CsvWriter csv = c.csv({"function", "ratio"});
  for (std::size_t i = 0; i < r.ratios.size(); ++i) csv.row({std::to_string(i), fmt(r.ratios[i])});
  write_file(c.out_dir, "sampling_ratio.csv", csv.str());
  c.line("spectrum", k.describe());
  c.line("surface", s.describe());
  c.line("p", p);
  c.line("functions", std::to_string(r.ratios.size()));
  c.line("min", r.min);
  c.line("q1", r.q1);
  c.line("median", r.median);
  c.line("q3", r.q3);
  c.line("max", r.max);
  c.line("surface_nodes", std::to_string(r.surface_nodes));
  c.line("surface_measure", r.surface_measure);
  if (!r.note.empty()) c.line("note", r.note);
  c.finish();
  return 0;
}

int cmd_section5(Context& c) {
  const int d = dimension_of(c);
  const std::size_t points = count_param(c, "nodal_points", 1000);
  const Section5Report r = section5_example(d, rng_of(c), points);
  CsvWriter csv = c.csv({"dimension", "density", "density_uncertainty", "reading_stated", "reading_volume",
                         "mean_width", "mean_width_closed", "constant_times_width", "max_nodal_value"});
  csv.row(std::vector<double>{double(d), r.density, r.density_uncertainty, r.reading_stated, r.reading_volume,
                              r.mean_width, r.mean_width_closed, r.constant_times_width, r.max_nodal_value});
  write_file(c.out_dir, "section5.csv", csv.str());
  c.line("dimension", std::to_string(d));
  c.line("density", r.density);
  c.line("density_uncertainty", r.density_uncertainty);
  c.line("reading_stated", r.reading_stated);
  c.line("reading_volume", r.reading_volume);
  c.line("mean_width", r.mean_width);
  c.line("mean_width_closed", r.mean_width_closed);
  c.line("mean_width_ok", r.mean_width_ok ? "yes" : "no");
  c.line("constant_times_width", r.constant_times_width);
  c.line("inequality_holds", r.inequality_holds ? "yes" : "no");
  c.line("inequality_holds_volume_reading", r.inequality_holds_volume ? "yes" : "no");
  c.line("nodal_points", std::to_string(r.nodal_points));
  c.line("max_nodal_value", r.max_nodal_value);
  c.line("nodal_ok", r.nodal_ok ? "yes" : "no");
  c.line("discrepancy", r.discrepancy);
  c.finish();
  return 0;
}

const std::map<std::string, std::pair<std::function<int(Context&)>, const char*>>& commands() {
  static const std::map<std::string, std::pair<std::function<int(Context&)>, const char*>> table = {
      {"mean-width", {cmd_mean_width, "mean width of the spectrum by sphere quadrature"}},
      {"density", {cmd_density, "lower surface density of the surface"}},
      {"phi-profile", {cmd_phi_profile, "regularity profile phi(r) and the phi(0) floor check"}},
      {"certify", {cmd_certify, "density versus phi(0) A_d W(K); exit 2 unless CERTIFIED"}},
      {"crofton", {cmd_crofton, "Crofton estimate of the surface measure in a ball"}},
      {"ronkin", {cmd_ronkin, "Ronkin nodal average against the mean-width bound"}},
      {"jensen", {cmd_jensen, "Jensen zero-count bound over random slices"}},
      {"remez", {cmd_remez, "Remez and sublevel-decay checks over random slices"}},
      {"sampling-ratio", {cmd_sampling_ratio, "surface-to-volume norm ratios over a function corpus"}},
      {"section5", {cmd_section5, "sinc-product nodal set example"}},
  };
  return table;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mobile sampling certification toolkit", "mobsamp"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  double budget_scale = 1.0;
  std::string chosen;

  for (const auto& [name, entry] : commands()) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "directory for the report and CSV files");
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--budget-scale", budget_scale, "scales Monte Carlo budgets");
    sub->callback([&chosen, name = name] { chosen = name; });
  }
  CLI::App* st = app.add_subcommand("selftest", "runs the built-in sanity suite");
  st->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
  st->callback([&chosen] { chosen = "selftest"; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    set_worker_threads(threads);
    if (chosen == "selftest") return selftest(out);
    Context ctx;
    ctx.command = chosen;
    ctx.cfg = load_config(config_path);
    apply_overrides(ctx.cfg, seed, budget_scale);
    ctx.hash = config_hash(ctx.cfg);
    ctx.out_dir = out_dir;
    ctx.out = &out;
    return commands().at(chosen).first(ctx);
  } catch (const std::exception& e) {
    err << "mobsamp " << chosen << ": error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace mobsamp::cli
