#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mobsamp::cli {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

const Json& member(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) field_error(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) field_error(where + "." + key, "missing");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) field_error(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(where, "must be finite");
  return v;
}

double number_member(const Json& j, const std::string& key, const std::string& where) {
  return number(member(j, key, where), where + "." + key);
}

double number_member_or(const Json& j, const std::string& key, const std::string& where, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number(j.at(key), where + "." + key);
}

std::size_t count_member(const Json& j, const std::string& key, const std::string& where, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) field_error(where + "." + key, "expected a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) field_error(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Vec vec_member(const Json& j, const std::string& key, const std::string& where, int d) {
  const auto xs = numbers(member(j, key, where), where + "." + key);
  if (static_cast<int>(xs.size()) != d)
    field_error(where + "." + key, "expected " + std::to_string(d) + " components, got " + std::to_string(xs.size()));
  return Vec::from_span(xs);
}

std::string type_of(const Json& j, const std::string& where) {
  const Json& t = member(j, "type", where);
  if (!t.is_string()) field_error(where + ".type", "expected a string");
  return t.get<std::string>();
}

const Json& parameters(const Json& j) {
  static const Json empty = Json::object();
  const auto it = j.find("parameters");
  return it == j.end() ? empty : *it;
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    const auto pos = msg.find("]: ");
    if (pos != std::string::npos) msg = msg.substr(pos + 3);
    throw ConfigError(path + ":" + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": malformed config: " + msg);
  }
  if (!doc.is_object()) throw ConfigError(path + ": config must be a JSON object");

  ExperimentConfig cfg;
  cfg.path = path;
  cfg.base_dir = std::filesystem::path(path).parent_path().string();
  const Json& version = member(doc, "version", "config");
  if (!version.is_string() || version.get<std::string>() != kConfigVersion)
    field_error("version", std::string("expected \"") + kConfigVersion + "\"");
  const Json& seed = member(doc, "seed", "config");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    field_error("seed", "expected a non-negative integer");
  cfg.seed = seed.get<std::uint64_t>();
  const Json& dim = member(doc, "dimension", "config");
  if (!dim.is_number_integer() || dim.get<int>() < 1 || dim.get<int>() > kMaxDim)
    field_error("dimension", "expected an integer in [1, 4]");
  cfg.dimension = dim.get<int>();

  for (const auto& [key, value] : doc.items()) {
    static const char* known[] = {"version", "seed", "dimension", "spectrum", "surface", "budgets", "params", "comment"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      field_error(key, "unknown top-level key");
    (void)value;
  }
  if (doc.contains("spectrum")) {
    cfg.spectrum = doc.at("spectrum");
    (void)parse_spectrum(*cfg.spectrum, cfg.dimension);
  }
  if (doc.contains("surface")) {
    cfg.surface = doc.at("surface");
    (void)parse_surface(*cfg.surface, cfg.dimension, cfg.base_dir);
  }
  if (doc.contains("budgets")) {
    const Json& b = doc.at("budgets");
    if (!b.is_object()) field_error("budgets", "expected an object");
    if (b.contains("quadrature_level")) {
      const Json& q = b.at("quadrature_level");
      if (!q.is_number_integer() || q.get<int>() < 1 || q.get<int>() > 64)
        field_error("budgets.quadrature_level", "expected an integer in [1, 64]");
      cfg.budgets.quadrature_level = q.get<int>();
    }
    cfg.budgets.lines = count_member(b, "lines", "budgets", cfg.budgets.lines);
    cfg.budgets.centers = count_member(b, "centers", "budgets", cfg.budgets.centers);
    cfg.budgets.corpus = count_member(b, "corpus", "budgets", cfg.budgets.corpus);
    cfg.budgets.samples = count_member(b, "samples", "budgets", cfg.budgets.samples);
    if (b.contains("R_grid")) {
      cfg.budgets.radius_grid = numbers(b.at("R_grid"), "budgets.R_grid");
      for (double r : cfg.budgets.radius_grid)
        if (!(r > 0.0)) field_error("budgets.R_grid", "radii must be positive");
    }
  }
  if (doc.contains("params")) {
    cfg.params = doc.at("params");
    if (!cfg.params.is_object()) field_error("params", "expected an object");
  }
  cfg.effective = doc;
  return cfg;
}

void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed, double budget_scale) {
  if (seed) {
    cfg.seed = *seed;
    cfg.effective["seed"] = *seed;
  }
  if (!(budget_scale > 0.0)) throw ConfigError("--budget-scale must be positive");
  if (budget_scale != 1.0) {
    auto scale = [&](std::size_t n) {
      return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(static_cast<double>(n) * budget_scale)));
    };
    cfg.budgets.lines = scale(cfg.budgets.lines);
    cfg.budgets.centers = scale(cfg.budgets.centers);
    cfg.budgets.corpus = scale(cfg.budgets.corpus);
    cfg.budgets.samples = scale(cfg.budgets.samples);
    cfg.effective["budget_scale"] = budget_scale;
  }
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string canon = cfg.effective.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ConvexBody parse_spectrum(const Json& j, int d, const std::string& where) {
  const std::string type = type_of(j, where);
  if (j.contains("dimension") && (!j.at("dimension").is_number_integer() || j.at("dimension").get<int>() != d))
    field_error(where + ".dimension", "does not match the config dimension " + std::to_string(d));
  const Json& p = parameters(j);
  const std::string pw = where + ".parameters";
  try {
    if (type == "ball") return ConvexBody::ball(d, number_member(p, "radius", pw));
    if (type == "box") return ConvexBody::box(vec_member(p, "half_widths", pw, d));
    if (type == "cube") {
      const double h = number_member(p, "half_width", pw);
      Vec v(d);
      for (int i = 0; i < d; ++i) v[i] = h;
      return ConvexBody::box(v);
    }
    if (type == "ellipsoid") return ConvexBody::ellipsoid(vec_member(p, "semi_axes", pw, d));
    if (type == "polytope") {
      std::vector<Vec> verts, normals;
      const Json& vs = member(p, "vertices", pw);
      const Json& ns = member(p, "facet_normals", pw);
      if (!vs.is_array() || !ns.is_array()) field_error(pw, "vertices and facet_normals must be arrays");
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto xs = numbers(vs[i], pw + ".vertices[" + std::to_string(i) + "]");
        if (static_cast<int>(xs.size()) != d) field_error(pw + ".vertices[" + std::to_string(i) + "]", "wrong length");
        verts.push_back(Vec::from_span(xs));
      }
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto xs = numbers(ns[i], pw + ".facet_normals[" + std::to_string(i) + "]");
        if (static_cast<int>(xs.size()) != d)
          field_error(pw + ".facet_normals[" + std::to_string(i) + "]", "wrong length");
        normals.push_back(Vec::from_span(xs));
      }
      return ConvexBody::polytope(std::move(verts), std::move(normals));
    }
    if (type == "inflated") {
      const ConvexBody base = parse_spectrum(member(j, "base", where), d, where + ".base");
      return inflate(base, number_member(p, "kappa", pw));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    field_error(where, e.what());
  }
  field_error(where + ".type", "unknown spectrum type '" + type + "'");
}

SurfaceSet parse_surface(const Json& j, int d, const std::string& base_dir, const std::string& where) {
  const std::string type = type_of(j, where);
  const Json& p = parameters(j);
  const std::string pw = where + ".parameters";
  auto children = [&]() {
    const Json& c = member(j, "children", where);
    if (!c.is_array() || c.empty()) field_error(where + ".children", "expected a non-empty array");
    std::vector<SurfaceSet> out;
    for (std::size_t i = 0; i < c.size(); ++i)
      out.push_back(parse_surface(c[i], d, base_dir, where + ".children[" + std::to_string(i) + "]"));
    return out;
  };
  try {
    if (type == "hyperplane_family") {
      std::vector<std::int64_t> excluded;
      if (p.contains("excluded")) {
        const Json& e = p.at("excluded");
        if (!e.is_array()) field_error(pw + ".excluded", "expected an array of integers");
        for (const auto& k : e) {
          if (!k.is_number_integer()) field_error(pw + ".excluded", "expected integers");
          excluded.push_back(k.get<std::int64_t>());
        }
      }
      return SurfaceSet::hyperplane_family(normalized(vec_member(p, "normal", pw, d)), number_member(p, "spacing", pw),
                                           number_member_or(p, "offset", pw, 0.0), excluded);
    }
    if (type == "hyperplane")
      return SurfaceSet::single_hyperplane(normalized(vec_member(p, "normal", pw, d)),
                                           number_member_or(p, "offset", pw, 0.0));
    if (type == "sphere_shell") {
      Vec c = p.contains("center") ? vec_member(p, "center", pw, d) : Vec(d);
      return SurfaceSet::sphere_shell(c, number_member(p, "radius", pw));
    }
    if (type == "point_file") {
      const Json& f = member(p, "path", pw);
      if (!f.is_string()) field_error(pw + ".path", "expected a string");
      std::filesystem::path path = f.get<std::string>();
      if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
      return read_point_file(path.string(), d, number_member(p, "resolution", pw));
    }
    if (type == "union") return SurfaceSet::union_of(children());
    if (type == "crossing_excised") {
      auto c = children();
      if (c.size() != 1) field_error(where + ".children", "expected exactly one base surface");
      return SurfaceSet::crossing_excised(c.front(), number_member(p, "radius", pw));
    }
    if (type == "section5") {
      std::vector<SurfaceSet> fams;
      for (int n = 0; n < d; ++n) fams.push_back(SurfaceSet::hyperplane_family(Vec::unit(d, n), 0.5, 0.0, {0}));
      return SurfaceSet::union_of(std::move(fams));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    field_error(where, e.what());
  }
  field_error(where + ".type", "unknown surface type '" + type + "'");
}

double param_number(const ExperimentConfig& cfg, const std::string& key, double fallback) {
  return number_member_or(cfg.params, key, "params", fallback);
}

std::vector<double> param_numbers(const ExperimentConfig& cfg, const std::string& key, std::vector<double> fallback) {
  if (!cfg.params.contains(key)) return fallback;
  return numbers(cfg.params.at(key), "params." + key);
}

const Json& require_spectrum(const ExperimentConfig& cfg) {
  if (!cfg.spectrum) field_error("spectrum", "missing (required by this command)");
  return *cfg.spectrum;
}

const Json& require_surface(const ExperimentConfig& cfg) {
  if (!cfg.surface) field_error("surface", "missing (required by this command)");
  return *cfg.surface;
}

}  // namespace mobsamp::cli
