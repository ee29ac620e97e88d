#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobsamp/cli.hpp"
#include "mobsamp/convex_body.hpp"
#include "mobsamp/error.hpp"
#include "mobsamp/surfaces.hpp"

namespace mobsamp::cli {

using Json = nlohmann::json;

class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct Budgets {
  int quadrature_level = 8;
  std::size_t lines = 100000;
  std::size_t centers = 256;
  std::size_t corpus = 200;
  std::size_t samples = 20000;
  std::vector<double> radius_grid;  // empty: per-command default
};

struct ExperimentConfig {
  std::string path;
  std::string base_dir;
  std::uint64_t seed = 0;
  int dimension = 0;
  std::optional<Json> spectrum;
  std::optional<Json> surface;
  Budgets budgets;
  Json params = Json::object();
  Json effective;  // the parsed document with overrides applied
};

/// Parses and validates a config file; errors name the line/column or the field.
ExperimentConfig load_config(const std::string& path);

/// Applies --seed and --budget-scale.
void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed, double budget_scale);

/// FNV-1a (64-bit) of the effective config, canonical JSON form.
std::uint64_t config_hash(const ExperimentConfig& cfg);

ConvexBody parse_spectrum(const Json& j, int d, const std::string& where = "spectrum");
SurfaceSet parse_surface(const Json& j, int d, const std::string& base_dir, const std::string& where = "surface");

/// Typed accessors for `params` with defaults; errors name the field.
double param_number(const ExperimentConfig& cfg, const std::string& key, double fallback);
std::vector<double> param_numbers(const ExperimentConfig& cfg, const std::string& key, std::vector<double> fallback);

const Json& require_spectrum(const ExperimentConfig& cfg);
const Json& require_surface(const ExperimentConfig& cfg);

}  // namespace mobsamp::cli
