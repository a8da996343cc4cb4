#pragma once

// Scenario documents: JSON with explicit units on every dimensional field,
// e.g. {"value": 10, "unit": "uK"}. Parsing validates, converts to internal
// units and rejects unknown keys; serialization writes internal units
// ("1/s", "s", ...) so that parse(serialize(x)) reproduces x exactly.

#include "fstirap/dynamics.hpp"
#include "fstirap/ensemble.hpp"
#include "fstirap/optimizer.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fstirap {

/// Parse or validation failure; `path` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Dipoles {
  std::optional<double> mu21;   // esu cm
  std::optional<double> mu2b;   // esu cm
  std::optional<double> mu2eps; // esu cm erg^{-1/2}
};

struct EnsembleBlock {
  EnsembleSpec spec;
  int nodes = 16;
  double cycle_time = 6e-6;
  double residual = 1e-2;
  std::optional<double> tau_tr;
  std::optional<double> p_avg;
};

struct OptimizeBlock {
  std::vector<Param> free_params;
  std::vector<Bounds> bounds;
  Objective objective = Objective::final_population;
  long budget = 2000;
  std::uint64_t seed = 1;
  int ensemble_nodes = 8;
};

struct SweepBlock {
  std::string param;
  std::vector<double> values;  // internal units
};

struct RunConfig {
  std::string name;
  ScenarioConfig scenario;
  Dipoles dipoles;
  /// Threshold (fraction of peak) defining the pulse overlap time.
  double overlap_threshold = 0.1353352832366127;
  std::optional<EnsembleBlock> ensemble;
  std::optional<OptimizeBlock> optimize;
  std::optional<SweepBlock> sweep;

  OptimizationProblem problem() const;
  /// Peak intensities (W/cm^2) when the dipoles allow it.
  std::optional<double> stokes_intensity() const;
  std::optional<double> pump_intensity() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json serialize_config(const RunConfig& cfg);

/// Applies "a.b.c=value" to a document before parsing. The value is read as
/// JSON when possible, otherwise as a string; a number assigned to a
/// {"value", "unit"} object replaces its value.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Converts a magnitude in `unit` to internal units for the given field kind
/// ("energy", "time", "rate", "dipole", ...). Throws ConfigError.
double to_internal_unit(double value, const std::string& unit, const std::string& kind,
                        const std::string& path);

}  // namespace fstirap
