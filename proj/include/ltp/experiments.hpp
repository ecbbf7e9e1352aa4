#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltp/models.hpp"
#include "ltp/report.hpp"

namespace ltp {

// Raised on invalid configuration; messages carry file:line references
// locating the offending key in the source document when one exists.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ExperimentConfig {
  int schema = 1;
  std::string experiment;
  std::string model = "flat";
  models::ModelOptions model_options;
  std::optional<Vec> grid_lo;  // default: the model's region box
  std::optional<Vec> grid_hi;
  int grid_nx = 3;
  int grid_ny = 3;
  int steps = 0;  // 0 picks the span-based default per transport
  double fd_step = 1e-4;
  std::vector<double> h_sequence;            // empty: experiment default
  std::map<std::string, double> tolerances;  // overrides of experiment defaults
  std::uint64_t seed = 2026;
  std::string out_path;  // empty: stdout
  std::string format = "json";

  // Canonical JSON text of the experiment inputs with sorted keys; the
  // report echoes this.  Output path and format are delivery options, not
  // inputs, so they are excluded and reports stay byte-identical regardless
  // of where they are written.
  std::string canonical_json() const;
};

const std::vector<std::string>& experiment_names();

// Parses a JSON config document and validates it.  `filename` seeds the
// file:line references in config_error messages.
ExperimentConfig parse_config(const std::string& json_text, const std::string& filename);

// Field-level validation shared by the parser and CLI flag overrides.
void validate_config(const ExperimentConfig& config);

// Dispatches the configured experiment over the model and assembles the
// report.  Deterministic given config and seed: the report body serializes
// byte-identically across runs (timing lives in the header only).
GeometryReport run_experiment(const ExperimentConfig& config);

}  // namespace ltp
