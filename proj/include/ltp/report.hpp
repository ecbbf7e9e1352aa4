#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

namespace ltp {

// One named numeric check: a module operation's output against its
// tolerance.  `pass` is the experiment's own predicate (usually value <=
// tolerance, sometimes a band), so serialization never re-derives it.
struct CheckRecord {
  std::string name;
  std::string model;
  std::string param_point;  // inputs the value was computed at; "" when global
  double h = std::numeric_limits<double>::quiet_NaN();  // sweep level, NaN when n/a
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;  // offending inputs or context, filled on failures
};

// A convergence fit: log-log slope of residuals against step sizes.
struct FitRecord {
  std::string name;
  double slope = 0.0;
  double intercept = 0.0;
  bool at_floor = false;
  std::vector<std::array<double, 2>> points;  // (h, residual)
};

// A finding that is data, not a pass/fail check (e.g. "not flat").
struct VerdictRecord {
  std::string name;
  std::string value;
  std::string detail;
};

struct GeometryReport {
  std::string experiment;
  std::string model;
  std::string config_echo;  // canonical JSON text of the effective config
  std::vector<CheckRecord> checks;
  std::vector<FitRecord> fits;
  std::vector<VerdictRecord> verdicts;
  std::string timestamp;         // header only, excluded from the body
  double elapsed_seconds = 0.0;  // header only, excluded from the body

  bool all_checks_pass() const;
};

// Deterministic report body: identical config and seed give byte-identical
// text.  Object keys are emitted in sorted order and timing never appears.
std::string report_body_json(const GeometryReport& report);

// Full document {"header": {elapsed_seconds, timestamp}, "body": <body>}.
std::string report_json(const GeometryReport& report);

// Flat rows, one per check, with the exact column set
// experiment,check,model,param_point,h,value,tolerance,pass.
std::string report_csv(const GeometryReport& report);

}  // namespace ltp
