#include "ltp/report.hpp"

#include <cmath>

#include "json.hpp"
#include "ltp/types.hpp"

namespace ltp {

namespace {

using nlohmann::json;

json check_to_json(const CheckRecord& check) {
  json j;
  j["name"] = check.name;
  j["model"] = check.model;
  j["param_point"] = check.param_point;
  if (std::isnan(check.h))
    j["h"] = nullptr;
  else
    j["h"] = check.h;
  j["value"] = check.value;
  j["tolerance"] = check.tolerance;
  j["pass"] = check.pass;
  j["detail"] = check.detail;
  return j;
}

json fit_to_json(const FitRecord& fit) {
  json j;
  j["name"] = fit.name;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["at_floor"] = fit.at_floor;
  json pts = json::array();
  for (const auto& p : fit.points) pts.push_back({p[0], p[1]});
  j["points"] = pts;
  return j;
}

json verdict_to_json(const VerdictRecord& verdict) {
  json j;
  j["name"] = verdict.name;
  j["value"] = verdict.value;
  j["detail"] = verdict.detail;
  return j;
}

json body_to_json(const GeometryReport& report) {
  json body;
  body["experiment"] = report.experiment;
  body["model"] = report.model;
  body["config"] =
      report.config_echo.empty() ? json(nullptr) : json::parse(report.config_echo);
  json checks = json::array();
  int failed = 0;
  for (const CheckRecord& c : report.checks) {
    checks.push_back(check_to_json(c));
    if (!c.pass) ++failed;
  }
  body["checks"] = checks;
  json fits = json::array();
  for (const FitRecord& f : report.fits) fits.push_back(fit_to_json(f));
  body["fits"] = fits;
  json verdicts = json::array();
  for (const VerdictRecord& v : report.verdicts) verdicts.push_back(verdict_to_json(v));
  body["verdicts"] = verdicts;
  body["summary"] = {{"checks", report.checks.size()},
                     {"failed", failed},
                     {"fits", report.fits.size()},
                     {"verdicts", report.verdicts.size()}};
  return body;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

bool GeometryReport::all_checks_pass() const {
  for (const CheckRecord& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string report_body_json(const GeometryReport& report) {
  return body_to_json(report).dump(2) + "\n";
}

std::string report_json(const GeometryReport& report) {
  json doc;
  doc["header"] = {{"timestamp", report.timestamp},
                   {"elapsed_seconds", report.elapsed_seconds}};
  doc["body"] = body_to_json(report);
  return doc.dump(2) + "\n";
}

std::string report_csv(const GeometryReport& report) {
  std::string out = "experiment,check,model,param_point,h,value,tolerance,pass\n";
  for (const CheckRecord& c : report.checks) {
    out += csv_field(report.experiment) + ',' + csv_field(c.name) + ',' +
           csv_field(c.model) + ',' + csv_field(c.param_point) + ',';
    if (!std::isnan(c.h)) out += format_double(c.h);
    out += ',' + format_double(c.value) + ',' + format_double(c.tolerance) + ',' +
           (c.pass ? "true" : "false") + '\n';
  }
  return out;
}

}  // namespace ltp
