#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ltp/experiments.hpp"
#include "ltp/report.hpp"

using namespace ltp;

namespace {

const char* kFullConfig = R"({
  "schema": 1,
  "experiment": "holonomy",
  "model": {"name": "torsion_plane", "torsion_c": 0.25},
  "grid": {"lo": [-0.5, -0.5], "hi": [0.5, 0.5], "resolution": [4, 3]},
  "steps": 400,
  "fd_step": 0.001,
  "h_sequence": [0.04, 0.02, 0.01],
  "tolerances": {"order_min": 2.5},
  "seed": 7,
  "output": {"path": "report.json", "format": "csv"}
})";

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const config_error& err) {
    return err.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config documents parse into effective settings") {
  ExperimentConfig cfg = parse_config(kFullConfig, "cfg.json");
  CHECK(cfg.experiment == "holonomy");
  CHECK(cfg.model == "torsion_plane");
  CHECK(cfg.model_options.torsion_c == 0.25);
  CHECK(cfg.grid_lo.has_value());
  CHECK((*cfg.grid_hi)[0] == 0.5);
  CHECK(cfg.grid_nx == 4);
  CHECK(cfg.grid_ny == 3);
  CHECK(cfg.steps == 400);
  CHECK(cfg.fd_step == 0.001);
  CHECK(cfg.h_sequence == std::vector<double>{0.04, 0.02, 0.01});
  CHECK(cfg.tolerances.at("order_min") == 2.5);
  CHECK(cfg.seed == 7);
  CHECK(cfg.out_path == "report.json");
  CHECK(cfg.format == "csv");

  ExperimentConfig terse = parse_config(R"({"experiment": "axioms", "model": "sphere"})",
                                        "cfg.json");
  CHECK(terse.model == "sphere");
  CHECK(terse.steps == 0);
  CHECK(terse.format == "json");
}

TEST_CASE("config errors carry file and line references") {
  std::string msg = error_of(R"({
  "experiment": "axioms",
  "h_sequence": [0.1, 0.2]
})");
  CHECK(msg.find("cfg.json:3") != std::string::npos);
  CHECK(msg.find("strictly decreasing") != std::string::npos);

  msg = error_of("{\n  \"experiment\": \"axioms\",\n  \"steps\": \"many\"\n}");
  CHECK(msg.find("cfg.json:3") != std::string::npos);
  CHECK(msg.find("integer") != std::string::npos);

  msg = error_of("{\n  \"experiment\": \"axioms\"\n  \"steps\": 3\n}");
  CHECK(msg.find("invalid JSON") != std::string::npos);
  CHECK(msg.find("cfg.json:") != std::string::npos);

  CHECK(error_of(R"({"experiment": "warp"})").find("unknown experiment") !=
        std::string::npos);
  CHECK(error_of(R"({"experiment": "axioms", "surprise": 1})").find("unknown key") !=
        std::string::npos);
  CHECK(error_of(R"({"experiment": "axioms", "model": "nosuch"})").find("unknown model") !=
        std::string::npos);
  CHECK(error_of(R"({"experiment": "axioms", "fd_step": 0})").find("positive") !=
        std::string::npos);
  CHECK(error_of(R"({"experiment": "axioms", "tolerances": {"cocycle": -1}})")
            .find("positive") != std::string::npos);
  CHECK(error_of(R"({"experiment": "axioms", "grid": {"resolution": [1, 3]}})")
            .find("at least 2") != std::string::npos);
  CHECK(error_of(R"({"experiment": "axioms", "grid": {"lo": [0, 0]}})")
            .find("both lo and hi") != std::string::npos);
  CHECK(error_of(R"({"experiment": "axioms", "output": {"format": "xml"}})")
            .find("json or csv") != std::string::npos);
  CHECK(error_of(
            R"({"experiment": "axioms", "model": {"name": "constant", "constant_g": [[0, 1]]}})")
            .find("square") != std::string::npos);
  CHECK(error_of(R"({"experiment": "axioms", "model": {"name": "frame", "frame": "moebius"}})")
            .find("unknown frame") != std::string::npos);
  CHECK(error_of("[1, 2]").find("JSON object") != std::string::npos);
}

TEST_CASE("flag-level validation names the offending field") {
  ExperimentConfig cfg;
  cfg.experiment = "axioms";
  cfg.steps = -2;
  try {
    validate_config(cfg);
    FAIL("expected config_error");
  } catch (const config_error& err) {
    CHECK(std::string(err.what()).find("steps") != std::string::npos);
  }
}

TEST_CASE("unknown tolerance names are rejected at run time") {
  ExperimentConfig cfg;
  cfg.experiment = "axioms";
  cfg.tolerances["cociycle"] = 1e-8;
  CHECK_THROWS_AS(run_experiment(cfg), config_error);
}

TEST_CASE("experiments needing torsion reject non-tangent models") {
  ExperimentConfig cfg;
  cfg.experiment = "pentagon";
  cfg.model = "constant";
  cfg.model_options.constant_g = Mat::Identity(3, 3);
  CHECK_THROWS_AS(run_experiment(cfg), config_error);
}

TEST_CASE("every experiment produces a populated report on the flat model") {
  for (const std::string& name : experiment_names()) {
    ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.model = "flat";
    GeometryReport rep = run_experiment(cfg);
    CAPTURE(name);
    CHECK(rep.experiment == name);
    CHECK(rep.model == "flat");
    CHECK((!rep.checks.empty() || !rep.verdicts.empty()));
    CHECK(rep.all_checks_pass());
  }
}

TEST_CASE("report bodies are byte-identical across runs") {
  ExperimentConfig cfg;
  cfg.experiment = "flatness";
  cfg.model = "torsion_plane";
  GeometryReport first = run_experiment(cfg);
  GeometryReport second = run_experiment(cfg);
  first.timestamp = "2026-01-01T00:00:00Z";
  first.elapsed_seconds = 1.25;
  CHECK(report_body_json(first) == report_body_json(second));
  CHECK(report_csv(first) == report_csv(second));

  std::string body = report_body_json(first);
  CHECK(body.find("timestamp") == std::string::npos);
  CHECK(body.find("elapsed") == std::string::npos);
  std::string full = report_json(first);
  CHECK(full.find("\"timestamp\": \"2026-01-01T00:00:00Z\"") != std::string::npos);
  CHECK(full.find("\"elapsed_seconds\": 1.25") != std::string::npos);
}

TEST_CASE("different seeds change the echo but not the outcome") {
  ExperimentConfig cfg;
  cfg.experiment = "axioms";
  cfg.model = "sphere";
  ExperimentConfig other = cfg;
  other.seed = 99;
  GeometryReport a = run_experiment(cfg);
  GeometryReport b = run_experiment(other);
  CHECK(report_body_json(a) != report_body_json(b));
  CHECK(a.all_checks_pass());
  CHECK(b.all_checks_pass());
}

TEST_CASE("csv reports expose one row per check with fixed columns") {
  ExperimentConfig cfg;
  cfg.experiment = "torsion";
  cfg.model = "torsion_plane";
  GeometryReport rep = run_experiment(cfg);
  std::string csv = report_csv(rep);

  std::vector<std::string> lines;
  size_t start = 0;
  while (start < csv.size()) {
    size_t end = csv.find('\n', start);
    lines.push_back(csv.substr(start, end - start));
    start = end + 1;
  }
  REQUIRE(!lines.empty());
  CHECK(lines[0] == "experiment,check,model,param_point,h,value,tolerance,pass");
  CHECK(lines.size() == rep.checks.size() + 1);
  for (size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i].rfind("torsion,", 0) == 0);
    CHECK((lines[i].find(",true") != std::string::npos ||
           lines[i].find(",false") != std::string::npos));
  }
  CHECK(lines[1].find("\"(") != std::string::npos);
}

TEST_CASE("the config echo reflects resolved experiment inputs") {
  ExperimentConfig cfg;
  cfg.experiment = "holonomy";
  cfg.model = "sphere";
  GeometryReport rep = run_experiment(cfg);
  nlohmann::json echo = nlohmann::json::parse(rep.config_echo);
  CHECK(echo["experiment"] == "holonomy");
  CHECK(echo["h_sequence"].size() == 3);
  CHECK(echo["tolerances"].contains("curvature_match"));
  CHECK(!echo.contains("output"));
}
