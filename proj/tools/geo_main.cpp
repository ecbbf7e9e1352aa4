#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ltp/experiments.hpp"
#include "ltp/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ltp::config_error(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geo: transport, curvature, and flatness experiments on vector bundles"};

  std::string experiment;
  std::string config_path;
  std::string model;
  std::string out_path;
  std::string format;
  int steps = -1;
  double fd_step = 0.0;
  long long seed = -1;

  std::string experiment_list;
  for (const auto& name : ltp::experiment_names())
    experiment_list += (experiment_list.empty() ? "" : "|") + name;

  app.add_option("experiment", experiment, "one of " + experiment_list)->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--model", model, "model name override");
  app.add_option("--out", out_path, "output path override (default stdout)");
  app.add_option("--format", format, "json or csv");
  app.add_option("--steps", steps, "integrator step-count override (0 = automatic)");
  app.add_option("--fd-step", fd_step, "finite-difference step override");
  app.add_option("--seed", seed, "seed override for spot-check sampling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    ltp::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = ltp::parse_config(read_file(config_path), config_path);
    cfg.experiment = experiment;
    if (!model.empty()) cfg.model = model;
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) cfg.format = format;
    if (steps >= 0) cfg.steps = steps;
    if (fd_step > 0.0) cfg.fd_step = fd_step;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    ltp::validate_config(cfg);

    auto start = std::chrono::steady_clock::now();
    ltp::GeometryReport report = ltp::run_experiment(cfg);
    auto end = std::chrono::steady_clock::now();
    report.elapsed_seconds = std::chrono::duration<double>(end - start).count();
    report.timestamp = utc_timestamp();

    std::string text =
        cfg.format == "csv" ? ltp::report_csv(report) : ltp::report_json(report);
    if (cfg.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out_path, std::ios::binary);
      if (!out) {
        std::cerr << "geo: cannot write " << cfg.out_path << "\n";
        return 2;
      }
      out << text;
    }

    if (!report.all_checks_pass()) {
      for (const auto& check : report.checks)
        if (!check.pass)
          std::cerr << "geo: check failed: " << check.name << " (value "
                    << ltp::format_double(check.value) << ", tolerance "
                    << ltp::format_double(check.tolerance) << ")"
                    << (check.param_point.empty() ? "" : " at " + check.param_point)
                    << "\n";
      return 1;
    }
    return 0;
  } catch (const ltp::config_error& err) {
    std::cerr << "geo: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "geo: " << err.what() << "\n";
    return 1;
  }
}
