// g2cy: property suites and glue-and-solve runs.
//
//   g2cy verify --suite S [--trials N] [--seed K] [--scalar rational|float] [--tol X] [--out PATH] [--jobs N]
//   g2cy glue --config PATH [--out PATH] [--csv PATH] [--timing]
//
// Exit status: 0 pass, 1 failed property or failed run, 2 usage or config error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "g2cy/io.hpp"
#include "suites.hpp"

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw g2cy::ConfigError("config: cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace g2cy;
  CLI::App app{"G2 / Calabi-Yau gluing toolkit"};
  app.require_subcommand(1);

  cli::SuiteSpec spec;
  std::string verify_out, verify_config, verify_csv;
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("--suite", spec.suite, "pointwise|correspondence|spectral|gluing|solver|moduli")->required();
  verify->add_option("--trials", spec.trials, "number of random trials");
  verify->add_option("--seed", spec.seed, "base seed");
  verify->add_option("--scalar", spec.scalar, "rational or float");
  verify->add_option("--tol", spec.tolerance, "float tolerance");
  verify->add_option("--out", verify_out, "report path (default stdout)");
  verify->add_option("--jobs", spec.jobs, "parallel trials");
  verify->add_option("--config", verify_config, "solver suite: glue config for the end-to-end run");
  verify->add_option("--csv", verify_csv, "solver suite: residual history path");

  std::string config_path, glue_out, csv_path;
  bool timing = false;
  auto* glue = app.add_subcommand("glue", "glue, remove torsion and report classes");
  glue->add_option("--config", config_path, "config JSON")->required();
  glue->add_option("--out", glue_out, "report path (default stdout)");
  glue->add_option("--csv", csv_path, "residual history CSV");
  glue->add_flag("--timing", timing, "include wall-clock times in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  if (*verify) {
    try {
      if (spec.suite == "solver" && spec.scalar == "rational" && verify->count("--scalar") == 0) spec.scalar = "float";
      if (!verify_config.empty()) spec.glue = parse_config(read_text(verify_config));
      auto result = cli::run_suite(spec);
      if (!verify_csv.empty() && !result.residual_csv.empty()) {
        write_text(verify_csv, result.residual_csv);
        result.artifacts.push_back(verify_csv);
      }
      write_text(verify_out, cli::suite_json(result).dump(2) + "\n");
      for (const auto& p : result.properties)
        if (p.failures)
          std::cerr << "FAIL " << p.name << " (" << p.statement << "): " << p.failures << "/" << p.checks << ", first in trial "
                    << p.first_failed_trial << ": " << p.first_failure << "\n";
      return result.passed() ? kPass : kFail;
    } catch (const cli::UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kUsage;
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kUsage;
    }
  }

  try {
    auto config = parse_config(read_text(config_path));
    auto report = glue_and_solve(config);
    ReportOptions opt;
    opt.timing = timing;
    auto j = report_json(report, opt);
    write_text(glue_out, j.dump(2) + "\n");
    if (!csv_path.empty()) write_text(csv_path, report.solve.report.history_csv());
    return j["passed"].get<bool>() ? kPass : kFail;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const StageError& e) {
    std::cerr << "stage failure: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
