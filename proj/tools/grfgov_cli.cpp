#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "grfgov/checks.hpp"
#include "grfgov/plot.hpp"
#include "grfgov/telemetry.hpp"

using namespace grfgov;

namespace {

int runSim(const std::string& scenario, const std::string& erg, const std::string& config,
           std::optional<double> dt, std::optional<double> duration, const std::string& out) {
  const ScenarioKind kind = scenarioFromName(scenario);
  ScenarioConfig cfg =
      config.empty() ? ScenarioConfig::defaults(kind) : loadConfigFile(config, &kind);
  cfg.erg_enabled = erg == "on";
  if (dt) cfg.dt = *dt;
  if (duration) cfg.duration = *duration;
  cfg.validate();

  const auto start = std::chrono::steady_clock::now();
  const auto records = runSimulation(cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  exportCsv(records, out, {kRefDim, cfg.constraints.rows()});

  int feasible = 0;
  for (const auto& r : records) {
    if (r.h_w.minCoeff() >= 0.0) ++feasible;
  }
  std::cout << scenarioName(kind) << " erg=" << erg << ": " << records.size() << " steps in "
            << elapsed << " s, min(h_w) >= 0 on " << feasible << " steps -> " << out << "\n";
  return 0;
}

int runPlot(const std::string& in, const std::string& out, std::optional<double> mu_s) {
  CsvLayout layout;
  const auto records = readCsv(in, &layout);
  // Three rows is the walking layout.
  const double mu = mu_s ? *mu_s
                         : ScenarioConfig::defaults(layout.n_c == 3 ? ScenarioKind::kWalk
                                                                    : ScenarioKind::kVlip)
                               .constraints.mu_s;
  for (const auto& path : emitPlots(records, out, mu)) std::cout << path << "\n";
  return 0;
}

int runCheck(const std::string& suite) {
  const auto start = std::chrono::steady_clock::now();
  const CheckReport report = runCheckSuite(suite);
  for (const auto& item : report.items) {
    std::cout << (item.passed ? "ok   " : "FAIL ") << item.label << " (" << item.detail
              << ")\n";
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << suite << ": " << (report.passed() ? "passed" : "FAILED") << " in " << elapsed
            << " s\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference governor for ground-reaction-force constraints on a thruster-assisted "
               "pendulum"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto* sim = app.add_subcommand("sim", "Run a scenario and write telemetry CSV");
  std::string scenario, erg, config, sim_out;
  std::optional<double> dt, duration;
  sim->add_option("--scenario", scenario, "Scenario")
      ->required()
      ->check(CLI::IsMember({"vlip", "walk"}));
  sim->add_option("--erg", erg, "Reference governor")
      ->required()
      ->check(CLI::IsMember({"on", "off"}));
  sim->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
  sim->add_option("--dt", dt, "Step size [s]");
  sim->add_option("--duration", duration, "Simulated time [s]");
  sim->add_option("--out", sim_out, "Output CSV path")->required();

  auto* plot = app.add_subcommand("plot", "Render SVG charts from telemetry CSV");
  std::string plot_in, plot_out;
  std::optional<double> mu_s;
  plot->add_option("--in", plot_in, "Telemetry CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output path prefix")->required();
  plot->add_option("--mu-s", mu_s, "Friction coefficient for the cone bounds");

  auto* check = app.add_subcommand("check", "Run a property suite");
  std::string suite;
  check->add_option("--suite", suite, "Suite")
      ->required()
      ->check(CLI::IsMember({"jacobian", "lyapunov", "oracle"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return runSim(scenario, erg, config, dt, duration, sim_out);
    if (*plot) return runPlot(plot_in, plot_out, mu_s);
    if (*check) return runCheck(suite);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
