#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "hardy/errors.hpp"
#include "hardy/experiment.hpp"

namespace hardy {

namespace {

int thread_count() {
  const char* env = std::getenv("HARDY_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Kernel, duality and regularization experiments for weighted Hardy spaces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the studies listed in a JSON configuration");
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::size_t> grid;
  std::optional<int> degree;
  std::optional<std::string> convention;
  std::optional<double> tol_gate;
  run->add_option("config", config_path, "Configuration file")->required();
  run->add_option("--out", out, "Output directory (overrides the config)");
  run->add_option("--grid", grid, "Grid size, a power of two >= 8");
  run->add_option("--degree", degree, "Truncation degree M");
  run->add_option("--convention", convention, "Dual mass convention")
      ->check(CLI::IsMember({"unitary", "printed"}));
  run->add_option("--tol-gate", tol_gate, "Threshold for the identity and theorem gates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  ExperimentConfig config;
  try {
    config = load_config(config_path);
    if (grid) config.grid = *grid;
    if (degree) config.degree = *degree;
    if (convention) config.convention = mass_convention_from_string(*convention);
    if (tol_gate) {
      if (!(*tol_gate > 0.0)) throw ConfigError("--tol-gate must be positive");
      config.gates.identity = *tol_gate;
      config.gates.theorem = *tol_gate;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "hardy: configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::filesystem::path out_dir = out ? std::filesystem::path(*out) : config.output;
  RunOutcome outcome;
  try {
    outcome = run_experiment(config, out_dir, thread_count());
  } catch (const std::exception& e) {
    std::cerr << "hardy: " << e.what() << "\n";
    return kExitNumerical;
  }

  const auto& s = outcome.summary;
  if (s.contains("error")) std::cerr << "hardy: " << s["error"]["message"].get<std::string>() << "\n";
  if (s.contains("warnings")) {
    for (const auto& w : s["warnings"]) std::cerr << "hardy: warning: " << w.get<std::string>() << "\n";
  }
  if (s.contains("studies")) {
    for (const auto& [name, study] : s["studies"].items()) {
      if (study.contains("error")) std::cerr << "hardy: " << name << ": " << study["error"].get<std::string>() << "\n";
    }
  }
  if (s.contains("gates")) {
    for (const auto& g : s["gates"]) {
      std::cout << (g["pass"].get<bool>() ? "PASS " : "FAIL ") << g["study"].get<std::string>() << "."
                << g["name"].get<std::string>() << " = " << g["value"].dump() << " (" << g["relation"].get<std::string>()
                << " " << g["threshold"].dump() << ")\n";
    }
  }
  std::cout << "summary: " << (out_dir / "summary.json").string() << "\n";
  return outcome.exit_code;
}

}  // namespace hardy
