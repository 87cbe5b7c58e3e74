#pragma once

// Batch experiments driven by a JSON configuration: build the data, run the
// requested studies, write one CSV per table plus summary.json.

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hardy/circle.hpp"
#include "hardy/duality.hpp"
#include "hardy/errors.hpp"
#include "hardy/tolerances.hpp"

namespace hardy {

inline constexpr int kSummarySchemaVersion = 1;
inline constexpr const char* kVersion = "1.0.0";

// Exit codes of `hardy run`.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitGate = 4,
};

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct SymbolSpec {
  enum class Kind { zero, coefficients, rational, samples };
  Kind kind = Kind::zero;
  std::map<int, cplx> coefficients;
  std::string expression;
  std::filesystem::path samples_path;
};

struct Gates {
  double identity = 1e-6;
  double theorem = 1e-6;
  double unitarity = 1e-8;
  double orthonormal = 1e-7;
  double asymptotic = 1e-3;
  double psd = 1e-10;
  // |K - 1| may grow by at most this much from one shift to the next in the tail.
  double monotone_slack = 1e-12;
};

struct ConvergenceSpec {
  std::vector<std::size_t> grids{1024, 2048, 4096};
  std::vector<int> degrees{8, 16, 32, 48};
};

struct ExperimentConfig {
  std::string name = "experiment";
  SymbolSpec symbol;
  std::vector<cplx> mass_points;
  std::vector<double> mass_weights;
  std::size_t grid = 4096;
  int degree = 48;
  std::optional<int> hankel;
  int n_max = 16;
  int tail_from = 4;
  std::vector<double> rho{0.9};
  std::vector<std::size_t> cutoff;
  std::vector<int> sandwich_shifts{0, 1, 2};
  std::vector<std::string> studies;
  Tolerances tolerances;
  Gates gates;
  MassConvention convention = MassConvention::unitary;
  unsigned long long seed = 7;
  int vectors = 20;
  int vector_band = 16;
  int theorem_band = 32;
  int orthonormal_max = 8;
  ConvergenceSpec convergence;
  std::filesystem::path output = "out";
};

// Throws ConfigError on unknown keys, wrong types or out-of-range values.
// Relative sample paths resolve against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Symbol samples on the given grid, per the symbol spec.
SymbolData build_symbol(const ExperimentConfig& config, std::size_t grid_size);
MassSet build_masses(const ExperimentConfig& config);

struct RunOutcome {
  int exit_code = kExitOk;
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
};

// Validates, runs the configured studies and writes CSV tables, summary.json
// and timings.json into out_dir.  Never throws for numerical failures; they
// map onto exit codes.  Studies run on up to `threads` workers.
RunOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir, int threads = 1);

// Entry point of the `hardy` executable.
int run_cli(int argc, char** argv);

}  // namespace hardy
