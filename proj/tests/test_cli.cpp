#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "corpus.hpp"
#include "hardy/experiment.hpp"

using namespace hardy;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hardy_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json mass_config() {
  return json::parse(R"({
    "name": "mass",
    "symbol": {"kind": "zero"},
    "masses": [{"re": 0.5, "weight": 3}],
    "grid": 4096,
    "degree": 40,
    "n_max": 12,
    "studies": ["duality", "asymptotics"]
  })");
}

int run_exe(const std::string& args) {
  const char* exe = std::getenv("HARDY_EXE");
  REQUIRE(exe != nullptr);
  const int status = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(mass_config());
  CHECK(c.grid == 4096);
  CHECK(c.degree == 40);
  CHECK(c.mass_points.size() == 1);
  CHECK(c.cutoff == std::vector<std::size_t>{0});
  CHECK(c.studies.size() == 2);

  auto unknown = mass_config();
  unknown["gird"] = 1024;
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  auto nested = mass_config();
  nested["gates"] = {{"identiy", 1e-3}};
  CHECK_THROWS_AS(parse_config(nested), ConfigError);
  auto wrong_type = mass_config();
  wrong_type["degree"] = "forty";
  CHECK_THROWS_AS(parse_config(wrong_type), ConfigError);
  auto bad_kind = mass_config();
  bad_kind["symbol"] = {{"kind", "spline"}};
  CHECK_THROWS_AS(parse_config(bad_kind), ConfigError);
  auto bad_expr = mass_config();
  bad_expr["symbol"] = {{"kind", "rational"}, {"expression", "0.5*conj(t"}};
  CHECK_THROWS_AS(parse_config(bad_expr), ConfigError);
  auto bad_convention = mass_config();
  bad_convention["convention"] = "sideways";
  CHECK_THROWS_AS(parse_config(bad_convention), InvalidArgument);
}

TEST_CASE("symbol encodings produce the same data") {
  const auto dir = scratch("encodings");
  auto by_expr = mass_config();
  by_expr["grid"] = 64;
  by_expr["symbol"] = {{"kind", "rational"}, {"expression", "0.6*conj(t)"}};
  auto by_coeff = by_expr;
  by_coeff["symbol"] = json::parse(R"({"kind": "coefficients", "terms": [{"index": -1, "re": 0.6}]})");
  {
    std::ofstream out(dir / "samples.csv");
    out << "re,im\n";
    const CircleGrid g(64);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const cplx v = 0.6 * std::conj(g.node(j));
      char buf[80];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.real(), v.imag());
      out << buf;
    }
  }
  auto by_samples = by_expr;
  by_samples["symbol"] = {{"kind", "samples"}, {"path", "samples.csv"}};

  const auto a = build_symbol(parse_config(by_expr), 64);
  const auto b = build_symbol(parse_config(by_coeff), 64);
  const auto s = build_symbol(parse_config(by_samples, dir), 64);
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(std::abs(a.values()[j] - b.values()[j]) < 1e-15);
    CHECK(std::abs(a.values()[j] - s.values()[j]) < 1e-15);
  }
  CHECK_THROWS_AS(build_symbol(parse_config(by_samples, dir), 128), ConfigError);
}

TEST_CASE("mass corpus run: identity and asymptotic trace") {
  const auto dir = scratch("mass");
  const auto outcome = run_experiment(parse_config(mass_config()), dir);
  CHECK(outcome.exit_code == kExitOk);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["schema_version"] == kSummarySchemaVersion);
  CHECK(summary["all_passed"] == true);
  CHECK(summary["convention"] == "unitary");
  CHECK(summary["studies"]["duality"]["identity_residual"].get<double>() < 1e-9);
  for (const auto& g : summary["gates"]) {
    CHECK(fs::exists(dir / g["table"].get<std::string>()));
  }

  const auto rows = read_csv(dir / "asymptotics.csv");
  REQUIRE(rows.size() == 14);
  CHECK(rows[0][0] == "n");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int n = std::stoi(rows[i][0]);
    CHECK(std::abs(std::stod(rows[i][1]) - corpus::mass_trace(n)) < 1e-10);
  }
  CHECK(fs::exists(dir / "timings.json"));
}

TEST_CASE("runs are deterministic") {
  auto cfg = mass_config();
  cfg["studies"] = {"unitarity", "duality", "sandwich", "orthonormal"};
  cfg["grid"] = 1024;
  cfg["degree"] = 24;
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  run_experiment(parse_config(cfg), a);
  run_experiment(parse_config(cfg), b, 4);
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().filename() == "timings.json") continue;
    CAPTURE(entry.path().filename().string());
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  }
}

TEST_CASE("convergence study on the mass case") {
  auto cfg = mass_config();
  cfg["studies"] = {"convergence"};
  cfg["masses"] = json::parse(R"([{"re": 0.5, "weight": 3}, {"re": 0.3333333333333333, "weight": 1}])");
  cfg["convergence"] = {{"grids", {1024, 2048, 4096}}, {"degrees", {4, 8, 16, 32}}};
  const auto dir = scratch("convergence");
  const auto outcome = run_experiment(parse_config(cfg), dir);
  CHECK(outcome.exit_code == kExitOk);
  const auto by_degree = outcome.summary["studies"]["convergence"]["residuals_by_degree"];
  REQUIRE(by_degree.size() == 4);
  // doubling M at least quarters the residual until the rounding floor
  for (std::size_t i = 1; i < by_degree.size(); ++i) {
    const double prev = by_degree[i - 1].get<double>();
    const double next = by_degree[i].get<double>();
    if (prev > 1e-13) CHECK(next <= prev / 4.0);
  }
  const auto rho = read_csv(dir / "convergence_rho.csv");
  CHECK(rho.size() == 5);
  CHECK(outcome.summary["studies"]["convergence"]["cutoff_sweep_decreasing"] == true);
}

TEST_CASE("exit codes of the executable") {
  const auto dir = scratch("exe");
  auto write = [&](const std::string& name, const json& cfg) {
    std::ofstream(dir / name) << cfg.dump();
    return (dir / name).string();
  };

  CHECK(run_exe("run " + write("ok.json", mass_config()) + " --out " + (dir / "ok").string()) == 0);
  CHECK(fs::exists(dir / "ok" / "summary.json"));

  auto big = mass_config();
  big["symbol"] = {{"kind", "rational"}, {"expression", "1.2*conj(t)"}};
  CHECK(run_exe("run " + write("big.json", big) + " --out " + (dir / "big").string()) == 2);
  const auto big_summary = json::parse(slurp(dir / "big" / "summary.json"));
  CHECK(big_summary["error"]["stage"] == "validate");
  CHECK_FALSE(big_summary.contains("studies"));

  auto unknown = mass_config();
  unknown["extra"] = true;
  CHECK(run_exe("run " + write("unknown.json", unknown)) == 2);
  CHECK(run_exe("run " + (dir / "missing.json").string()) == 2);
  CHECK(run_exe("run " + write("ok2.json", mass_config()) + " --convention diagonal") == 2);
  CHECK(run_exe("run " + write("ok3.json", mass_config()) + " --grid 1000 --out " + (dir / "g").string()) == 2);

  auto touching = mass_config();
  touching["symbol"] = {{"kind", "rational"}, {"expression", "conj(t)"}};
  touching["studies"] = {"duality"};
  CHECK(run_exe("run " + write("touch.json", touching) + " --out " + (dir / "touch").string()) == 3);

  CHECK(run_exe("run " + write("gate.json", mass_config()) + " --tol-gate 1e-300 --out " + (dir / "gate").string()) ==
        4);
  const auto gate_summary = json::parse(slurp(dir / "gate" / "summary.json"));
  CHECK(gate_summary["all_passed"] == false);

  CHECK(run_exe("run " + write("printed.json", mass_config()) + " --convention printed --out " +
                (dir / "printed").string()) == 4);
  const auto printed = json::parse(slurp(dir / "printed" / "summary.json"));
  CHECK(printed["convention"] == "printed");

  CHECK(run_exe("run " + write("small.json", mass_config()) + " --grid 1024 --degree 20 --out " +
                (dir / "small").string()) == 0);
  const auto small = json::parse(slurp(dir / "small" / "summary.json"));
  CHECK(small["truncation"]["grid"] == 1024);
  CHECK(small["truncation"]["degree"] == 20);
}

TEST_CASE("shipped configurations run cleanly") {
  for (const auto& entry : fs::directory_iterator(fs::path(HARDY_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    auto cfg = load_config(entry.path());
    const auto dir = scratch("shipped_" + entry.path().stem().string());
    CHECK(run_experiment(cfg, dir).exit_code == kExitOk);
  }
}
