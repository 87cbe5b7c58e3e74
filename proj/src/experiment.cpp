#include "hardy/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <random>
#include <set>
#include <sstream>

#include "hardy/errors.hpp"
#include "hardy/expression.hpp"
#include "hardy/kernels.hpp"
#include "hardy/spaces.hpp"

namespace hardy {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

const std::set<std::string>& known_studies() {
  static const std::set<std::string> s{"asymptotics", "duality", "sandwich", "theorem",
                                       "unitarity",   "orthonormal", "convergence"};
  return s;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read_optional(const json& obj, const char* key, T& out, const std::string& where) {
  if (obj.contains(key) && !obj.at(key).is_null()) out = get<T>(obj, key, where);
}

SymbolSpec parse_symbol(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object() || !doc.contains("kind")) throw ConfigError("symbol must be an object with a 'kind'");
  SymbolSpec spec;
  const auto kind = get<std::string>(doc, "kind", "symbol");
  if (kind == "zero") {
    check_keys(doc, {"kind"}, "symbol");
    spec.kind = SymbolSpec::Kind::zero;
  } else if (kind == "coefficients") {
    check_keys(doc, {"kind", "terms"}, "symbol");
    spec.kind = SymbolSpec::Kind::coefficients;
    const auto& terms = doc.at("terms");
    if (!terms.is_array()) throw ConfigError("symbol.terms must be an array");
    for (const auto& term : terms) {
      check_keys(term, {"index", "re", "im"}, "symbol.terms[]");
      const int index = get<int>(term, "index", "symbol.terms[]");
      double re = 0.0;
      double im = 0.0;
      read_optional(term, "re", re, "symbol.terms[]");
      read_optional(term, "im", im, "symbol.terms[]");
      spec.coefficients[index] += cplx{re, im};
    }
  } else if (kind == "rational") {
    check_keys(doc, {"kind", "expression"}, "symbol");
    spec.kind = SymbolSpec::Kind::rational;
    spec.expression = get<std::string>(doc, "expression", "symbol");
    try {
      Expression{spec.expression};
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  } else if (kind == "samples") {
    check_keys(doc, {"kind", "path"}, "symbol");
    spec.kind = SymbolSpec::Kind::samples;
    spec.samples_path = get<std::string>(doc, "path", "symbol");
    if (spec.samples_path.is_relative() && !base_dir.empty()) spec.samples_path = base_dir / spec.samples_path;
  } else {
    throw ConfigError("unknown symbol kind '" + kind + "'");
  }
  return spec;
}

bool power_of_two(std::size_t n) { return n >= 8 && (n & (n - 1)) == 0; }

std::vector<cplx> read_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open symbol samples '" + path.string() + "'");
  std::vector<cplx> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double re = 0.0;
    double im = 0.0;
    if (!(row >> re)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ConfigError("malformed sample row '" + line + "' in " + path.string());
    }
    first = false;
    row >> im;
    values.emplace_back(re, im);
  }
  return values;
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  check_keys(doc,
             {"name", "symbol", "masses", "grid", "degree", "hankel", "n_max", "tail_from", "rho", "cutoff",
              "sandwich_shifts", "studies", "tolerances", "gates", "convention", "seed", "vectors", "vector_band",
              "theorem_band", "orthonormal_max", "convergence", "output"},
             "config");
  ExperimentConfig c;
  read_optional(doc, "name", c.name, "config");
  if (!doc.contains("symbol")) throw ConfigError("config.symbol is required");
  c.symbol = parse_symbol(doc.at("symbol"), base_dir);

  if (doc.contains("masses")) {
    const auto& masses = doc.at("masses");
    if (!masses.is_array()) throw ConfigError("config.masses must be an array");
    for (const auto& m : masses) {
      check_keys(m, {"re", "im", "weight"}, "masses[]");
      double re = 0.0;
      double im = 0.0;
      read_optional(m, "re", re, "masses[]");
      read_optional(m, "im", im, "masses[]");
      c.mass_points.emplace_back(re, im);
      c.mass_weights.push_back(get<double>(m, "weight", "masses[]"));
    }
  }

  read_optional(doc, "grid", c.grid, "config");
  read_optional(doc, "degree", c.degree, "config");
  if (doc.contains("hankel") && !doc.at("hankel").is_null()) c.hankel = get<int>(doc, "hankel", "config");
  read_optional(doc, "n_max", c.n_max, "config");
  read_optional(doc, "tail_from", c.tail_from, "config");
  read_optional(doc, "rho", c.rho, "config");
  c.cutoff = {c.mass_points.empty() ? 0 : c.mass_points.size() - 1};
  read_optional(doc, "cutoff", c.cutoff, "config");
  read_optional(doc, "sandwich_shifts", c.sandwich_shifts, "config");
  read_optional(doc, "studies", c.studies, "config");
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    check_keys(t, {"unit", "touch", "outer", "blaschke", "fft", "psd", "order", "hat", "derivative", "duplicate"},
               "tolerances");
    auto& tol = c.tolerances;
    read_optional(t, "unit", tol.unit, "tolerances");
    read_optional(t, "touch", tol.touch, "tolerances");
    read_optional(t, "outer", tol.outer, "tolerances");
    read_optional(t, "blaschke", tol.blaschke, "tolerances");
    read_optional(t, "fft", tol.fft, "tolerances");
    read_optional(t, "psd", tol.psd, "tolerances");
    read_optional(t, "order", tol.order, "tolerances");
    read_optional(t, "hat", tol.hat, "tolerances");
    read_optional(t, "derivative", tol.derivative, "tolerances");
    read_optional(t, "duplicate", tol.duplicate, "tolerances");
  }
  if (doc.contains("gates")) {
    const auto& g = doc.at("gates");
    check_keys(g, {"identity", "theorem", "unitarity", "orthonormal", "asymptotic", "psd", "monotone_slack"}, "gates");
    read_optional(g, "identity", c.gates.identity, "gates");
    read_optional(g, "theorem", c.gates.theorem, "gates");
    read_optional(g, "unitarity", c.gates.unitarity, "gates");
    read_optional(g, "orthonormal", c.gates.orthonormal, "gates");
    read_optional(g, "asymptotic", c.gates.asymptotic, "gates");
    read_optional(g, "psd", c.gates.psd, "gates");
    read_optional(g, "monotone_slack", c.gates.monotone_slack, "gates");
  }
  if (doc.contains("convention")) {
    try {
      c.convention = mass_convention_from_string(get<std::string>(doc, "convention", "config"));
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  read_optional(doc, "seed", c.seed, "config");
  read_optional(doc, "vectors", c.vectors, "config");
  read_optional(doc, "vector_band", c.vector_band, "config");
  read_optional(doc, "theorem_band", c.theorem_band, "config");
  read_optional(doc, "orthonormal_max", c.orthonormal_max, "config");
  if (doc.contains("convergence")) {
    const auto& cv = doc.at("convergence");
    check_keys(cv, {"grids", "degrees"}, "convergence");
    read_optional(cv, "grids", c.convergence.grids, "convergence");
    read_optional(cv, "degrees", c.convergence.degrees, "convergence");
  }
  if (doc.contains("output")) c.output = get<std::string>(doc, "output", "config");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path());
}

namespace {

void validate_ranges(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(power_of_two(c.grid), "grid must be a power of two >= 8");
  require(c.degree >= 1, "degree must be at least 1");
  require(!c.hankel || *c.hankel >= 1, "hankel must be at least 1");
  require(c.n_max >= 1, "n_max must be at least 1");
  require(c.tail_from >= 0, "tail_from must be nonnegative");
  for (double r : c.rho) require(r > 0.0 && r <= 1.0, "every rho must lie in (0, 1]");
  for (auto n : c.cutoff) require(n <= c.mass_points.size(), "cutoff exceeds the number of masses");
  for (int n : c.sandwich_shifts) require(n >= 0, "sandwich shifts must be nonnegative");
  require(!c.studies.empty(), "no studies requested");
  for (const auto& s : c.studies) require(known_studies().count(s) == 1, "unknown study '" + s + "'");
  require(c.vectors >= 1, "vectors must be at least 1");
  require(c.vector_band >= 0, "vector_band must be nonnegative");
  require(c.theorem_band >= 1, "theorem_band must be at least 1");
  require(c.orthonormal_max >= 0 && c.orthonormal_max <= c.degree, "orthonormal_max must lie in [0, degree]");
  for (auto g : c.convergence.grids) require(power_of_two(g), "convergence grids must be powers of two >= 8");
  for (int d : c.convergence.degrees) require(d >= 1, "convergence degrees must be at least 1");
  require(static_cast<std::size_t>(c.degree) < c.grid / 2, "degree must stay below grid/2");
  for (double w : c.mass_weights) require(w > 0.0 && std::isfinite(w), "mass weights must be positive");
  for (const auto& z : c.mass_points) require(std::abs(z) < 1.0, "mass points must lie in the open unit disk");
}

}  // namespace

SymbolData build_symbol(const ExperimentConfig& config, std::size_t grid_size) {
  const CircleGrid grid(grid_size);
  switch (config.symbol.kind) {
    case SymbolSpec::Kind::zero:
      return SymbolData::zero(grid);
    case SymbolSpec::Kind::coefficients: {
      if (config.symbol.coefficients.empty()) return SymbolData::zero(grid);
      const int lo = config.symbol.coefficients.begin()->first;
      const int hi = config.symbol.coefficients.rbegin()->first;
      std::vector<cplx> values(static_cast<std::size_t>(hi - lo + 1));
      for (const auto& [p, v] : config.symbol.coefficients) values[static_cast<std::size_t>(p - lo)] = v;
      try {
        return SymbolData::from_coefficients(grid, CoeffSeries(lo, std::move(values)));
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    }
    case SymbolSpec::Kind::rational: {
      const Expression expr(config.symbol.expression);
      return SymbolData::from_function(grid, [&](cplx t) { return expr(t); });
    }
    case SymbolSpec::Kind::samples: {
      auto values = read_samples(config.symbol.samples_path);
      if (values.size() != grid_size) {
        std::ostringstream os;
        os << "symbol sample file has " << values.size() << " rows but the grid has " << grid_size << " nodes";
        throw ConfigError(os.str());
      }
      return SymbolData::from_samples(grid, std::move(values));
    }
  }
  throw ConfigError("unhandled symbol kind");
}

MassSet build_masses(const ExperimentConfig& config) {
  return MassSet(config.mass_points, config.mass_weights, config.tolerances);
}

// ---------------------------------------------------------------------------
// Studies

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

struct Gate {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  // "<" means value < threshold passes, ">=" means value >= threshold passes.
  std::string relation = "<";
  std::string table;

  bool pass() const {
    if (std::isnan(value)) return false;
    return relation == "<" ? value < threshold : value >= threshold;
  }
};

struct StudyResult {
  explicit StudyResult(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::vector<Table> tables;
  json metrics = json::object();
  std::vector<Gate> gates;
  std::optional<std::string> error;
  bool numerical_error = false;
  double seconds = 0.0;
};

struct Context {
  const ExperimentConfig& config;
  SpaceData space;
};

Table quantity_table(const std::string& file, const std::vector<std::pair<std::string, double>>& values) {
  Table t{file, {"quantity", "value"}, {}};
  for (const auto& [k, v] : values) t.add({k, num(v)});
  return t;
}

StudyResult study_asymptotics(const Context& ctx) {
  const auto& c = ctx.config;
  StudyResult r{"asymptotics"};
  const auto trace = asymptotic_sweep(ctx.space, c.n_max, c.degree, c.hankel, c.gates.asymptotic, c.tolerances);
  Table t{"asymptotics.csv", {"n", "K_at_zero", "abs_deviation"}, {}};
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    t.add({std::to_string(trace.values[i].first), num(trace.values[i].second), num(trace.deviation(i))});
  }
  double worst_increase = 0.0;
  for (std::size_t i = 1; i < trace.values.size(); ++i) {
    if (trace.values[i - 1].first < c.tail_from) continue;
    worst_increase = std::max(worst_increase, trace.deviation(i) - trace.deviation(i - 1));
  }
  r.metrics = {{"degree", trace.degree},
               {"hankel", trace.hankel},
               {"grid", trace.grid_size},
               {"tail_bound", trace.tail_bound},
               {"converged", trace.converged()},
               {"converged_at", trace.converged_at ? json(*trace.converged_at) : json(nullptr)},
               {"final_deviation", trace.deviation(trace.values.size() - 1)},
               {"tail_worst_increase", worst_increase}};
  r.gates.push_back({"final_deviation", trace.deviation(trace.values.size() - 1), c.gates.asymptotic, "<", t.file});
  r.gates.push_back({"tail_worst_increase", worst_increase, c.gates.monotone_slack, "<", t.file});
  r.tables.push_back(std::move(t));
  return r;
}

StudyResult study_duality(const Context& ctx) {
  const auto& c = ctx.config;
  StudyResult r{"duality"};
  const auto dual = build_dual(make_regular(ctx.space, c.tolerances), c.convention);
  const auto id = duality_identity(dual, c.degree, c.hankel);
  auto t = quantity_table("duality.csv", {{"T_at_zero", id.T_at_zero},
                                          {"K_shifted_at_zero", id.k_shifted},
                                          {"K_dual_at_zero", id.k_dual},
                                          {"product", id.product},
                                          {"identity_residual", id.residual},
                                          {"vector_residual", id.vector_residual},
                                          {"modulus_residual", dual.modulus_residual()},
                                          {"outer_residual", dual.outer_residual()},
                                          {"condition_primal", id.condition_primal},
                                          {"condition_dual", id.condition_dual},
                                          {"tail_bound", id.tail_bound}});
  r.metrics = {{"identity_residual", id.residual},     {"vector_residual", id.vector_residual},
               {"product", id.product},                {"provenance", dual.provenance},
               {"condition_primal", id.condition_primal}, {"condition_dual", id.condition_dual},
               {"tail_bound", id.tail_bound}};
  r.gates.push_back({"identity_residual", id.residual, c.gates.identity, "<", t.file});
  // the vector error enters the scalar identity quadratically
  r.gates.push_back({"vector_residual", id.vector_residual, std::sqrt(c.gates.identity), "<", t.file});
  r.tables.push_back(std::move(t));
  return r;
}

StudyResult study_sandwich(const Context& ctx) {
  const auto& c = ctx.config;
  StudyResult r{"sandwich"};
  Table t{"sandwich.csv",
          {"cutoff", "rho", "n", "K_truncated", "K", "K_regularized", "K_both", "upper_bound", "lower_bound",
           "scalar_margin", "bound_margin", "dual_margin", "psd_margin_truncated", "psd_margin_regularized",
           "identity_residual"},
          {}};
  double scalar = INFINITY, bound = INFINITY, dual = INFINITY, psd = INFINITY, ident = 0.0;
  for (auto cutoff : c.cutoff) {
    for (double rho : c.rho) {
      for (int n : c.sandwich_shifts) {
        SandwichReport s;
        try {
          s = sandwich_check(ctx.space, cutoff, rho, n, c.degree, c.hankel, c.tolerances);
        } catch (const OrderViolation& e) {
          r.error = e.what();
          scalar = -INFINITY;
          continue;
        }
        t.add({std::to_string(cutoff), num(rho), std::to_string(n), num(s.k_truncated), num(s.k_full),
               num(s.k_regularized), num(s.k_both), num(s.upper_bound), num(s.lower_bound), num(s.scalar_margin()),
               num(s.bound_margin()), num(s.dual_margin()), num(s.psd_margin_truncated),
               num(s.psd_margin_regularized), num(s.max_identity_residual())});
        scalar = std::min(scalar, s.scalar_margin());
        bound = std::min(bound, s.bound_margin());
        dual = std::min(dual, s.dual_margin());
        psd = std::min({psd, s.psd_margin_truncated, s.psd_margin_regularized});
        ident = std::max(ident, s.max_identity_residual());
      }
    }
  }
  r.metrics = {{"scalar_margin", scalar}, {"bound_margin", bound}, {"dual_margin", dual},
               {"psd_margin", psd},       {"identity_residual", ident}};
  r.gates.push_back({"scalar_margin", scalar, -c.tolerances.order, ">=", t.file});
  r.gates.push_back({"bound_margin", bound, -c.tolerances.order, ">=", t.file});
  r.gates.push_back({"psd_margin", psd, -c.gates.psd, ">=", t.file});
  r.gates.push_back({"identity_residual", ident, c.gates.identity, "<", t.file});
  r.tables.push_back(std::move(t));
  return r;
}

StudyResult study_theorem(const Context& ctx) {
  const auto& c = ctx.config;
  StudyResult r{"theorem"};
  const auto dual = build_dual(make_regular(ctx.space, c.tolerances), c.convention);
  const auto th = theorem_check(dual, c.theorem_band, c.hankel);
  auto t = quantity_table("theorem.csv", {{"half_band", th.half_band},
                                          {"complement_dimension", static_cast<double>(th.complement_dimension)},
                                          {"membership_residual", th.max_membership_residual},
                                          {"image_l2r_residual", th.image_l2r_residual},
                                          {"orthogonality_residual", th.orthogonality_residual},
                                          {"converse_residual", th.converse_residual}});
  r.metrics = {{"membership_residual", th.max_membership_residual},
               {"image_l2r_residual", th.image_l2r_residual},
               {"orthogonality_residual", th.orthogonality_residual},
               {"converse_residual", th.converse_residual},
               {"complement_dimension", th.complement_dimension}};
  r.gates.push_back({"max_residual", th.max_residual(), c.gates.theorem, "<", t.file});
  r.tables.push_back(std::move(t));
  return r;
}

StudyResult study_unitarity(const Context& ctx) {
  const auto& c = ctx.config;
  StudyResult r{"unitarity"};
  const auto primal = make_regular(ctx.space, c.tolerances);
  const auto dual = build_dual(primal, c.convention);
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> normal;
  auto draw = [&] { return cplx{normal(rng), normal(rng)} / std::sqrt(2.0); };

  Table t{"unitarity.csv", {"vector", "norm_squared", "image_norm_squared", "unitarity_residual", "involution_residual"}, {}};
  double worst_unit = 0.0, worst_inv = 0.0;
  for (int i = 0; i < c.vectors; ++i) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(2 * c.vector_band + 1));
    for (auto& z : coeffs) z = draw();
    std::vector<cplx> masses(primal.masses.size());
    for (auto& z : masses) z = draw();
    const auto v = canonical_vector(primal, CoeffSeries(-c.vector_band, std::move(coeffs)), std::move(masses));
    const double n0 = laurent_norm_squared(v, primal);
    const auto image = apply_tau(v, dual);
    const double n1 = laurent_norm_squared(image, dual.dual);
    const auto back = apply_tau(image, dual);
    const double unit = std::abs(n1 - n0) / n0;
    const double inv = coordinate_distance(back, v) / coordinate_norm(v);
    worst_unit = std::max(worst_unit, unit);
    worst_inv = std::max(worst_inv, inv);
    t.add({std::to_string(i), num(n0), num(n1), num(unit), num(inv)});
  }
  r.metrics = {{"unitarity_residual", worst_unit}, {"involution_residual", worst_inv}, {"seed", c.seed}};
  r.gates.push_back({"unitarity_residual", worst_unit, c.gates.unitarity, "<", t.file});
  r.gates.push_back({"involution_residual", worst_inv, c.gates.unitarity, "<", t.file});
  r.tables.push_back(std::move(t));
  return r;
}

StudyResult study_orthonormal(const Context& ctx) {
  const auto& c = ctx.config;
  StudyResult r{"orthonormal"};
  const auto sys = orthonormal_system(ctx.space, 0, c.orthonormal_max, c.degree, c.hankel, c.tolerances);
  Table t{"orthonormal.csv", {"a", "b", "re", "im"}, {}};
  for (Eigen::Index a = 0; a < sys.system_gram.rows(); ++a) {
    for (Eigen::Index b = 0; b < sys.system_gram.cols(); ++b) {
      t.add({std::to_string(sys.indices[static_cast<std::size_t>(a)]),
             std::to_string(sys.indices[static_cast<std::size_t>(b)]), num(sys.system_gram(a, b).real()),
             num(sys.system_gram(a, b).imag())});
    }
  }
  r.metrics = {{"max_deviation", sys.max_deviation()}};
  r.gates.push_back({"max_deviation", sys.max_deviation(), c.gates.orthonormal, "<", t.file});
  r.tables.push_back(std::move(t));
  return r;
}

// Residuals under refinement: each step may grow by at most a factor 2 and
// the last must not exceed the first, unless everything sits at the floor.
bool refines(const std::vector<double>& seq, double floor = 1e-12) {
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i] > 2.0 * seq[i - 1] && seq[i] > floor) return false;
  }
  return seq.empty() || seq.back() <= seq.front() || seq.back() < floor;
}

StudyResult study_convergence(const Context& ctx) {
  const auto& c = ctx.config;
  StudyResult r{"convergence"};
  auto grids = c.convergence.grids;
  auto degrees = c.convergence.degrees;
  std::sort(grids.begin(), grids.end());
  std::sort(degrees.begin(), degrees.end());

  Table t{"convergence.csv", {"grid", "degree", "identity_residual", "asymptotic_deviation"}, {}};
  std::map<std::pair<std::size_t, int>, double> residual;
  for (auto g : grids) {
    SpaceData space{build_symbol(c, g), ctx.space.masses};
    const auto dual = build_dual(make_regular(space, c.tolerances), c.convention);
    for (int d : degrees) {
      if (static_cast<std::size_t>(d) >= g / 2) continue;
      const double id = duality_identity(dual, d).residual;
      const double dev = std::abs(kernel_value_at_origin(space.with_shift(c.n_max), d, {}, c.tolerances) - 1.0);
      residual[{g, d}] = id;
      t.add({std::to_string(g), std::to_string(d), num(id), num(dev)});
    }
  }
  std::vector<double> by_degree, by_grid;
  for (int d : degrees) {
    if (residual.count({grids.back(), d})) by_degree.push_back(residual[{grids.back(), d}]);
  }
  for (auto g : grids) {
    if (residual.count({g, degrees.back()})) by_grid.push_back(residual[{g, degrees.back()}]);
  }

  // Regularization sweeps at shift 0.
  Table rho_table{"convergence_rho.csv", {"rho", "K_at_zero"}, {}};
  const double k_full = kernel_value_at_origin(ctx.space, c.degree, c.hankel, c.tolerances);
  std::vector<double> rhos{0.9, 0.99, 0.999};
  std::vector<double> k_rho;
  for (double rho : rhos) {
    k_rho.push_back(kernel_value_at_origin(ctx.space.with_rho(rho), c.degree, c.hankel, c.tolerances));
    rho_table.add({num(rho), num(k_rho.back())});
  }
  rho_table.add({"1", num(k_full)});
  bool rho_ok = true;
  for (std::size_t i = 0; i < k_rho.size(); ++i) {
    const double next = i + 1 < k_rho.size() ? k_rho[i + 1] : k_full;
    rho_ok = rho_ok && next >= k_rho[i] - c.tolerances.order;
  }

  Table cut_table{"convergence_cutoff.csv", {"cutoff", "K_at_zero"}, {}};
  bool cut_ok = true;
  double previous = INFINITY;
  for (std::size_t n = 0; n <= ctx.space.masses.size(); ++n) {
    const double k = kernel_value_at_origin(ctx.space.with_cutoff(n), c.degree, c.hankel, c.tolerances);
    cut_table.add({std::to_string(n), num(k)});
    cut_ok = cut_ok && k <= previous + c.tolerances.order;
    previous = k;
  }

  const bool degree_ok = refines(by_degree);
  const bool grid_ok = refines(by_grid);
  r.metrics = {{"degree_refinement_ok", degree_ok}, {"grid_refinement_ok", grid_ok},
               {"rho_sweep_increasing", rho_ok},    {"cutoff_sweep_decreasing", cut_ok},
               {"residuals_by_degree", by_degree},  {"residuals_by_grid", by_grid}};
  r.gates.push_back({"degree_refinement", degree_ok ? 1.0 : 0.0, 1.0, ">=", t.file});
  r.gates.push_back({"grid_refinement", grid_ok ? 1.0 : 0.0, 1.0, ">=", t.file});
  r.gates.push_back({"rho_sweep", rho_ok ? 1.0 : 0.0, 1.0, ">=", rho_table.file});
  r.gates.push_back({"cutoff_sweep", cut_ok ? 1.0 : 0.0, 1.0, ">=", cut_table.file});
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(rho_table));
  r.tables.push_back(std::move(cut_table));
  return r;
}

StudyResult run_study(const std::string& name, const Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  StudyResult result{name};
  try {
    if (name == "asymptotics") result = study_asymptotics(ctx);
    else if (name == "duality") result = study_duality(ctx);
    else if (name == "sandwich") result = study_sandwich(ctx);
    else if (name == "theorem") result = study_theorem(ctx);
    else if (name == "unitarity") result = study_unitarity(ctx);
    else if (name == "orthonormal") result = study_orthonormal(ctx);
    else if (name == "convergence") result = study_convergence(ctx);
  } catch (const InvalidArgument& e) {
    result.error = e.what();
    result.numerical_error = true;
  } catch (const Error& e) {
    result.error = e.what();
    result.numerical_error = true;
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_table(const Table& t, const std::filesystem::path& dir) {
  std::ofstream out(dir / t.file, std::ios::binary);
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

json tolerances_json(const Tolerances& t) {
  return {{"unit", t.unit},   {"touch", t.touch}, {"outer", t.outer}, {"blaschke", t.blaschke},
          {"fft", t.fft},     {"psd", t.psd},     {"order", t.order}, {"hat", t.hat},
          {"derivative", t.derivative}, {"duplicate", t.duplicate}};
}

json gates_json(const Gates& g) {
  return {{"identity", g.identity},     {"theorem", g.theorem},       {"unitarity", g.unitarity},
          {"orthonormal", g.orthonormal}, {"asymptotic", g.asymptotic}, {"psd", g.psd},
          {"monotone_slack", g.monotone_slack}};
}

void write_json(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << doc.dump(2) << "\n";
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir, int threads) {
  RunOutcome outcome;
  std::filesystem::create_directories(out_dir);
  json& summary = outcome.summary;
  summary["schema_version"] = kSummarySchemaVersion;
  summary["tool"] = {{"name", "hardy"}, {"version", kVersion}};
  summary["name"] = config.name;
  summary["convention"] = to_string(config.convention);
  summary["tolerances"] = tolerances_json(config.tolerances);
  summary["gate_thresholds"] = gates_json(config.gates);

  auto finish = [&](int code) {
    outcome.exit_code = code;
    summary["exit_code"] = code;
    write_json(summary, out_dir / "summary.json");
    outcome.files.push_back(out_dir / "summary.json");
    return outcome;
  };

  // validate
  std::optional<SpaceData> space;
  try {
    validate_ranges(config);
    auto symbol = build_symbol(config, config.grid);
    auto masses = build_masses(config);
    const auto szego = validate_szego(symbol, config.tolerances);
    summary["szego"] = {{"is_contractive", szego.is_contractive},
                        {"sup_modulus", szego.sup_modulus},
                        {"log_integral", std::isfinite(szego.log_integral) ? json(szego.log_integral) : json(nullptr)},
                        {"touching_nodes", szego.touching_nodes}};
    summary["masses"] = {{"count", masses.size()}, {"blaschke_sum", masses.blaschke_sum()},
                         {"has_origin", masses.has_origin()}};
    if (!szego.touching_nodes.empty()) {
      summary["warnings"].push_back("symbol touches the unit circle; outer-function studies will fail, pass rho < 1");
    }
    if (masses.has_origin()) summary["warnings"].push_back("mass at the origin; dual constructions are unavailable");
    space = SpaceData{std::move(symbol), std::move(masses)};
  } catch (const InvalidArgument& e) {
    summary["error"] = {{"stage", "validate"}, {"message", e.what()}};
    return finish(kExitConfig);
  }
  summary["truncation"] = {{"grid", config.grid},
                           {"degree", config.degree},
                           {"hankel", config.hankel ? json(*config.hankel)
                                                    : json(default_hankel_analytic(config.grid, config.degree))},
                           {"n_max", config.n_max}};

  const Context ctx{config, *space};
  std::vector<StudyResult> results(config.studies.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < config.studies.size(); ++i) results[i] = run_study(config.studies[i], ctx);
  } else {
    std::vector<std::future<StudyResult>> pending;
    std::size_t next = 0;
    while (next < config.studies.size() || !pending.empty()) {
      // Launch in order in waves of `threads`; results stay indexed by position.
      const std::size_t wave = std::min<std::size_t>(static_cast<std::size_t>(threads), config.studies.size() - next);
      const std::size_t base = next;
      for (std::size_t w = 0; w < wave; ++w, ++next) {
        pending.push_back(std::async(std::launch::async, run_study, config.studies[next], std::cref(ctx)));
      }
      for (std::size_t w = 0; w < pending.size(); ++w) results[base + w] = pending[w].get();
      pending.clear();
    }
  }

  bool numerical = false;
  bool gate_failed = false;
  json studies = json::object();
  json gates = json::array();
  json timings = json::object();
  for (const auto& r : results) {
    json s = r.metrics;
    json files = json::array();
    for (const auto& t : r.tables) {
      write_table(t, out_dir);
      outcome.files.push_back(out_dir / t.file);
      files.push_back(t.file);
    }
    s["tables"] = files;
    if (r.error) s["error"] = *r.error;
    studies[r.name] = s;
    numerical = numerical || r.numerical_error;
    if (r.error && !r.numerical_error) gate_failed = true;
    for (const auto& g : r.gates) {
      gates.push_back({{"study", r.name},       {"name", g.name},     {"value", g.value},
                       {"threshold", g.threshold}, {"relation", g.relation}, {"table", g.table},
                       {"pass", g.pass()}});
      gate_failed = gate_failed || !g.pass();
    }
    timings[r.name] = r.seconds;
  }
  summary["studies"] = studies;
  summary["gates"] = gates;
  summary["all_passed"] = !numerical && !gate_failed;
  write_json({{"studies", timings}}, out_dir / "timings.json");
  outcome.files.push_back(out_dir / "timings.json");
  return finish(numerical ? kExitNumerical : (gate_failed ? kExitGate : kExitOk));
}

}  // namespace hardy
