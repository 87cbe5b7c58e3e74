#include "hardy/duality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardy/errors.hpp"
#include "hardy/fft.hpp"
#include "hardy/kernels.hpp"

namespace hardy {

RegularData make_regular(const SymbolData& symbol, const MassSet& masses, const Tolerances& tol) {
  validate_szego(symbol, tol);
  if (masses.has_origin()) {
    throw InvalidArgument("a mass at the origin makes B(0) = 0; dual data are undefined");
  }
  auto outer = build_outer(symbol, tol);
  auto blaschke = build_blaschke(masses, outer, tol);
  std::vector<cplx> inv_t(masses.size());
  for (std::size_t k = 0; k < masses.size(); ++k) {
    inv_t[k] = blaschke.derivatives()[k] / outer.at(masses.points()[k]);
  }
  return RegularData{symbol, masses, std::move(outer), std::move(blaschke), std::move(inv_t), tol};
}

RegularData make_regular(const SpaceData& space, const Tolerances& tol) {
  auto m = materialize(space);
  return make_regular(m.symbol, m.masses, tol);
}

const char* to_string(MassConvention c) { return c == MassConvention::unitary ? "unitary" : "printed"; }

MassConvention mass_convention_from_string(const std::string& s) {
  if (s == "unitary") return MassConvention::unitary;
  if (s == "printed") return MassConvention::printed;
  throw InvalidArgument("unknown mass convention '" + s + "' (expected unitary or printed)");
}

// ---------------------------------------------------------------------------

double DualData::modulus_residual() const {
  const auto& grid = primal.grid();
  double r = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    r = std::max(r, std::abs(std::abs(dual.symbol.values()[grid.mirror(j)]) - std::abs(primal.symbol.values()[j])));
  }
  return r;
}

double DualData::outer_residual() const {
  const auto& grid = primal.grid();
  double r = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    r = std::max(r, std::abs(dual.outer.values()[j] - std::conj(primal.outer.values()[grid.mirror(j)])));
  }
  return r;
}

DualData build_dual(const RegularData& data, MassConvention convention) {
  const auto& grid = data.grid();
  const std::size_t n = grid.size();

  // R^tau(conj t) = -R(t) conj(T(t)) / T_e(t)
  std::vector<cplx> dual_values(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t s = grid.mirror(j);
    dual_values[j] = -data.symbol.values()[s] * std::conj(data.blaschke.T_values()[s]) / data.outer.values()[s];
  }

  std::vector<cplx> points(data.masses.size());
  std::vector<double> weights(data.masses.size());
  for (std::size_t k = 0; k < data.masses.size(); ++k) {
    if (std::abs(data.blaschke.derivatives()[k]) < data.tol.derivative) {
      throw DegenerateDerivative("B'(zeta_k) vanishes; dual mass undefined");
    }
    const double d2 = std::norm(data.inverse_T_derivatives[k]);
    const double nu = data.masses.weights()[k];
    points[k] = std::conj(data.masses.points()[k]);
    weights[k] = convention == MassConvention::unitary ? 1.0 / (nu * d2) : d2 / nu;
  }

  DualData dual{data,
                make_regular(SymbolData::from_samples(grid, std::move(dual_values)),
                             MassSet(std::move(points), std::move(weights), data.tol), data.tol),
                convention, {}};
  std::ostringstream os;
  os << "dual masses: " << to_string(convention)
     << (convention == MassConvention::unitary ? " (nu_tau * nu * |(1/T)'|^2 = 1)" : " (nu_tau * nu = |(1/T)'|^2)")
     << "; (1/T)'(zeta_k) = B'(zeta_k)/T_e(zeta_k)";
  dual.provenance = os.str();
  return dual;
}

// ---------------------------------------------------------------------------

const RegularData& side_data(const DualData& dual, Side side) {
  return side == Side::primal ? dual.primal : dual.dual;
}

namespace {

std::vector<cplx> minus_projection_of_product(const RegularData& data, std::span<const cplx> f1) {
  std::vector<cplx> rf(f1.size());
  for (std::size_t j = 0; j < f1.size(); ++j) rf[j] = data.symbol.values()[j] * f1[j];
  return riesz_project(std::span<const cplx>(rf), Part::antianalytic);
}

double mean_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s / static_cast<double>(v.size());
}

void require_grid(const TauVector& v, const RegularData& data) {
  if (v.f1.size() != data.grid().size() || v.f2.size() != data.grid().size()) {
    throw GridMismatch("vector does not live on the data grid");
  }
  if (v.masses.size() != data.masses.size()) throw GridMismatch("vector mass coordinates do not match the masses");
}

}  // namespace

TauVector embedded_samples(const RegularData& data, std::vector<cplx> values, std::vector<cplx> mass_values,
                           Side side) {
  TauVector v;
  auto minus = minus_projection_of_product(data, values);
  v.f2.resize(minus.size());
  for (std::size_t j = 0; j < minus.size(); ++j) v.f2[j] = -minus[j];
  v.f1 = std::move(values);
  v.masses = std::move(mass_values);
  v.side = side;
  require_grid(v, data);
  return v;
}

TauVector canonical_vector(const RegularData& data, const CoeffSeries& f, std::vector<cplx> mass_values, Side side) {
  return embedded_samples(data, fft::samples(f.to_transform_order(data.grid().size())), std::move(mass_values), side);
}

TauVector embedded_vector(const RegularData& data, const CoeffSeries& f, Side side) {
  if (!f.empty() && f.first() < 0) throw InvalidArgument("embedded vectors must be analytic");
  std::vector<cplx> masses(data.masses.size());
  for (std::size_t k = 0; k < masses.size(); ++k) masses[k] = f.evaluate(data.masses.points()[k]);
  return canonical_vector(data, f, std::move(masses), side);
}

TauVector from_laurent(const RegularData& data, const Eigen::VectorXcd& x, int half_band, Side side) {
  const Eigen::Index laurent = 2 * half_band + 1;
  if (x.size() != laurent + static_cast<Eigen::Index>(data.masses.size())) {
    throw GridMismatch("Laurent coordinate vector has the wrong length");
  }
  std::vector<cplx> coeffs(x.data(), x.data() + laurent);
  std::vector<cplx> masses(x.data() + laurent, x.data() + x.size());
  return canonical_vector(data, CoeffSeries(-half_band, std::move(coeffs)), std::move(masses), side);
}

TauVector apply_tau(const TauVector& v, const DualData& dual) {
  const RegularData& src = side_data(dual, v.side);
  require_grid(v, src);
  const auto& grid = src.grid();
  const std::size_t n = grid.size();
  const auto r = src.symbol.values();
  const auto te = src.outer.values();
  const auto b = src.blaschke.values();

  TauVector out;
  out.side = v.side == Side::primal ? Side::dual : Side::primal;
  out.f1.resize(n);
  out.f2.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx t = grid.node(j);
    const cplx top = v.f1[j] + std::conj(r[j]) * v.f2[j];
    const cplx bottom = r[j] * v.f1[j] + v.f2[j];
    const std::size_t s = grid.mirror(j);
    // 1 / conj(T) = conj(B) / conj(T_e)
    out.f1[s] = t * std::conj(b[j]) / std::conj(te[j]) * top;
    out.f2[s] = t / te[j] * bottom;
  }
  out.masses.resize(v.masses.size());
  for (std::size_t k = 0; k < v.masses.size(); ++k) {
    out.masses[k] = -std::conj(src.inverse_T_derivatives[k]) * v.masses[k] * src.masses.weights()[k];
  }
  return out;
}

double laurent_norm_squared(const TauVector& v, const RegularData& data) {
  require_grid(v, data);
  double s = mean_norm(v.f1) - mean_norm(minus_projection_of_product(data, v.f1));
  for (std::size_t k = 0; k < v.masses.size(); ++k) s += std::norm(v.masses[k]) * data.masses.weights()[k];
  return s;
}

cplx metric_inner(const TauVector& f, const TauVector& g, const RegularData& data) {
  require_grid(f, data);
  require_grid(g, data);
  const auto r = data.symbol.values();
  cplx s{};
  for (std::size_t j = 0; j < f.f1.size(); ++j) {
    const cplx top = f.f1[j] + std::conj(r[j]) * f.f2[j];
    const cplx bottom = r[j] * f.f1[j] + f.f2[j];
    s += std::conj(g.f1[j]) * top + std::conj(g.f2[j]) * bottom;
  }
  s /= static_cast<double>(f.f1.size());
  for (std::size_t k = 0; k < f.masses.size(); ++k) s += f.masses[k] * std::conj(g.masses[k]) * data.masses.weights()[k];
  return s;
}

double coordinate_distance(const TauVector& a, const TauVector& b) {
  if (a.f1.size() != b.f1.size() || a.masses.size() != b.masses.size()) throw GridMismatch("vectors differ in shape");
  double s = 0.0;
  for (std::size_t j = 0; j < a.f1.size(); ++j) s += std::norm(a.f1[j] - b.f1[j]) + std::norm(a.f2[j] - b.f2[j]);
  s /= static_cast<double>(a.f1.size());
  for (std::size_t k = 0; k < a.masses.size(); ++k) s += std::norm(a.masses[k] - b.masses[k]);
  return std::sqrt(s);
}

double coordinate_norm(const TauVector& a) {
  double s = mean_norm(a.f1) + mean_norm(a.f2);
  for (const auto& m : a.masses) s += std::norm(m);
  return std::sqrt(s);
}

HatMembershipReport check_hat_membership(const TauVector& v, const RegularData& data) {
  require_grid(v, data);
  const std::size_t n = v.f1.size();
  std::vector<cplx> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = data.outer.values()[j] * v.f1[j];
  const auto c = fft::coefficients(g);
  const std::size_t half = n / 2;

  HatMembershipReport report;
  double neg = 0.0;
  for (std::size_t i = half; i < n; ++i) neg += std::norm(c[i]);
  report.antianalytic_residual = std::sqrt(neg);

  const CoeffSeries analytic(0, std::vector<cplx>(c.begin(), c.begin() + static_cast<long>(half)));
  for (std::size_t k = 0; k < data.masses.size(); ++k) {
    const cplx zeta = data.masses.points()[k];
    const cplx expected = analytic.evaluate(zeta) / data.outer.at(zeta);
    report.mass_mismatch = std::max(report.mass_mismatch, std::abs(v.masses[k] - expected));
  }
  return report;
}

// ---------------------------------------------------------------------------

double TheoremReport::max_residual() const {
  return std::max({max_membership_residual, orthogonality_residual, converse_residual, image_l2r_residual});
}

namespace {

double metric_norm(const TauVector& v, const RegularData& data) {
  return std::sqrt(std::max(0.0, metric_inner(v, v, data).real()));
}

// B z^p for p = 0..degree and B / (t - zeta_k), as embedded H^2 vectors.
std::vector<TauVector> blaschke_test_vectors(const RegularData& data, int degree) {
  const auto& grid = data.grid();
  const std::size_t n = grid.size();
  const std::size_t masses = data.masses.size();
  std::vector<TauVector> tests;
  for (int p = 0; p <= degree; ++p) {
    std::vector<cplx> values(n);
    for (std::size_t j = 0; j < n; ++j) values[j] = data.blaschke.values()[j] * std::pow(grid.node(j), p);
    tests.push_back(embedded_samples(data, std::move(values), std::vector<cplx>(masses)));
  }
  for (std::size_t k = 0; k < masses; ++k) {
    const cplx zeta = data.masses.points()[k];
    std::vector<cplx> values(n);
    for (std::size_t j = 0; j < n; ++j) values[j] = data.blaschke.values()[j] / (grid.node(j) - zeta);
    std::vector<cplx> mass_values(masses);
    mass_values[k] = data.blaschke.derivatives()[k];
    tests.push_back(embedded_samples(data, std::move(values), std::move(mass_values)));
  }
  return tests;
}

double max_normalized_inner(const TauVector& f, const std::vector<TauVector>& tests, const RegularData& data) {
  const double nf = metric_norm(f, data);
  double worst = 0.0;
  for (const auto& t : tests) {
    worst = std::max(worst, std::abs(metric_inner(f, t, data)) / (nf * metric_norm(t, data)));
  }
  return worst;
}

}  // namespace

TheoremReport theorem_check(const DualData& dual, int half_band, std::optional<int> hankel) {
  const RegularData& primal = dual.primal;
  const SpaceData space = primal.space();
  const auto gram = build_gram_laurent(space, half_band, hankel, primal.tol);
  const Eigen::MatrixXcd embed = embed_h2(space, half_band, half_band);
  const Eigen::MatrixXcd constraints = embed.adjoint() * gram.entries();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(constraints, Eigen::ComputeFullV);
  const Eigen::Index rank = embed.cols();
  const Eigen::Index dim = constraints.cols() - rank;

  TheoremReport report;
  report.half_band = half_band;
  report.complement_dimension = static_cast<std::size_t>(dim);

  const auto tests = blaschke_test_vectors(primal, half_band);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Eigen::VectorXcd x = svd.matrixV().col(rank + c);
    x /= std::sqrt(x.dot(gram.entries() * x).real());
    const TauVector f = from_laurent(primal, x, half_band);
    const TauVector image = apply_tau(f, dual);
    const auto hat = check_hat_membership(image, dual.dual);
    report.max_membership_residual =
        std::max({report.max_membership_residual, hat.antianalytic_residual, hat.mass_mismatch});
    const auto l2r = check_l2r_membership(dual.dual.symbol, dual.dual.outer, image.f1, image.f2);
    report.image_l2r_residual =
        std::max({report.image_l2r_residual, l2r.hardy_residual, l2r.complement_residual, l2r.reconstruction_residual});
    report.orthogonality_residual = std::max(report.orthogonality_residual, max_normalized_inner(f, tests, primal));
  }

  for (int p = 0; p <= half_band; ++p) {
    const TauVector hat_vector = embedded_vector(dual.dual, CoeffSeries(p, {1.0}), Side::dual);
    const TauVector image = apply_tau(hat_vector, dual);
    report.converse_residual = std::max(report.converse_residual, max_normalized_inner(image, tests, primal));
  }
  return report;
}

IdentityReport duality_identity(const DualData& dual, int degree, std::optional<int> hankel) {
  const RegularData& primal = dual.primal;
  const auto gram_shifted = build_gram_analytic(primal.space().with_shift(-1), degree, hankel, primal.tol);
  const auto gram_dual = build_gram_analytic(dual.dual.space(), degree, hankel, dual.dual.tol);
  const auto k_shifted = kernel_at_origin(gram_shifted);
  const auto k_dual = kernel_at_origin(gram_dual);

  IdentityReport report;
  report.T_at_zero = dual.T_at_zero();
  report.k_shifted = k_shifted.normalized_at_point;
  report.k_dual = k_dual.normalized_at_point;
  report.product = report.T_at_zero * report.k_shifted * report.k_dual;
  report.residual = std::abs(report.product - 1.0);
  report.condition_primal = gram_shifted.condition_estimate();
  report.condition_dual = gram_dual.condition_estimate();
  report.tail_bound = std::max(gram_shifted.tail_bound(), gram_dual.tail_bound());

  // tau(z^{-1} K^{alpha_{-1}}) against K^{alpha^tau}
  const Eigen::VectorXcd c = k_shifted.normalized();
  const CoeffSeries kernel(0, std::vector<cplx>(c.data(), c.data() + c.size()));
  std::vector<cplx> masses(primal.masses.size());
  for (std::size_t k = 0; k < masses.size(); ++k) {
    const cplx zeta = primal.masses.points()[k];
    masses[k] = kernel.evaluate(zeta) / zeta;
  }
  const TauVector shifted_kernel = canonical_vector(primal, kernel.shifted(-1), std::move(masses));
  const TauVector image = apply_tau(shifted_kernel, dual);
  const Eigen::VectorXcd cd = k_dual.normalized();
  const TauVector target =
      embedded_vector(dual.dual, CoeffSeries(0, std::vector<cplx>(cd.data(), cd.data() + cd.size())), Side::dual);
  report.vector_residual = coordinate_distance(image, target) / coordinate_norm(target);
  return report;
}

}  // namespace hardy
