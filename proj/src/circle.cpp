#include "hardy/circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hardy/errors.hpp"
#include "hardy/fft.hpp"

namespace hardy {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

CircleGrid::CircleGrid(std::size_t size) {
  if (size < 8 || !is_power_of_two(size)) {
    std::ostringstream os;
    os << "grid size must be a power of two >= 8, got " << size;
    throw InvalidArgument(os.str());
  }
  std::vector<cplx> nodes(size);
  for (std::size_t j = 0; j < size; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size);
    nodes[j] = {std::cos(angle), std::sin(angle)};
  }
  nodes_ = std::make_shared<const std::vector<cplx>>(std::move(nodes));
}

// ---------------------------------------------------------------------------
// CoeffSeries

CoeffSeries::CoeffSeries(int first, std::vector<cplx> values) : first_(first), values_(std::move(values)) {}

CoeffSeries CoeffSeries::from_transform_order(std::span<const cplx> coeffs) {
  const int n = static_cast<int>(coeffs.size());
  const int half = n / 2;
  std::vector<cplx> values(static_cast<std::size_t>(2 * half - 1));
  for (int p = -(half - 1); p <= half - 1; ++p) {
    values[static_cast<std::size_t>(p + half - 1)] = coeffs[static_cast<std::size_t>((p + n) % n)];
  }
  return CoeffSeries(-(half - 1), std::move(values));
}

CoeffSeries CoeffSeries::shifted(int n) const { return CoeffSeries(first_ + n, values_); }

CoeffSeries CoeffSeries::scaled(cplx factor) const {
  std::vector<cplx> values(values_);
  for (auto& v : values) v *= factor;
  return CoeffSeries(first_, std::move(values));
}

std::vector<cplx> CoeffSeries::to_transform_order(std::size_t n) const {
  const int size = static_cast<int>(n);
  const int half = size / 2;
  std::vector<cplx> out(n);
  for (int i = 0; i < static_cast<int>(values_.size()); ++i) {
    const int p = first_ + i;
    if (values_[static_cast<std::size_t>(i)] == cplx{}) continue;
    if (p <= -half || p >= half) {
      std::ostringstream os;
      os << "coefficient index " << p << " does not fit a grid of size " << n;
      throw InvalidArgument(os.str());
    }
    out[static_cast<std::size_t>((p + size) % size)] = values_[static_cast<std::size_t>(i)];
  }
  return out;
}

cplx CoeffSeries::evaluate(cplx z) const {
  if (values_.empty()) return {};
  // Horner in z over the stored block, then the overall power z^first.
  cplx acc{};
  for (auto it = values_.rbegin(); it != values_.rend(); ++it) acc = acc * z + *it;
  if (first_ == 0) return acc;
  if (first_ < 0 && z == cplx{}) throw InvalidArgument("evaluate: negative powers at z = 0");
  return acc * std::pow(z, first_);
}

double CoeffSeries::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CoeffSeries::l2_norm(int from, int to) const {
  double s = 0.0;
  for (int p = std::max(from, first()); p <= std::min(to, last()); ++p) s += std::norm((*this)[p]);
  return std::sqrt(s);
}

CoeffSeries riesz_project(const CoeffSeries& series, Part part) {
  if (series.empty()) return series;
  const int lo = part == Part::analytic ? std::max(series.first(), 0) : series.first();
  const int hi = part == Part::analytic ? series.last() : std::min(series.last(), -1);
  if (lo > hi) return CoeffSeries{};
  std::vector<cplx> values;
  values.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int p = lo; p <= hi; ++p) values.push_back(series[p]);
  return CoeffSeries(lo, std::move(values));
}

std::vector<cplx> riesz_project(std::span<const cplx> samples, Part part) {
  auto c = fft::coefficients(samples);
  const std::size_t n = c.size();
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const bool negative = i >= half;  // indices half..n-1 are -N/2..-1
    if ((part == Part::analytic) == negative) c[i] = {};
  }
  return fft::samples(c);
}

// ---------------------------------------------------------------------------
// SymbolData

SymbolData::SymbolData(CircleGrid grid, std::vector<cplx> values, CoeffSeries coeffs)
    : grid_(std::move(grid)), values_(std::move(values)), coeffs_(std::move(coeffs)) {
  for (const auto& v : values_) sup_modulus_ = std::max(sup_modulus_, std::abs(v));
}

SymbolData SymbolData::from_samples(const CircleGrid& grid, std::vector<cplx> values) {
  if (values.size() != grid.size()) throw GridMismatch("symbol samples do not match the grid size");
  auto c = fft::coefficients(values);
  return SymbolData(grid, std::move(values), CoeffSeries::from_transform_order(c));
}

SymbolData SymbolData::from_coefficients(const CircleGrid& grid, const CoeffSeries& coeffs) {
  auto values = fft::samples(coeffs.to_transform_order(grid.size()));
  return SymbolData(grid, std::move(values), coeffs);
}

SymbolData SymbolData::from_function(const CircleGrid& grid, const std::function<cplx(cplx)>& fn) {
  std::vector<cplx> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) values[j] = fn(grid.node(j));
  return from_samples(grid, std::move(values));
}

SymbolData SymbolData::zero(const CircleGrid& grid) {
  return SymbolData(grid, std::vector<cplx>(grid.size()), CoeffSeries{});
}

double SymbolData::fft_residual() const {
  const int half = static_cast<int>(grid_.size()) / 2;
  // Coefficients beyond the grid band cannot be represented; count them as residual.
  double outside = 0.0;
  std::vector<cplx> inside(static_cast<std::size_t>(std::max(0, coeffs_.last() - coeffs_.first() + 1)));
  for (int p = coeffs_.first(); p <= coeffs_.last(); ++p) {
    if (p <= -half || p >= half) {
      outside += std::abs(coeffs_[p]);
    } else {
      inside[static_cast<std::size_t>(p - coeffs_.first())] = coeffs_[p];
    }
  }
  auto back = fft::samples(CoeffSeries(coeffs_.first(), std::move(inside)).to_transform_order(grid_.size()));
  double r = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) r = std::max(r, std::abs(back[j] - values_[j]));
  return r + outside;
}

SymbolData SymbolData::scaled(double rho) const {
  std::vector<cplx> values(values_);
  for (auto& v : values) v *= rho;
  return SymbolData(grid_, std::move(values), coeffs_.scaled(rho));
}

SymbolData SymbolData::shifted(int n) const {
  std::vector<cplx> values(values_);
  for (std::size_t j = 0; j < values.size(); ++j) {
    // t_j^n = t_{(j n) mod N} keeps the node table exact.
    const long long size = static_cast<long long>(grid_.size());
    const long long idx = ((static_cast<long long>(j) * n) % size + size) % size;
    values[j] *= grid_.node(static_cast<std::size_t>(idx));
  }
  return SymbolData(grid_, std::move(values), coeffs_.shifted(n));
}

// ---------------------------------------------------------------------------
// Szego validation and the outer function

SzegoReport validate_szego(const SymbolData& symbol, const Tolerances& tol) {
  SzegoReport report;
  report.sup_modulus = symbol.sup_modulus();
  report.is_contractive = symbol.sup_modulus() <= 1.0 + tol.unit;
  if (!report.is_contractive) {
    std::ostringstream os;
    os << "symbol is not contractive: sup|R| = " << symbol.sup_modulus();
    throw NotContraction(os.str());
  }
  const auto values = symbol.values();
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double gap = 1.0 - std::abs(values[j]);
    if (gap < tol.touch) {
      report.touching_nodes.push_back(j);
    } else {
      sum += std::log(gap);
    }
  }
  report.log_integral = report.touching_nodes.empty() ? sum / static_cast<double>(values.size())
                                                      : -std::numeric_limits<double>::infinity();
  return report;
}

cplx OuterData::at(cplx z) const { return std::exp(log_coeffs_.evaluate(z)); }

double OuterData::modulus_residual(const SymbolData& symbol) const {
  if (!(symbol.grid() == grid_)) throw GridMismatch("outer function and symbol live on different grids");
  double r = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    r = std::max(r, std::abs(std::norm(values_[j]) + std::norm(symbol.values()[j]) - 1.0));
  }
  return r;
}

double OuterData::negative_coeff_max() const {
  double m = 0.0;
  for (int p = coeffs_.first(); p < 0; ++p) m = std::max(m, std::abs(coeffs_[p]));
  return m;
}

OuterData build_outer(const SymbolData& symbol, const Tolerances& tol) {
  const auto values = symbol.values();
  const std::size_t n = values.size();
  std::vector<cplx> half_log(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double gap = 1.0 - std::norm(values[j]);
    if (gap < tol.touch) {
      std::ostringstream os;
      os << "1 - |R|^2 = " << gap << " at node " << j << "; pass a regularized symbol (rho < 1)";
      throw SzegoViolation(os.str());
    }
    half_log[j] = 0.5 * std::log(gap);
  }

  // Analytic completion: F_0 = c_0, F_p = 2 c_p for 0 < p < N/2, Nyquist kept
  // once, so Re F = log|T_e| exactly at the nodes.
  auto c = fft::coefficients(half_log);
  const std::size_t half = n / 2;
  std::vector<cplx> completion(n);
  completion[0] = c[0].real();
  for (std::size_t p = 1; p < half; ++p) completion[p] = 2.0 * c[p];
  completion[half] = c[half].real();

  OuterData outer(symbol.grid());
  outer.log_coeffs_ = CoeffSeries(0, std::vector<cplx>(completion.begin(), completion.begin() + static_cast<long>(half) + 1));
  auto log_values = fft::samples(completion);
  outer.values_.resize(n);
  for (std::size_t j = 0; j < n; ++j) outer.values_[j] = std::exp(log_values[j]);
  outer.value_at_zero_ = std::exp(c[0].real());
  outer.coeffs_ = CoeffSeries::from_transform_order(fft::coefficients(outer.values_));
  return outer;
}

// ---------------------------------------------------------------------------
// Masses and Blaschke products

MassSet::MassSet(std::vector<cplx> points, std::vector<double> weights, const Tolerances& tol)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() != weights_.size()) throw InvalidArgument("mass points and weights differ in length");
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!(weights_[k] > 0.0) || !std::isfinite(weights_[k])) {
      throw InvalidArgument("mass weights must be finite and strictly positive");
    }
    const double r = std::abs(points_[k]);
    if (!(r < 1.0)) throw InvalidArgument("mass points must lie in the open unit disk");
    if (points_[k] == cplx{}) has_origin_ = true;
    blaschke_sum_ += 1.0 - r;
    for (std::size_t j = 0; j < k; ++j) {
      if (std::abs(points_[j] - points_[k]) <= tol.duplicate) {
        std::ostringstream os;
        os << "mass points " << j << " and " << k << " coincide";
        throw DuplicatePoint(os.str());
      }
    }
  }
}

MassSet MassSet::truncated(std::size_t n) const {
  if (n > size()) throw InvalidArgument("mass cutoff exceeds the number of masses");
  return MassSet(std::vector<cplx>(points_.begin(), points_.begin() + static_cast<long>(n)),
                 std::vector<double>(weights_.begin(), weights_.begin() + static_cast<long>(n)));
}

cplx blaschke_factor(cplx zeta, cplx z) {
  if (zeta == cplx{}) return z;
  const double r = std::abs(zeta);
  return (zeta - z) / (1.0 - std::conj(zeta) * z) * (r / zeta);
}

namespace {

// Derivative of blaschke_factor(zeta, .) at its own zero.
cplx factor_derivative_at_zero(cplx zeta) {
  if (zeta == cplx{}) return 1.0;
  const double r = std::abs(zeta);
  return -1.0 / (1.0 - r * r) * (r / zeta);
}

}  // namespace

cplx BlaschkeData::at(cplx z) const {
  cplx b = 1.0;
  for (const auto& zeta : points_) b *= blaschke_factor(zeta, z);
  return b;
}

double BlaschkeData::unimodular_residual() const {
  double r = 0.0;
  for (const auto& v : values_) r = std::max(r, std::abs(std::abs(v) - 1.0));
  return r;
}

double BlaschkeData::zero_residual() const {
  double r = 0.0;
  for (const auto& zeta : points_) r = std::max(r, std::abs(at(zeta)));
  return r;
}

BlaschkeData build_blaschke(const MassSet& masses, const OuterData& outer, const Tolerances& tol) {
  BlaschkeData data;
  data.points_.assign(masses.points().begin(), masses.points().end());
  const auto& pts = data.points_;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (std::abs(pts[j] - pts[k]) <= tol.duplicate) throw DuplicatePoint("Blaschke product has a repeated zero");
    }
  }

  const auto& grid = outer.grid();
  data.values_.resize(grid.size());
  data.T_values_.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    data.values_[j] = data.at(grid.node(j));
    data.T_values_[j] = outer.values()[j] / data.values_[j];
  }

  data.derivatives_.resize(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    cplx d = factor_derivative_at_zero(pts[k]);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != k) d *= blaschke_factor(pts[j], pts[k]);
    }
    data.derivatives_[k] = d;
  }

  data.value_at_zero_ = 1.0;
  for (const auto& zeta : pts) data.value_at_zero_ *= std::abs(zeta);
  data.T_at_zero_ = data.value_at_zero_ > 0.0 ? outer.value_at_zero() / data.value_at_zero_
                                              : std::numeric_limits<double>::infinity();
  return data;
}

}  // namespace hardy
