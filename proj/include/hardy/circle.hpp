#pragma once

// Function theory on the unit circle: equispaced grids, Fourier series,
// Riesz projections, the outer function with prescribed modulus and finite
// Blaschke products.
//
// Conventions: the grid nodes are t_j = exp(2 pi i j / N) and the Fourier
// coefficients are c_p = (1/N) sum_j f(t_j) t_j^{-p}.  A function is
// "analytic" when only indices p >= 0 are present.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hardy/tolerances.hpp"

namespace hardy {

using cplx = std::complex<double>;

class CircleGrid {
 public:
  // size must be a power of two, at least 8.
  explicit CircleGrid(std::size_t size);

  std::size_t size() const { return nodes_->size(); }
  std::span<const cplx> nodes() const { return *nodes_; }
  cplx node(std::size_t j) const { return (*nodes_)[j]; }
  // Index of conj(t_j).
  std::size_t mirror(std::size_t j) const { return (size() - j) % size(); }

  bool operator==(const CircleGrid& other) const { return size() == other.size(); }

 private:
  std::shared_ptr<const std::vector<cplx>> nodes_;
};

// Finite Laurent series sum_{p=first}^{last} c_p z^p.  Indices outside the
// stored range read as zero.
class CoeffSeries {
 public:
  CoeffSeries() = default;
  CoeffSeries(int first, std::vector<cplx> values);

  // Coefficients in FFT order, indices -(N/2-1)..N/2-1 (the Nyquist term is
  // dropped).
  static CoeffSeries from_transform_order(std::span<const cplx> coeffs);

  int first() const { return first_; }
  int last() const { return first_ + static_cast<int>(values_.size()) - 1; }
  bool empty() const { return values_.empty(); }
  std::span<const cplx> values() const { return values_; }

  cplx operator[](int p) const {
    const int i = p - first_;
    return (i < 0 || i >= static_cast<int>(values_.size())) ? cplx{} : values_[static_cast<std::size_t>(i)];
  }

  // c'_p = c_{p-n}, i.e. multiplication by z^n.
  CoeffSeries shifted(int n) const;
  CoeffSeries scaled(cplx factor) const;

  // Lays the series out in FFT order of length n; throws if it does not fit
  // in -(n/2-1)..n/2-1.
  std::vector<cplx> to_transform_order(std::size_t n) const;

  // sum_p c_p z^p; z must be nonzero when negative indices are present.
  cplx evaluate(cplx z) const;

  double max_abs() const;
  // sqrt(sum |c_p|^2) over the given index range (inclusive).
  double l2_norm(int from, int to) const;

 private:
  int first_ = 0;
  std::vector<cplx> values_;
};

enum class Part { analytic, antianalytic };

// P_+ keeps p >= 0, P_- keeps p <= -1.
CoeffSeries riesz_project(const CoeffSeries& series, Part part);
// Same projection computed on grid samples through the FFT.  The Nyquist
// frequency -N/2 counts as antianalytic.
std::vector<cplx> riesz_project(std::span<const cplx> samples, Part part);

class SymbolData {
 public:
  static SymbolData from_samples(const CircleGrid& grid, std::vector<cplx> values);
  static SymbolData from_coefficients(const CircleGrid& grid, const CoeffSeries& coeffs);
  static SymbolData from_function(const CircleGrid& grid, const std::function<cplx(cplx)>& fn);
  static SymbolData zero(const CircleGrid& grid);

  const CircleGrid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  const CoeffSeries& coeffs() const { return coeffs_; }
  cplx coefficient(int p) const { return coeffs_[p]; }
  double sup_modulus() const { return sup_modulus_; }
  // max_j |values_j - (inverse transform of coeffs)_j|
  double fft_residual() const;

  // rho * R
  SymbolData scaled(double rho) const;
  // t^n * R(t); coefficients shift exactly.
  SymbolData shifted(int n) const;

 private:
  SymbolData(CircleGrid grid, std::vector<cplx> values, CoeffSeries coeffs);

  CircleGrid grid_;
  std::vector<cplx> values_;
  CoeffSeries coeffs_;
  double sup_modulus_ = 0.0;
};

struct SzegoReport {
  bool is_contractive = true;
  double sup_modulus = 0.0;
  // Grid mean of log(1 - |R|); -inf when a node touches the unit circle.
  double log_integral = 0.0;
  std::vector<std::size_t> touching_nodes;
};

// Throws NotContraction when sup|R| > 1 + tol.unit.
SzegoReport validate_szego(const SymbolData& symbol, const Tolerances& tol = {});

class OuterData {
 public:
  const CircleGrid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  double value_at_zero() const { return value_at_zero_; }
  // Fourier coefficients of the sampled T_e.
  const CoeffSeries& coeffs() const { return coeffs_; }
  // Analytic completion F of log|T_e| (T_e = exp F); indices >= 0.
  const CoeffSeries& log_coeffs() const { return log_coeffs_; }

  // T_e(z) = exp(F(z)) for |z| < 1.
  cplx at(cplx z) const;

  // max_j | |T_e(t_j)|^2 + |R(t_j)|^2 - 1 |
  double modulus_residual(const SymbolData& symbol) const;
  double negative_coeff_max() const;

 private:
  friend OuterData build_outer(const SymbolData&, const Tolerances&);
  explicit OuterData(CircleGrid grid) : grid_(std::move(grid)) {}

  CircleGrid grid_;
  std::vector<cplx> values_;
  double value_at_zero_ = 1.0;
  CoeffSeries coeffs_;
  CoeffSeries log_coeffs_;
};

// Outer function with |T_e|^2 = 1 - |R|^2 and T_e(0) > 0.  Throws
// SzegoViolation if 1 - |R(t_j)|^2 < tol.touch at some node.
OuterData build_outer(const SymbolData& symbol, const Tolerances& tol = {});

// Point masses nu_k at zeta_k in the open unit disk.
class MassSet {
 public:
  MassSet() = default;
  // Throws InvalidArgument on non-positive weights or |zeta| >= 1 and
  // DuplicatePoint when two points coincide.
  MassSet(std::vector<cplx> points, std::vector<double> weights, const Tolerances& tol = {});

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const cplx> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  double blaschke_sum() const { return blaschke_sum_; }
  // zeta_k = 0 is allowed but makes B(0) = 0, so shifts n < 0 and the dual
  // construction are unavailable.
  bool has_origin() const { return has_origin_; }

  // First n masses (the truncation nu^N).
  MassSet truncated(std::size_t n) const;

 private:
  std::vector<cplx> points_;
  std::vector<double> weights_;
  double blaschke_sum_ = 0.0;
  bool has_origin_ = false;
};

// b(z) = (zeta - z) / (1 - conj(zeta) z) * |zeta| / zeta, or z when zeta = 0.
cplx blaschke_factor(cplx zeta, cplx z);

class BlaschkeData {
 public:
  std::span<const cplx> points() const { return points_; }
  cplx at(cplx z) const;
  // B(t_j)
  std::span<const cplx> values() const { return values_; }
  // B'(zeta_k) by the product rule.
  std::span<const cplx> derivatives() const { return derivatives_; }
  double value_at_zero() const { return value_at_zero_; }
  // T = T_e / B on the grid.
  std::span<const cplx> T_values() const { return T_values_; }
  double T_at_zero() const { return T_at_zero_; }

  double unimodular_residual() const;
  double zero_residual() const;

 private:
  friend BlaschkeData build_blaschke(const MassSet&, const OuterData&, const Tolerances&);

  std::vector<cplx> points_;
  std::vector<cplx> values_;
  std::vector<cplx> derivatives_;
  std::vector<cplx> T_values_;
  double value_at_zero_ = 1.0;
  double T_at_zero_ = 1.0;
};

// Throws DuplicatePoint if two zeros coincide.
BlaschkeData build_blaschke(const MassSet& masses, const OuterData& outer, const Tolerances& tol = {});

}  // namespace hardy
