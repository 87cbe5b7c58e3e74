#pragma once

// Reproducing kernels of the truncated spaces H^2(alpha), the values
// K^alpha(0) = ||k^alpha||, the orthonormal system e_n = z^n K^{alpha_n}, and
// sweeps over the shift n.

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

#include "hardy/spaces.hpp"

namespace hardy {

struct KernelVector {
  cplx point{};
  // Coefficients of k in the analytic basis z^0..z^M.
  Eigen::VectorXcd coefficients;
  double norm = 0.0;
  // k(point); real and equal to norm^2.
  double value_at_point = 0.0;
  // K(point) = k(point) / ||k|| = ||k||.
  double normalized_at_point = 0.0;
  // max_p |(G k)_p - conj(point)^p|
  double reproducing_residual = 0.0;

  // Coefficients of K = k / ||k||.
  Eigen::VectorXcd normalized() const { return coefficients / norm; }
};

// Solves G k = e_0.  K^alpha(0) = sqrt((G^{-1})_{00}).
KernelVector kernel_at_origin(const GramMatrix& gram);
// Solves G k = (conj(zeta0)^m)_m.  Throws RejectBoundary if |zeta0| >= 1.
KernelVector kernel_at_point(const GramMatrix& gram, cplx zeta0);

// K^{alpha_n}(0) for the space with its shift replaced by n.
double kernel_value_at_origin(const SpaceData& space, int degree, std::optional<int> hankel = {},
                              const Tolerances& tol = {});

struct OrthonormalSystem {
  std::vector<int> indices;
  // e_n as coefficient vectors in the Gram basis used for `gram`.
  std::vector<Eigen::VectorXcd> vectors;
  // Gram of the system, <e_b, e_a> at (a, b).
  Eigen::MatrixXcd system_gram;
  BasisKind basis = BasisKind::analytic;

  double max_deviation() const;
};

// For n >= 0 only the analytic basis of degree M is used and K^{alpha_n} is
// computed at degree M - n, so that z^n K^{alpha_n} stays inside the basis.
// Negative indices switch to the Laurent basis with half band M (mass
// coordinates carry zeta_k^n K^{alpha_n}(zeta_k)).
OrthonormalSystem orthonormal_system(const SpaceData& space, int n_first, int n_last, int degree,
                                     std::optional<int> hankel = {}, const Tolerances& tol = {});

struct AsymptoticTrace {
  std::vector<std::pair<int, double>> values;
  int degree = 0;
  int hankel = 0;
  std::size_t grid_size = 0;
  double tail_bound = 0.0;
  double convergence_tolerance = 0.0;
  // First n from which |K - 1| < tolerance for three consecutive shifts.
  std::optional<int> converged_at;

  bool converged() const { return converged_at.has_value(); }
  double deviation(std::size_t i) const { return std::abs(values[i].second - 1.0); }
  // |K^{alpha_n}(0) - 1| nonincreasing for n >= from, up to `slack`.
  bool tail_monotone(int from, double slack = 0.0) const;
};

AsymptoticTrace asymptotic_sweep(const SpaceData& space, int n_max, int degree, std::optional<int> hankel = {},
                                 double convergence_tolerance = 1e-3, const Tolerances& tol = {});

// Minimum of the D(alpha) form over polynomials with f(0) = 1, computed from
// the equality-constrained KKT system.  Equals 1 / K^alpha(0)^2.
double extremal_value(const GramMatrix& gram);

struct SandwichReport {
  int shift = 0;
  std::size_t cutoff = 0;
  double rho = 1.0;

  double k_truncated = 0.0;    // K^{alpha^N_n}(0)
  double k_full = 0.0;         // K^{alpha_n}(0)
  double k_regularized = 0.0;  // K^{alpha^rho_n}(0)
  double k_both = 0.0;         // K^{alpha^{N,rho}_n}(0)

  // Dual-side kernel values K^{(beta_{n+1})^tau}(0) for beta = alpha^N, alpha^rho, alpha^{N,rho}.
  double dual_truncated = 0.0;
  double dual_regularized = 0.0;
  double dual_both = 0.0;

  // T_e^rho(0)/T_e(0) K^{alpha^{N,rho}_n}(0) and B(0)/B^N(0) K^{alpha^{N,rho}_n}(0).
  double upper_bound = 0.0;
  double lower_bound = 0.0;

  // min eigenvalue of Gram(alpha_n) - Gram(alpha^N_n) and Gram(alpha^rho_n) - Gram(alpha_n).
  double psd_margin_truncated = 0.0;
  double psd_margin_regularized = 0.0;

  // Duality identity residuals behind the equalities in both chains.
  double identity_residual_truncated = 0.0;
  double identity_residual_regularized = 0.0;
  double identity_residual_both = 0.0;

  // Smallest of the ordering margins; >= -tol.order when everything holds.
  double scalar_margin() const;
  double dual_margin() const;
  double bound_margin() const;
  double max_identity_residual() const;
};

// Throws OrderViolation if a scalar ordering fails by more than tol.order.
SandwichReport sandwich_check(const SpaceData& space, std::size_t cutoff, double rho, int n, int degree,
                              std::optional<int> hankel = {}, const Tolerances& tol = {});

}  // namespace hardy
