#pragma once

// Dual data alpha^tau, the involution tau : L^2(alpha) -> L^2(alpha^tau) on
// grid-discretized vectors, hat-space membership, the complement-mapping
// check and the identity T(0) K^{alpha_{-1}}(0) K^{alpha^tau}(0) = 1.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "hardy/circle.hpp"
#include "hardy/spaces.hpp"

namespace hardy {

// Symbol, masses and everything derived from them on one grid.  Requires
// sup|R| < 1 with room for the logarithm and no mass at the origin.
struct RegularData {
  SymbolData symbol;
  MassSet masses;
  OuterData outer;
  BlaschkeData blaschke;
  // (1/T)'(zeta_k) = B'(zeta_k) / T_e(zeta_k)
  std::vector<cplx> inverse_T_derivatives;
  Tolerances tol;

  const CircleGrid& grid() const { return symbol.grid(); }
  SpaceData space() const { return SpaceData{symbol, masses}; }
};

RegularData make_regular(const SymbolData& symbol, const MassSet& masses, const Tolerances& tol = {});
RegularData make_regular(const SpaceData& space, const Tolerances& tol = {});

// How the dual weights are tied to the primal ones.
//   unitary: nu^tau_k nu_k |(1/T)'(zeta_k)|^2 = 1 (makes tau isometric)
//   printed: nu^tau_k nu_k = |(1/T)'(zeta_k)|^2
enum class MassConvention { unitary, printed };

const char* to_string(MassConvention c);
MassConvention mass_convention_from_string(const std::string& s);

struct DualData {
  RegularData primal;
  RegularData dual;
  MassConvention convention = MassConvention::unitary;
  std::string provenance;

  // T(0) = T_e(0) / B(0) of the primal data.
  double T_at_zero() const { return primal.blaschke.T_at_zero(); }
  const SymbolData& dual_symbol() const { return dual.symbol; }
  const MassSet& dual_masses() const { return dual.masses; }
  const OuterData& outer_dual() const { return dual.outer; }

  // max_j | |R^tau(conj t_j)| - |R(t_j)| |
  double modulus_residual() const;
  // max_j | T_e^tau(t_j) - conj(T_e(conj t_j)) |
  double outer_residual() const;
};

// Throws DegenerateDerivative when |B'(zeta_k)| < tol.derivative.
DualData build_dual(const RegularData& data, MassConvention convention = MassConvention::unitary);

enum class Side { primal, dual };

// A vector of L^2(alpha): circle components (f1, f2) on the grid and the
// values f(zeta_k).  `side` says which space of a DualData it belongs to.
struct TauVector {
  std::vector<cplx> f1;
  std::vector<cplx> f2;
  std::vector<cplx> masses;
  Side side = Side::primal;
};

// (f, -P_-(R f)) for f given by Laurent coefficients, with explicit mass values.
TauVector canonical_vector(const RegularData& data, const CoeffSeries& f, std::vector<cplx> mass_values,
                           Side side = Side::primal);
// Embedded H^2 function: mass values are f(zeta_k); f must be analytic.
TauVector embedded_vector(const RegularData& data, const CoeffSeries& f, Side side = Side::primal);
// Same, from grid samples of an analytic function and its values at the masses.
TauVector embedded_samples(const RegularData& data, std::vector<cplx> values, std::vector<cplx> mass_values,
                           Side side = Side::primal);
// From a coordinate vector in the Laurent basis of half band M (plus masses).
TauVector from_laurent(const RegularData& data, const Eigen::VectorXcd& x, int half_band, Side side = Side::primal);

const RegularData& side_data(const DualData& dual, Side side);

// Maps a vector of one side of `dual` to the other side.  Throws GridMismatch
// when the vector does not live on the dual pair's grid.
TauVector apply_tau(const TauVector& v, const DualData& dual);

// ||f1||^2 - ||P_-(R f1)||^2 + sum |f_k|^2 nu_k: the Laurent-Gram form, valid
// for vectors of L^2_R (those with f2 = -P_-(R f1)).
double laurent_norm_squared(const TauVector& v, const RegularData& data);
// Pointwise form mean_j F^H [[1, conj R], [R, 1]] G + sum f_k conj(g_k) nu_k.
cplx metric_inner(const TauVector& f, const TauVector& g, const RegularData& data);
// Plain L^2 distance of the circle components plus the mass values, relative
// helper for the involution check.
double coordinate_distance(const TauVector& a, const TauVector& b);
double coordinate_norm(const TauVector& a);

struct HatMembershipReport {
  // || P_-(T_e f1) ||
  double antianalytic_residual = 0.0;
  // max_k |f(zeta_k) - g(zeta_k) / T_e(zeta_k)|
  double mass_mismatch = 0.0;

  bool holds(double tol) const { return antianalytic_residual < tol && mass_mismatch < tol; }
};

HatMembershipReport check_hat_membership(const TauVector& v, const RegularData& data);

struct TheoremReport {
  int half_band = 0;
  std::size_t complement_dimension = 0;
  // max over complement basis vectors of the hat-membership residuals of their tau-images.
  double max_membership_residual = 0.0;
  // max |<f, B z^p>| / (||f|| ||B z^p||) over complement vectors f.
  double orthogonality_residual = 0.0;
  // Converse: tau-images of hat-space vectors of the dual against B h and B/(t - zeta_k).
  double converse_residual = 0.0;
  // max over complement images of the L2_R residual of the image.
  double image_l2r_residual = 0.0;

  double max_residual() const;
};

TheoremReport theorem_check(const DualData& dual, int half_band, std::optional<int> hankel = {});

struct IdentityReport {
  double T_at_zero = 0.0;
  double k_shifted = 0.0;  // K^{alpha_{-1}}(0)
  double k_dual = 0.0;     // K^{alpha^tau}(0)
  double product = 0.0;
  double residual = 0.0;   // |product - 1|
  // || tau(z^{-1} K^{alpha_{-1}}) - K^{alpha^tau} || relative to ||K^{alpha^tau}||.
  double vector_residual = 0.0;
  double condition_primal = 0.0;
  double condition_dual = 0.0;
  double tail_bound = 0.0;
};

IdentityReport duality_identity(const DualData& dual, int degree, std::optional<int> hankel = {});

}  // namespace hardy
