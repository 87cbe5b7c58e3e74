#pragma once

// The metric <(I - Gamma* Gamma) f, f> + sum |f(zeta_k)|^2 nu_k as a Gram
// matrix on truncated monomial bases, for the Hardy space (analytic basis
// z^0..z^M) and for L^2(alpha) (Laurent basis z^-M..z^M plus one coordinate
// per mass).  Inner products are linear in the first slot:
// <f, g> = b^H G a for coefficient vectors a of f and b of g.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hardy/circle.hpp"
#include "hardy/tolerances.hpp"

namespace hardy {

// The data alpha = {R, nu} together with the shift alpha_n and the
// regularizations alpha^N (mass cutoff) and alpha^rho (symbol scaling).
struct SpaceData {
  SymbolData symbol;
  MassSet masses;
  int shift = 0;
  double rho = 1.0;
  std::optional<std::size_t> mass_cutoff;

  SpaceData with_shift(int n) const;
  SpaceData with_rho(double r) const;
  SpaceData with_cutoff(std::size_t n) const;
};

struct EffectiveData {
  // r^{(n)}_p = rho * r_{p-n}
  CoeffSeries symbol;
  std::vector<cplx> points;
  // |zeta_k|^{2n} nu_k; masses whose weight vanishes (zeta = 0, n > 0) are dropped.
  std::vector<double> weights;
};

EffectiveData effective_data(const SpaceData& space);

// The effective data as a stand-alone symbol and mass set on the same grid,
// for constructions (outer function, dual data) that need grid samples.
struct MaterializedData {
  SymbolData symbol;
  MassSet masses;
};
MaterializedData materialize(const SpaceData& space);

enum class BasisKind { analytic, laurent };

class GramMatrix {
 public:
  // Symmetrizes, factorizes and estimates the smallest eigenvalue; throws
  // NotPositiveDefinite when it falls below tol.psd.
  GramMatrix(BasisKind kind, int band, std::size_t mass_count, Eigen::MatrixXcd entries, double tail_bound,
             const Tolerances& tol = {});

  BasisKind kind() const { return kind_; }
  // Degree M for the analytic basis, half-band M for the Laurent basis.
  int band() const { return band_; }
  std::size_t mass_count() const { return mass_count_; }
  Eigen::Index order() const { return entries_.rows(); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  double min_eig_estimate() const { return min_eig_; }
  double max_eig_estimate() const { return max_eig_; }
  double condition_estimate() const { return max_eig_ / min_eig_; }
  // Hankel truncation tail bound sum_{j>J} max_l |r_{-j-l}|^2.
  double tail_bound() const { return tail_bound_; }

  // Row of the monomial z^p.
  Eigen::Index power_index(int p) const;
  // Row of mass coordinate k (Laurent basis only).
  Eigen::Index mass_index(std::size_t k) const;

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

 private:
  BasisKind kind_;
  int band_;
  std::size_t mass_count_;
  Eigen::MatrixXcd entries_;
  Eigen::LLT<Eigen::MatrixXcd> factor_;
  double min_eig_ = 0.0;
  double max_eig_ = 0.0;
  double tail_bound_ = 0.0;
};

// Gamma* Gamma restricted to span{z^l : l in powers}:
// (Gamma* Gamma)_{ml} = sum_{j=1..J} conj(r_{-j-m}) r_{-j-l}.
struct HankelBlock {
  int truncation = 0;
  Eigen::MatrixXcd gamma_gram;
  double tail_bound = 0.0;

  double largest_eigenvalue() const;
};

HankelBlock hankel_block(const CoeffSeries& symbol, std::span<const int> powers, int truncation);

// J = grid/2 - M for the analytic basis (at least 1).
int default_hankel_analytic(std::size_t grid_size, int degree);
// J = grid/2 + M for the Laurent basis, so that every stored coefficient of R
// reaches z^-M.
int default_hankel_laurent(std::size_t grid_size, int half_band);

GramMatrix build_gram_analytic(const SpaceData& space, int degree, std::optional<int> hankel = {},
                               const Tolerances& tol = {});
GramMatrix build_gram_laurent(const SpaceData& space, int half_band, std::optional<int> hankel = {},
                              const Tolerances& tol = {});

// Columns: z^p for p = 0..degree as Laurent coefficients plus the mass
// coordinates zeta_k^p.
Eigen::MatrixXcd embed_h2(const SpaceData& space, int degree, int half_band);

struct L2RMembership {
  // || P_-(R f1 + f2) ||
  double hardy_residual = 0.0;
  // || P_+(conj(T_e) f2) ||
  double complement_residual = 0.0;
  // || f2 + P_-(R f1) ||
  double reconstruction_residual = 0.0;

  bool holds(double tol) const {
    return hardy_residual < tol && complement_residual < tol && reconstruction_residual < tol;
  }
};

L2RMembership check_l2r_membership(const SymbolData& symbol, const OuterData& outer, std::span<const cplx> f1,
                                   std::span<const cplx> f2);

}  // namespace hardy
