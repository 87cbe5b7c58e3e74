#include "hardy/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hardy/errors.hpp"
#include "hardy/fft.hpp"

namespace hardy {

SpaceData SpaceData::with_shift(int n) const {
  SpaceData s = *this;
  s.shift = n;
  return s;
}

SpaceData SpaceData::with_rho(double r) const {
  if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument("rho must lie in (0, 1]");
  SpaceData s = *this;
  s.rho = r;
  return s;
}

SpaceData SpaceData::with_cutoff(std::size_t n) const {
  if (n > masses.size()) throw InvalidArgument("mass cutoff exceeds the number of masses");
  SpaceData s = *this;
  s.mass_cutoff = n;
  return s;
}

EffectiveData effective_data(const SpaceData& space) {
  if (!(space.rho > 0.0 && space.rho <= 1.0)) throw InvalidArgument("rho must lie in (0, 1]");
  EffectiveData eff;
  eff.symbol = space.symbol.coeffs().shifted(space.shift).scaled(space.rho);
  const std::size_t count = space.mass_cutoff.value_or(space.masses.size());
  if (count > space.masses.size()) throw InvalidArgument("mass cutoff exceeds the number of masses");
  for (std::size_t k = 0; k < count; ++k) {
    const cplx zeta = space.masses.points()[k];
    const double r = std::abs(zeta);
    if (r == 0.0) {
      if (space.shift < 0) throw InvalidArgument("negative shift with a mass at the origin");
      if (space.shift > 0) continue;
    }
    eff.points.push_back(zeta);
    eff.weights.push_back(std::pow(r, 2 * space.shift) * space.masses.weights()[k]);
  }
  return eff;
}

MaterializedData materialize(const SpaceData& space) {
  auto eff = effective_data(space);
  SymbolData symbol = space.symbol.shifted(space.shift).scaled(space.rho);
  return {std::move(symbol), MassSet(std::move(eff.points), std::move(eff.weights))};
}

// ---------------------------------------------------------------------------

GramMatrix::GramMatrix(BasisKind kind, int band, std::size_t mass_count, Eigen::MatrixXcd entries,
                       double tail_bound, const Tolerances& tol)
    : kind_(kind), band_(band), mass_count_(mass_count), tail_bound_(tail_bound) {
  entries_ = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(entries_, Eigen::EigenvaluesOnly);
  min_eig_ = eig.eigenvalues().minCoeff();
  max_eig_ = eig.eigenvalues().maxCoeff();
  if (min_eig_ < tol.psd) {
    std::ostringstream os;
    os << "Gram matrix is not positive definite (min eigenvalue " << min_eig_
       << "); |R| is too close to 1 for this truncation, use rho < 1 or a finer grid";
    throw NotPositiveDefinite(os.str());
  }
  factor_.compute(entries_);
  if (factor_.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky factorization failed");
}

Eigen::Index GramMatrix::power_index(int p) const {
  const int lo = kind_ == BasisKind::analytic ? 0 : -band_;
  if (p < lo || p > band_) throw InvalidArgument("power outside the Gram basis");
  return p - lo;
}

Eigen::Index GramMatrix::mass_index(std::size_t k) const {
  if (kind_ != BasisKind::laurent || k >= mass_count_) throw InvalidArgument("no such mass coordinate");
  return 2 * band_ + 1 + static_cast<Eigen::Index>(k);
}

Eigen::VectorXcd GramMatrix::solve(const Eigen::VectorXcd& rhs) const { return factor_.solve(rhs); }

// ---------------------------------------------------------------------------

double HankelBlock::largest_eigenvalue() const {
  if (gamma_gram.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gamma_gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

HankelBlock hankel_block(const CoeffSeries& symbol, std::span<const int> powers, int truncation) {
  if (truncation < 1) throw InvalidArgument("Hankel truncation must be at least 1");
  const auto cols = static_cast<Eigen::Index>(powers.size());
  Eigen::MatrixXcd h(truncation, cols);
  for (int j = 1; j <= truncation; ++j) {
    for (Eigen::Index i = 0; i < cols; ++i) h(j - 1, i) = symbol[-j - powers[static_cast<std::size_t>(i)]];
  }
  HankelBlock block;
  block.truncation = truncation;
  block.gamma_gram = h.adjoint() * h;

  if (!symbol.empty() && !powers.empty()) {
    const int min_power = *std::min_element(powers.begin(), powers.end());
    const int j_max = -symbol.first() - min_power;
    for (int j = truncation + 1; j <= j_max; ++j) {
      double m = 0.0;
      for (int p : powers) m = std::max(m, std::abs(symbol[-j - p]));
      block.tail_bound += m * m;
    }
  }
  return block;
}

int default_hankel_analytic(std::size_t grid_size, int degree) {
  return std::max(1, static_cast<int>(grid_size / 2) - degree);
}

int default_hankel_laurent(std::size_t grid_size, int half_band) {
  return static_cast<int>(grid_size / 2) + half_band;
}

GramMatrix build_gram_analytic(const SpaceData& space, int degree, std::optional<int> hankel, const Tolerances& tol) {
  if (degree < 0) throw InvalidArgument("degree must be nonnegative");
  const auto eff = effective_data(space);
  std::vector<int> powers(static_cast<std::size_t>(degree + 1));
  std::iota(powers.begin(), powers.end(), 0);
  const int J = hankel.value_or(default_hankel_analytic(space.symbol.grid().size(), degree));
  const auto block = hankel_block(eff.symbol, powers, J);

  const Eigen::Index n = degree + 1;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(n, n) - block.gamma_gram;
  if (!eff.points.empty()) {
    const auto k = static_cast<Eigen::Index>(eff.points.size());
    Eigen::MatrixXcd v(k, n);
    Eigen::VectorXd w(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      cplx z = 1.0;
      for (Eigen::Index l = 0; l < n; ++l) {
        v(i, l) = z;
        z *= eff.points[static_cast<std::size_t>(i)];
      }
      w(i) = eff.weights[static_cast<std::size_t>(i)];
    }
    g += v.adjoint() * w.asDiagonal() * v;
  }
  return GramMatrix(BasisKind::analytic, degree, eff.points.size(), std::move(g), block.tail_bound, tol);
}

GramMatrix build_gram_laurent(const SpaceData& space, int half_band, std::optional<int> hankel,
                              const Tolerances& tol) {
  if (half_band < 0) throw InvalidArgument("half band must be nonnegative");
  const auto eff = effective_data(space);
  std::vector<int> powers(static_cast<std::size_t>(2 * half_band + 1));
  std::iota(powers.begin(), powers.end(), -half_band);
  const int J = hankel.value_or(default_hankel_laurent(space.symbol.grid().size(), half_band));
  const auto block = hankel_block(eff.symbol, powers, J);

  const Eigen::Index laurent = 2 * half_band + 1;
  const auto k = static_cast<Eigen::Index>(eff.points.size());
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(laurent + k, laurent + k);
  g.topLeftCorner(laurent, laurent) = Eigen::MatrixXcd::Identity(laurent, laurent) - block.gamma_gram;
  for (Eigen::Index i = 0; i < k; ++i) g(laurent + i, laurent + i) = eff.weights[static_cast<std::size_t>(i)];
  return GramMatrix(BasisKind::laurent, half_band, eff.points.size(), std::move(g), block.tail_bound, tol);
}

Eigen::MatrixXcd embed_h2(const SpaceData& space, int degree, int half_band) {
  if (degree > half_band) throw InvalidArgument("embedding degree exceeds the Laurent half band");
  const auto eff = effective_data(space);
  const Eigen::Index laurent = 2 * half_band + 1;
  const auto k = static_cast<Eigen::Index>(eff.points.size());
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(laurent + k, degree + 1);
  for (int p = 0; p <= degree; ++p) {
    e(half_band + p, p) = 1.0;
    for (Eigen::Index i = 0; i < k; ++i) e(laurent + i, p) = std::pow(eff.points[static_cast<std::size_t>(i)], p);
  }
  return e;
}

// ---------------------------------------------------------------------------

namespace {

double projected_norm(std::span<const cplx> samples, Part part) {
  const auto c = fft::coefficients(samples);
  const std::size_t half = c.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const bool negative = i >= half;
    if ((part == Part::antianalytic) == negative) s += std::norm(c[i]);
  }
  return std::sqrt(s);
}

}  // namespace

L2RMembership check_l2r_membership(const SymbolData& symbol, const OuterData& outer, std::span<const cplx> f1,
                                   std::span<const cplx> f2) {
  const std::size_t n = symbol.grid().size();
  if (f1.size() != n || f2.size() != n || outer.grid().size() != n) {
    throw GridMismatch("L2_R membership: components do not match the grid");
  }
  const auto r = symbol.values();
  std::vector<cplx> rf1(n), sum(n), tf2(n);
  for (std::size_t j = 0; j < n; ++j) {
    rf1[j] = r[j] * f1[j];
    sum[j] = rf1[j] + f2[j];
    tf2[j] = std::conj(outer.values()[j]) * f2[j];
  }
  L2RMembership report;
  report.hardy_residual = projected_norm(sum, Part::antianalytic);
  report.complement_residual = projected_norm(tf2, Part::analytic);
  const auto minus = riesz_project(std::span<const cplx>(rf1), Part::antianalytic);
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += std::norm(f2[j] + minus[j]);
  report.reconstruction_residual = std::sqrt(s / static_cast<double>(n));
  return report;
}

}  // namespace hardy
