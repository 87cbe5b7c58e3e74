#include "hardy/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hardy/duality.hpp"
#include "hardy/errors.hpp"

namespace hardy {

KernelVector kernel_at_point(const GramMatrix& gram, cplx zeta0) {
  if (gram.kind() != BasisKind::analytic) throw InvalidArgument("kernels are computed on the analytic basis");
  if (!(std::abs(zeta0) < 1.0)) throw RejectBoundary("evaluation point must lie in the open unit disk");

  const Eigen::Index n = gram.order();
  Eigen::VectorXcd u(n);
  cplx w = 1.0;
  for (Eigen::Index m = 0; m < n; ++m) {
    u(m) = std::conj(w);
    w *= zeta0;
  }
  KernelVector k;
  k.point = zeta0;
  k.coefficients = gram.solve(u);
  // k(zeta0) = u^H k = ||k||^2
  const cplx value = u.dot(k.coefficients);
  k.value_at_point = value.real();
  k.norm = std::sqrt(k.value_at_point);
  k.normalized_at_point = k.norm;
  k.reproducing_residual = (gram.entries() * k.coefficients - u).cwiseAbs().maxCoeff();
  return k;
}

KernelVector kernel_at_origin(const GramMatrix& gram) { return kernel_at_point(gram, 0.0); }

double kernel_value_at_origin(const SpaceData& space, int degree, std::optional<int> hankel, const Tolerances& tol) {
  return kernel_at_origin(build_gram_analytic(space, degree, hankel, tol)).normalized_at_point;
}

double extremal_value(const GramMatrix& gram) {
  const Eigen::Index n = gram.order();
  Eigen::MatrixXcd kkt = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  kkt.topLeftCorner(n, n) = gram.entries();
  kkt(0, n) = 1.0;
  kkt(n, 0) = 1.0;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n + 1);
  rhs(n) = 1.0;
  const Eigen::VectorXcd sol = kkt.fullPivLu().solve(rhs);
  const Eigen::VectorXcd a = sol.head(n);
  return a.dot(gram.entries() * a).real();
}

// ---------------------------------------------------------------------------

double OrthonormalSystem::max_deviation() const {
  const auto n = system_gram.rows();
  return (system_gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

OrthonormalSystem orthonormal_system(const SpaceData& space, int n_first, int n_last, int degree,
                                     std::optional<int> hankel, const Tolerances& tol) {
  if (n_first > n_last) throw InvalidArgument("empty index range");
  if (n_last > degree) throw InvalidArgument("largest index exceeds the basis degree");
  if (n_first < -degree) throw InvalidArgument("smallest index lies outside the Laurent band");

  const int J = hankel.value_or(default_hankel_laurent(space.symbol.grid().size(), degree));
  OrthonormalSystem sys;
  sys.basis = n_first >= 0 ? BasisKind::analytic : BasisKind::laurent;
  const GramMatrix gram = sys.basis == BasisKind::analytic ? build_gram_analytic(space, degree, J, tol)
                                                           : build_gram_laurent(space, degree, J, tol);
  const auto eff = effective_data(space);

  for (int n = n_first; n <= n_last; ++n) {
    const int d = degree - n;
    const auto kernel = kernel_at_origin(build_gram_analytic(space.with_shift(space.shift + n), d, J, tol));
    const Eigen::VectorXcd c = kernel.normalized();
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(gram.order());
    for (int m = 0; m <= d; ++m) e(gram.power_index(m + n)) = c(m);
    if (sys.basis == BasisKind::laurent) {
      for (std::size_t k = 0; k < eff.points.size(); ++k) {
        const cplx zeta = eff.points[k];
        cplx value{};
        cplx z = 1.0;
        for (int m = 0; m <= d; ++m) {
          value += c(m) * z;
          z *= zeta;
        }
        e(gram.mass_index(k)) = std::pow(zeta, n) * value;
      }
    }
    sys.indices.push_back(n);
    sys.vectors.push_back(std::move(e));
  }

  const auto count = static_cast<Eigen::Index>(sys.vectors.size());
  sys.system_gram.resize(count, count);
  for (Eigen::Index a = 0; a < count; ++a) {
    const Eigen::VectorXcd ga = gram.entries() * sys.vectors[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < count; ++b) sys.system_gram(a, b) = sys.vectors[static_cast<std::size_t>(b)].dot(ga);
  }
  return sys;
}

// ---------------------------------------------------------------------------

bool AsymptoticTrace::tail_monotone(int from, double slack) const {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i - 1].first < from) continue;
    if (deviation(i) > deviation(i - 1) + slack) return false;
  }
  return true;
}

AsymptoticTrace asymptotic_sweep(const SpaceData& space, int n_max, int degree, std::optional<int> hankel,
                                 double convergence_tolerance, const Tolerances& tol) {
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  AsymptoticTrace trace;
  trace.degree = degree;
  trace.hankel = hankel.value_or(default_hankel_analytic(space.symbol.grid().size(), degree));
  trace.grid_size = space.symbol.grid().size();
  trace.convergence_tolerance = convergence_tolerance;
  for (int n = 0; n <= n_max; ++n) {
    const auto gram = build_gram_analytic(space.with_shift(space.shift + n), degree, trace.hankel, tol);
    trace.tail_bound = std::max(trace.tail_bound, gram.tail_bound());
    trace.values.emplace_back(n, kernel_at_origin(gram).normalized_at_point);
  }
  for (std::size_t i = 0; i + 2 < trace.values.size(); ++i) {
    if (trace.deviation(i) < convergence_tolerance && trace.deviation(i + 1) < convergence_tolerance &&
        trace.deviation(i + 2) < convergence_tolerance) {
      trace.converged_at = trace.values[i].first;
      break;
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------

double SandwichReport::scalar_margin() const {
  return std::min(k_truncated - k_full, k_full - k_regularized);
}

double SandwichReport::dual_margin() const {
  return std::min(dual_truncated - dual_both, dual_both - dual_regularized);
}

double SandwichReport::bound_margin() const { return std::min(upper_bound - k_full, k_full - lower_bound); }

double SandwichReport::max_identity_residual() const {
  return std::max({identity_residual_truncated, identity_residual_regularized, identity_residual_both});
}

namespace {

double min_eigenvalue(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

struct DualSide {
  double k_dual = 0.0;
  double residual = 0.0;
};

// Identity for beta_{n+1}: T(0) K^{beta_n}(0) K^{(beta_{n+1})^tau}(0) = 1.
DualSide dual_side(const SpaceData& beta, int n, int degree, std::optional<int> hankel, const Tolerances& tol) {
  const auto regular = make_regular(beta.with_shift(beta.shift + n + 1), tol);
  const auto dual = build_dual(regular);
  const auto id = duality_identity(dual, degree, hankel);
  return {id.k_dual, id.residual};
}

}  // namespace

SandwichReport sandwich_check(const SpaceData& space, std::size_t cutoff, double rho, int n, int degree,
                              std::optional<int> hankel, const Tolerances& tol) {
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in (0, 1]");
  if (cutoff > space.masses.size()) throw InvalidArgument("cutoff exceeds the number of masses");

  SandwichReport r;
  r.shift = n;
  r.cutoff = cutoff;
  r.rho = rho;

  const SpaceData full = space.with_shift(space.shift + n);
  const SpaceData truncated = full.with_cutoff(cutoff);
  const SpaceData regularized = full.with_rho(rho);
  const SpaceData both = truncated.with_rho(rho);

  const auto g_full = build_gram_analytic(full, degree, hankel, tol);
  const auto g_truncated = build_gram_analytic(truncated, degree, hankel, tol);
  const auto g_regularized = build_gram_analytic(regularized, degree, hankel, tol);
  const auto g_both = build_gram_analytic(both, degree, hankel, tol);

  r.k_full = kernel_at_origin(g_full).normalized_at_point;
  r.k_truncated = kernel_at_origin(g_truncated).normalized_at_point;
  r.k_regularized = kernel_at_origin(g_regularized).normalized_at_point;
  r.k_both = kernel_at_origin(g_both).normalized_at_point;

  r.psd_margin_truncated = min_eigenvalue(g_full.entries() - g_truncated.entries());
  r.psd_margin_regularized = min_eigenvalue(g_regularized.entries() - g_full.entries());

  const SpaceData base_truncated = space.with_cutoff(cutoff);
  const SpaceData base_regularized = space.with_rho(rho);
  const SpaceData base_both = base_truncated.with_rho(rho);
  const auto side_truncated = dual_side(base_truncated, n, degree, hankel, tol);
  const auto side_regularized = dual_side(base_regularized, n, degree, hankel, tol);
  const auto side_both = dual_side(base_both, n, degree, hankel, tol);
  r.dual_truncated = side_truncated.k_dual;
  r.dual_regularized = side_regularized.k_dual;
  r.dual_both = side_both.k_dual;
  r.identity_residual_truncated = side_truncated.residual;
  r.identity_residual_regularized = side_regularized.residual;
  r.identity_residual_both = side_both.residual;

  const auto outer = build_outer(materialize(full).symbol, tol);
  const auto outer_rho = build_outer(materialize(regularized).symbol, tol);
  double b_all = 1.0;
  double b_cut = 1.0;
  for (std::size_t k = 0; k < space.masses.size(); ++k) {
    const double m = std::abs(space.masses.points()[k]);
    b_all *= m;
    if (k < cutoff) b_cut *= m;
  }
  r.upper_bound = outer_rho.value_at_zero() / outer.value_at_zero() * r.k_both;
  r.lower_bound = b_all / b_cut * r.k_both;

  if (r.scalar_margin() < -tol.order) {
    std::ostringstream os;
    os << "kernel ordering violated: K^N = " << r.k_truncated << ", K = " << r.k_full << ", K^rho = "
       << r.k_regularized;
    throw OrderViolation(os.str());
  }
  return r;
}

}  // namespace hardy
