#pragma once

// Slow reference computations for tests.  Nothing here calls the FFT, the
// Gram builders or Eigen's solvers: coefficients come from direct trapezoidal
// sums, eigenvalues from cyclic Jacobi rotations.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace hardy::oracle {

using cplx = std::complex<double>;
using Evaluator = std::function<cplx(cplx)>;

struct QuadratureContext {
  std::size_t production_grid = 4096;
  std::size_t refinement = 2;
  // Fourier band kept when expanding R on the refined grid.
  int band = 96;

  std::size_t nodes() const { return production_grid * refinement; }
};

std::vector<cplx> refined_nodes(const QuadratureContext& ctx);
std::vector<cplx> sample(const Evaluator& fn, std::span<const cplx> nodes);

// mean_j weight_j f_j conj(g_j); the unweighted form uses weight 1.
cplx quad_inner(std::span<const cplx> f, std::span<const cplx> g);
cplx quad_inner(std::span<const cplx> f, std::span<const cplx> g, std::span<const cplx> weight);
// Two-component functions with a 2x2 matrix weight per node.
using Pair = std::array<std::vector<cplx>, 2>;
cplx quad_inner(const Pair& f, const Pair& g, std::span<const Eigen::Matrix2cd> weight);

// c_p = mean_j f(t_j) t_j^{-p}
cplx naive_coefficient(std::span<const cplx> values, std::span<const cplx> nodes, int p);

// Entry <D z^l, z^m> of the metric for symbol `symbol` and masses (zeta_k, nu_k),
// computed by expanding P_-(R z^l) on the refined grid.  Works for negative
// powers as well (Laurent entries, without the mass term).
struct MassList {
  std::vector<cplx> points;
  std::vector<double> weights;
};
cplx gram_entry(const Evaluator& symbol, const MassList& masses, int m, int l, const QuadratureContext& ctx,
                bool include_masses = true);
Eigen::MatrixXcd gram(const Evaluator& symbol, const MassList& masses, std::span<const int> powers,
                      const QuadratureContext& ctx, bool include_masses = true);

// Central difference with one Richardson step.
cplx fd_derivative(const Evaluator& fn, cplx point, double step = 1e-3);

// Outer function value from the Herglotz integral of log sqrt(1 - |R|^2).
cplx outer_at(const Evaluator& symbol, cplx z, const QuadratureContext& ctx);

// Smallest eigenvalue of a Hermitian matrix by cyclic Jacobi on its real
// 2n x 2n embedding.  Throws NotHermitian.
double dense_psd_check(const Eigen::MatrixXcd& matrix);

}  // namespace hardy::oracle
