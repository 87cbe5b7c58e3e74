#include "hardy/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hardy/errors.hpp"

namespace hardy::oracle {

std::vector<cplx> refined_nodes(const QuadratureContext& ctx) {
  const std::size_t n = ctx.nodes();
  std::vector<cplx> nodes(n);
  for (std::size_t j = 0; j < n; ++j) {
    nodes[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }
  return nodes;
}

std::vector<cplx> sample(const Evaluator& fn, std::span<const cplx> nodes) {
  std::vector<cplx> v(nodes.size());
  std::transform(nodes.begin(), nodes.end(), v.begin(), fn);
  return v;
}

cplx quad_inner(std::span<const cplx> f, std::span<const cplx> g) {
  if (f.size() != g.size() || f.empty()) throw GridMismatch("quad_inner: misaligned grids");
  cplx s{};
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * std::conj(g[j]);
  return s / static_cast<double>(f.size());
}

cplx quad_inner(std::span<const cplx> f, std::span<const cplx> g, std::span<const cplx> weight) {
  if (f.size() != g.size() || f.size() != weight.size() || f.empty()) throw GridMismatch("quad_inner: misaligned grids");
  cplx s{};
  for (std::size_t j = 0; j < f.size(); ++j) s += weight[j] * f[j] * std::conj(g[j]);
  return s / static_cast<double>(f.size());
}

cplx quad_inner(const Pair& f, const Pair& g, std::span<const Eigen::Matrix2cd> weight) {
  const std::size_t n = weight.size();
  for (const auto* v : {&f[0], &f[1], &g[0], &g[1]}) {
    if (v->size() != n || n == 0) throw GridMismatch("quad_inner: misaligned grids");
  }
  cplx s{};
  for (std::size_t j = 0; j < n; ++j) {
    const Eigen::Vector2cd fv(f[0][j], f[1][j]);
    const Eigen::Vector2cd gv(g[0][j], g[1][j]);
    const Eigen::Vector2cd wf = weight[j] * fv;
    s += wf(0) * std::conj(gv(0)) + wf(1) * std::conj(gv(1));
  }
  return s / static_cast<double>(n);
}

cplx naive_coefficient(std::span<const cplx> values, std::span<const cplx> nodes, int p) {
  if (values.size() != nodes.size()) throw GridMismatch("naive_coefficient: misaligned grids");
  cplx s{};
  for (std::size_t j = 0; j < values.size(); ++j) s += values[j] * std::pow(std::conj(nodes[j]), p);
  return s / static_cast<double>(values.size());
}

namespace {

// Refined-grid Fourier data of R: coefficients by direct trapezoidal sums,
// powers of the nodes through index arithmetic t_j^q = t_{jq mod N}.
class RefinedSymbol {
 public:
  RefinedSymbol(const Evaluator& symbol, const QuadratureContext& ctx)
      : nodes_(refined_nodes(ctx)), values_(sample(symbol, nodes_)), band_(ctx.band) {
    for (int p = -band_; p <= band_; ++p) coeffs_.push_back(coefficient(p));
  }

  cplx power(std::size_t j, int q) const {
    const long long n = static_cast<long long>(nodes_.size());
    const long long idx = ((static_cast<long long>(j) * q) % n + n) % n;
    return nodes_[static_cast<std::size_t>(idx)];
  }

  cplx coefficient(int p) const {
    cplx s{};
    for (std::size_t j = 0; j < nodes_.size(); ++j) s += values_[j] * power(j, -p);
    return s / static_cast<double>(nodes_.size());
  }

  cplx r(int p) const { return (p < -band_ || p > band_) ? cplx{} : coeffs_[static_cast<std::size_t>(p + band_)]; }

  // Samples of P_-(R z^l): index q < 0 of R z^l is r_{q-l}.
  std::vector<cplx> minus_part(int l) const {
    std::vector<cplx> out(nodes_.size());
    for (int q = -1; q - l >= -band_; --q) {
      const cplx c = r(q - l);
      if (c == cplx{}) continue;
      for (std::size_t j = 0; j < nodes_.size(); ++j) out[j] += c * power(j, q);
    }
    return out;
  }

 private:
  std::vector<cplx> nodes_;
  std::vector<cplx> values_;
  int band_;
  std::vector<cplx> coeffs_;
};

cplx mass_term(const MassList& masses, int m, int l) {
  cplx s{};
  for (std::size_t k = 0; k < masses.points.size(); ++k) {
    s += std::pow(masses.points[k], l) * std::conj(std::pow(masses.points[k], m)) * masses.weights[k];
  }
  return s;
}

}  // namespace

cplx gram_entry(const Evaluator& symbol, const MassList& masses, int m, int l, const QuadratureContext& ctx,
                bool include_masses) {
  const RefinedSymbol rs(symbol, ctx);
  cplx entry = (m == l ? 1.0 : 0.0) - quad_inner(rs.minus_part(l), rs.minus_part(m));
  if (include_masses) entry += mass_term(masses, m, l);
  return entry;
}

Eigen::MatrixXcd gram(const Evaluator& symbol, const MassList& masses, std::span<const int> powers,
                      const QuadratureContext& ctx, bool include_masses) {
  const RefinedSymbol rs(symbol, ctx);
  std::vector<std::vector<cplx>> minus;
  for (int p : powers) minus.push_back(rs.minus_part(p));
  const auto n = static_cast<Eigen::Index>(powers.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto ua = static_cast<std::size_t>(a);
      const auto ub = static_cast<std::size_t>(b);
      g(a, b) = (powers[ua] == powers[ub] ? 1.0 : 0.0) - quad_inner(minus[ub], minus[ua]);
      if (include_masses) g(a, b) += mass_term(masses, powers[ua], powers[ub]);
    }
  }
  return g;
}

cplx fd_derivative(const Evaluator& fn, cplx point, double step) {
  auto central = [&](double h) { return (fn(point + h) - fn(point - h)) / (2.0 * h); };
  return (4.0 * central(step / 2.0) - central(step)) / 3.0;
}

cplx outer_at(const Evaluator& symbol, cplx z, const QuadratureContext& ctx) {
  const auto nodes = refined_nodes(ctx);
  cplx s{};
  for (const auto& t : nodes) {
    const double h = 0.5 * std::log(1.0 - std::norm(symbol(t)));
    s += (t + z) / (t - z) * h;
  }
  return std::exp(s / static_cast<double>(nodes.size()));
}

double dense_psd_check(const Eigen::MatrixXcd& matrix) {
  const Eigen::Index n = matrix.rows();
  if (matrix.cols() != n) throw NotHermitian("matrix is not square");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw NotHermitian("matrix is not Hermitian");

  // [[A_r, -A_i], [A_i, A_r]] has the spectrum of A, each eigenvalue twice.
  const Eigen::Index m = 2 * n;
  std::vector<double> a(static_cast<std::size_t>(m * m));
  auto at = [&](Eigen::Index i, Eigen::Index j) -> double& { return a[static_cast<std::size_t>(i * m + j)]; };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx v = 0.5 * (matrix(i, j) + std::conj(matrix(j, i)));
      at(i, j) = v.real();
      at(i + n, j + n) = v.real();
      at(i, j + n) = -v.imag();
      at(i + n, j) = v.imag();
    }
  }

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i + 1; j < m; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30 * scale * scale) break;
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < m; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < m; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  double lo = at(0, 0);
  for (Eigen::Index i = 1; i < m; ++i) lo = std::min(lo, at(i, i));
  return lo;
}

}  // namespace hardy::oracle
