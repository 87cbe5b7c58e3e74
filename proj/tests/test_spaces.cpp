#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "hardy/errors.hpp"
#include "hardy/fft.hpp"
#include "hardy/oracle.hpp"
#include "hardy/spaces.hpp"

using namespace hardy;

namespace {

SpaceData space_of(const corpus::Dataset& d, std::size_t grid = 4096) { return d.space(grid); }

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<cplx> canonical_f2(const SymbolData& R, std::span<const cplx> f1) {
  std::vector<cplx> rf(f1.size());
  for (std::size_t j = 0; j < f1.size(); ++j) rf[j] = R.values()[j] * f1[j];
  auto f2 = riesz_project(rf, Part::antianalytic);
  for (auto& v : f2) v = -v;
  return f2;
}

}  // namespace

TEST_CASE("effective data under shift, scaling and cutoff") {
  const auto plain = effective_data(space_of(corpus::mass_case()));
  REQUIRE(plain.weights.size() == 1);
  CHECK(plain.weights[0] == 3.0);
  CHECK(plain.points[0] == cplx{0.5});

  const auto shifted = effective_data(space_of(corpus::mass_case()).with_shift(2));
  CHECK(std::abs(shifted.weights[0] - 3.0 / 16.0) < 1e-16);

  const cplx c{0.3, -0.2};
  const auto data = SpaceData{SymbolData::from_coefficients(CircleGrid(64), CoeffSeries(-1, {c})), MassSet{}};
  const auto once = effective_data(data.with_shift(1));
  CHECK(std::abs(once.symbol[0] - c) < 1e-15);
  for (int p = -31; p < 0; ++p) CHECK(std::abs(once.symbol[p]) < 1e-15);

  const auto two = space_of(corpus::two_mass_case());
  CHECK(effective_data(two.with_cutoff(1)).points.size() == 1);
  CHECK(std::abs(effective_data(space_of(corpus::hankel_case()).with_rho(0.5)).symbol[-1] - 0.3) < 1e-14);
}

TEST_CASE("analytic gram closed forms") {
  const auto I = build_gram_analytic(space_of(corpus::classical_case()), 3);
  CHECK(max_abs(I.entries() - Eigen::MatrixXcd::Identity(4, 4)) < 1e-15);

  const auto H = build_gram_analytic(space_of(corpus::hankel_case()), 3, 8);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(4, 4);
  expected(0, 0) = 0.64;
  CHECK(max_abs(H.entries() - expected) < 1e-14);

  const auto M = build_gram_analytic(space_of(corpus::mass_case()), 2);
  for (int m = 0; m <= 2; ++m) {
    for (int l = 0; l <= 2; ++l) {
      CHECK(std::abs(M.entries()(m, l) - ((m == l ? 1.0 : 0.0) + 3.0 * std::pow(2.0, -(m + l)))) < 1e-15);
    }
  }
}

TEST_CASE("laurent gram closed forms") {
  const auto two = space_of(corpus::two_mass_case());
  const auto L0 = build_gram_laurent(two, 3);
  CHECK(L0.order() == 9);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(9, 9);
  expected(7, 7) = 3.0;
  expected(8, 8) = 1.0;
  CHECK(max_abs(L0.entries() - expected) < 1e-15);
  CHECK(L0.mass_index(0) == 7);

  const auto H = build_gram_laurent(space_of(corpus::hankel_case()), 3);
  CHECK(std::abs(H.entries()(H.power_index(0), H.power_index(0)) - 0.64) < 1e-14);
  CHECK(std::abs(H.entries()(H.power_index(-1), H.power_index(-1)) - 0.64) < 1e-14);
  CHECK(std::abs(H.entries()(H.power_index(1), H.power_index(1)) - 1.0) < 1e-14);
  CHECK(std::abs(H.entries()(H.power_index(-2), H.power_index(-2)) - 0.64) < 1e-14);
  CHECK(std::abs(H.entries()(H.power_index(0), H.power_index(-1))) < 1e-14);
}

TEST_CASE("embedding of the analytic basis") {
  const auto two = space_of(corpus::two_mass_case());
  const auto E = embed_h2(two, 2, 3);
  REQUIRE(E.rows() == 9);
  REQUIRE(E.cols() == 3);
  CHECK(E(3, 0) == cplx{1.0});
  CHECK(E(7, 0) == cplx{1.0});
  CHECK(E(8, 0) == cplx{1.0});
  CHECK(std::abs(E(7, 1) - 0.5) < 1e-16);
  CHECK(std::abs(E(8, 1) - 1.0 / 3.0) < 1e-16);

  for (const auto& d : corpus::all_cases()) {
    CAPTURE(d.name);
    const auto s = space_of(d);
    const int M = 10;
    const auto L = build_gram_laurent(s, 16);
    const auto A = build_gram_analytic(s, M, default_hankel_laurent(4096, 16));
    const auto Em = embed_h2(s, M, 16);
    CHECK(max_abs(Em.adjoint() * L.entries() * Em - A.entries()) < 1e-12);
  }
}

TEST_CASE("gram entries agree with the quadrature oracle") {
  oracle::QuadratureContext ctx;
  const std::vector<int> analytic{0, 1, 2, 3, 4, 5, 6, 7};
  const std::vector<int> laurent{-5, -3, -2, -1, 0, 1, 3, 6};
  for (const auto& d : corpus::all_cases()) {
    CAPTURE(d.name);
    const auto s = space_of(d);
    const auto A = build_gram_analytic(s, 7);
    const auto oa = oracle::gram(d.symbol, d.mass_list(), analytic, ctx);
    CHECK(max_abs(A.entries() - oa) < 1e-8);

    const auto L = build_gram_laurent(s, 6);
    const auto ol = oracle::gram(d.symbol, d.mass_list(), laurent, ctx, false);
    Eigen::MatrixXcd block(laurent.size(), laurent.size());
    for (std::size_t a = 0; a < laurent.size(); ++a) {
      for (std::size_t b = 0; b < laurent.size(); ++b) {
        block(a, b) = L.entries()(L.power_index(laurent[a]), L.power_index(laurent[b]));
      }
    }
    CHECK(max_abs(block - ol) < 1e-8);
  }
}

TEST_CASE("hankel oracle entry for 0.6 conj(t) matches the coefficient formula") {
  oracle::QuadratureContext ctx;
  const auto sym = corpus::hankel_case().symbol;
  CHECK(std::abs(oracle::gram_entry(sym, {}, 0, 0, ctx) - 0.64) < 1e-12);
  CHECK(std::abs(oracle::gram_entry(sym, {}, 1, 1, ctx) - 1.0) < 1e-12);
  CHECK(std::abs(oracle::gram_entry(sym, {}, 0, 1, ctx)) < 1e-12);
}

TEST_CASE("gram matrices are hermitian and ordered") {
  for (const auto& d : corpus::all_cases()) {
    CAPTURE(d.name);
    const auto s = space_of(d);
    const auto G = build_gram_analytic(s, 24);
    CHECK(max_abs(G.entries() - G.entries().adjoint()) <= 1e-14 * max_abs(G.entries()));
    CHECK(G.min_eig_estimate() > 0.0);
    for (std::size_t N = 0; N < d.points.size(); ++N) {
      const auto GN = build_gram_analytic(s.with_cutoff(N), 24);
      CHECK(oracle::dense_psd_check(G.entries() - GN.entries()) >= -1e-12);
    }
    for (double rho : {0.5, 0.9, 0.99}) {
      const auto Gr = build_gram_analytic(s.with_rho(rho), 24);
      CHECK(oracle::dense_psd_check(Gr.entries() - G.entries()) >= -1e-12);
    }
  }
}

TEST_CASE("hankel block is a contraction and stable under truncation") {
  std::vector<int> powers(25);
  for (int i = 0; i < 25; ++i) powers[static_cast<std::size_t>(i)] = i;
  for (const auto& d : corpus::all_cases()) {
    CAPTURE(d.name);
    const auto R = SymbolData::from_function(CircleGrid(4096), d.symbol);
    const auto h = hankel_block(R.coeffs(), powers, 40);
    CHECK(h.largest_eigenvalue() <= R.sup_modulus() * R.sup_modulus() + 1e-10);
    CHECK(max_abs(h.gamma_gram - h.gamma_gram.adjoint()) < 1e-15);

    const auto shorter = hankel_block(R.coeffs(), powers, 8);
    const auto longer = hankel_block(R.coeffs(), powers, 12);
    double bound = 0.0;
    for (int m = 0; m <= 24; ++m) {
      for (int l = 0; l <= 24; ++l) {
        double tail = 0.0;
        for (int j = 9; j <= 2048; ++j) tail += std::abs(R.coefficient(-j - m)) * std::abs(R.coefficient(-j - l));
        CHECK(std::abs(longer.gamma_gram(m, l) - shorter.gamma_gram(m, l)) <= tail + 1e-15);
        bound = std::max(bound, tail);
      }
    }
    CHECK(shorter.tail_bound <= bound + 1e-15);
  }
}

TEST_CASE("gram factorization refuses near-singular data") {
  const CircleGrid g(256);
  const auto unimodular = SpaceData{SymbolData::from_coefficients(g, CoeffSeries(-1, {cplx{1.0}})), MassSet{}};
  CHECK_THROWS_AS(build_gram_analytic(unimodular, 4), NotPositiveDefinite);
  CHECK_NOTHROW(build_gram_analytic(unimodular.with_rho(0.9), 4));
}

TEST_CASE("gram solve and indices") {
  const auto s = space_of(corpus::mixed_cases()[0]);
  const auto L = build_gram_laurent(s, 5);
  CHECK(L.power_index(-5) == 0);
  CHECK(L.power_index(5) == 10);
  CHECK(L.mass_index(1) == 12);
  CHECK_THROWS_AS(L.power_index(6), InvalidArgument);
  Eigen::VectorXcd x = Eigen::VectorXcd::Random(L.order());
  CHECK((L.entries() * L.solve(x) - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("L2_R membership diagnostics") {
  const CircleGrid g(4096);
  const auto R = SymbolData::from_function(g, corpus::hankel_case().symbol);
  const auto te = build_outer(R);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;

  std::vector<cplx> coeffs(32);
  for (auto& c : coeffs) c = {normal(rng), normal(rng)};
  const auto f1 = fft::samples(CoeffSeries(0, coeffs).to_transform_order(g.size()));
  const auto f2 = canonical_f2(R, f1);
  const auto ok = check_l2r_membership(R, te, f1, f2);
  CHECK(ok.holds(1e-10));

  const double eps = 1e-3;
  auto bad = f2;
  for (std::size_t j = 0; j < g.size(); ++j) bad[j] += eps * std::conj(g.node(j));
  const auto flagged = check_l2r_membership(R, te, f1, bad);
  CHECK(std::abs(flagged.hardy_residual - eps) < 1e-12);
  CHECK_FALSE(flagged.holds(1e-6));

  const auto d = corpus::mixed_cases()[2];
  const auto R2 = SymbolData::from_function(g, d.symbol);
  const auto te2 = build_outer(R2);
  std::vector<cplx> laurent(41);
  for (auto& c : laurent) c = {normal(rng), normal(rng)};
  const auto h1 = fft::samples(CoeffSeries(-20, laurent).to_transform_order(g.size()));
  CHECK(check_l2r_membership(R2, te2, h1, canonical_f2(R2, h1)).holds(1e-9));
}
