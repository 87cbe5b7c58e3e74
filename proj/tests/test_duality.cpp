#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "hardy/duality.hpp"
#include "hardy/errors.hpp"
#include "hardy/kernels.hpp"

using namespace hardy;

namespace {

DualData dual_of(const corpus::Dataset& d, std::size_t grid = 4096,
                 MassConvention convention = MassConvention::unitary) {
  return build_dual(make_regular(d.space(grid)), convention);
}

TauVector random_vector(const RegularData& data, std::mt19937_64& rng, int band) {
  std::normal_distribution<double> normal;
  std::vector<cplx> coeffs(static_cast<std::size_t>(2 * band + 1));
  for (auto& c : coeffs) c = {normal(rng), normal(rng)};
  std::vector<cplx> masses(data.masses.size());
  for (auto& m : masses) m = {normal(rng), normal(rng)};
  return canonical_vector(data, CoeffSeries(-band, coeffs), masses);
}

}  // namespace

TEST_CASE("dual data closed forms") {
  const auto mass = dual_of(corpus::mass_case());
  CHECK(mass.dual_symbol().sup_modulus() < 1e-15);
  REQUIRE(mass.dual_masses().size() == 1);
  CHECK(std::abs(mass.dual_masses().points()[0] - 0.5) < 1e-16);
  CHECK(std::abs(mass.dual_masses().weights()[0] - 3.0 / 16.0) < 1e-14);
  CHECK(std::abs(mass.T_at_zero() - 2.0) < 1e-14);
  CHECK(mass.provenance.find("unitary") != std::string::npos);

  const auto printed = dual_of(corpus::mass_case(), 4096, MassConvention::printed);
  CHECK(std::abs(printed.dual_masses().weights()[0] - 16.0 / 27.0) < 1e-14);
  CHECK(printed.provenance.find("printed") != std::string::npos);

  const auto hankel = dual_of(corpus::hankel_case());
  CHECK(std::abs(hankel.dual_symbol().coefficient(1) + 0.6) < 1e-13);
  for (int p = -40; p <= 40; ++p) {
    if (p != 1) CHECK(std::abs(hankel.dual_symbol().coefficient(p)) < 1e-13);
  }
  CHECK(std::abs(hankel.T_at_zero() - 0.8) < 1e-14);
}

TEST_CASE("dual masses sit at conjugate points") {
  const auto d = corpus::mixed_cases()[0];
  const auto dual = dual_of(d);
  for (std::size_t k = 0; k < d.points.size(); ++k) {
    CHECK(dual.dual_masses().points()[k] == std::conj(d.points[k]));
    CHECK(dual.dual_masses().weights()[k] > 0.0);
  }
}

TEST_CASE("modulus preservation, dual outer function and double dual") {
  for (const auto& d : corpus::all_cases()) {
    CAPTURE(d.name);
    const auto dual = dual_of(d);
    CHECK(dual.modulus_residual() < 1e-10);
    CHECK(dual.outer_residual() < 1e-8);

    const auto back = build_dual(dual.dual);
    double sym = 0.0;
    for (std::size_t j = 0; j < back.dual.symbol.values().size(); ++j) {
      sym = std::max(sym, std::abs(back.dual.symbol.values()[j] - dual.primal.symbol.values()[j]));
    }
    CHECK(sym < 1e-8);
    for (std::size_t k = 0; k < d.points.size(); ++k) {
      CHECK(std::abs(back.dual_masses().points()[k] - d.points[k]) < 1e-15);
      CHECK(std::abs(back.dual_masses().weights()[k] - d.weights[k]) < 1e-8 * d.weights[k]);
    }
  }
}

TEST_CASE("tau on the classical space flips and shifts Fourier indices") {
  const auto dual = dual_of(corpus::classical_case(), 256);
  for (int p : {0, 1, 4, -3}) {
    const auto v = canonical_vector(dual.primal, CoeffSeries(p, {cplx{1.0}}), {});
    const auto image = apply_tau(v, dual);
    const auto& g = dual.primal.grid();
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(image.f1[j] - std::pow(g.node(j), -p - 1)));
    CHECK(err < 1e-13);
    CHECK(image.side == Side::dual);
  }
}

TEST_CASE("tau is unitary and an involution") {
  std::mt19937_64 rng(17);
  for (const auto& d : corpus::all_cases()) {
    CAPTURE(d.name);
    const auto dual = dual_of(d);
    for (int i = 0; i < 5; ++i) {
      const auto v = random_vector(dual.primal, rng, 16);
      const double n0 = laurent_norm_squared(v, dual.primal);
      const auto image = apply_tau(v, dual);
      CHECK(std::abs(laurent_norm_squared(image, dual.dual) - n0) / n0 < 1e-8);
      CHECK(std::abs(metric_inner(image, image, dual.dual).real() - n0) / n0 < 1e-8);
      const auto back = apply_tau(image, dual);
      CHECK(back.side == Side::primal);
      CHECK(coordinate_distance(back, v) / coordinate_norm(v) < 1e-8);
    }
  }
}

TEST_CASE("the printed mass convention breaks unitarity when masses are present") {
  std::mt19937_64 rng(2);
  const auto dual = dual_of(corpus::mass_case(), 4096, MassConvention::printed);
  const auto v = canonical_vector(dual.primal, CoeffSeries(0, {cplx{0.0}}), {cplx{1.0}});
  const double n0 = laurent_norm_squared(v, dual.primal);
  const double n1 = laurent_norm_squared(apply_tau(v, dual), dual.dual);
  CHECK(std::abs(n1 - n0) / n0 > 0.1);
  const auto id = duality_identity(dual, 40);
  CHECK(id.residual > 1e-3);
}

TEST_CASE("tau rejects vectors from another grid") {
  const auto dual = dual_of(corpus::mass_case(), 256);
  const auto other = dual_of(corpus::mass_case(), 512);
  const auto v = canonical_vector(other.primal, CoeffSeries(0, {cplx{1.0}}), {cplx{1.0}});
  CHECK_THROWS_AS(apply_tau(v, dual), GridMismatch);
}

TEST_CASE("hat membership") {
  const auto d = corpus::mixed_cases()[0];
  const auto dual = dual_of(d);
  std::vector<cplx> coeffs{1.0, cplx{0.5, -0.2}, 0.25, cplx{0.0, 0.3}};
  const auto v = embedded_vector(dual.primal, CoeffSeries(0, coeffs));
  const auto ok = check_hat_membership(v, dual.primal);
  CHECK(ok.holds(1e-10));

  auto perturbed = v;
  const cplx delta{1e-3, -2e-3};
  perturbed.masses[1] += delta;
  const auto bad = check_hat_membership(perturbed, dual.primal);
  CHECK(std::abs(bad.mass_mismatch - std::abs(delta)) < 1e-12);
  CHECK_FALSE(bad.holds(1e-6));

  auto antianalytic = canonical_vector(dual.primal, CoeffSeries(-2, {cplx{1.0}}), v.masses);
  CHECK(check_hat_membership(antianalytic, dual.primal).antianalytic_residual > 0.1);
}

TEST_CASE("complement mapping theorem") {
  const auto classical = theorem_check(dual_of(corpus::classical_case()), 16);
  CHECK(classical.complement_dimension == 16);
  CHECK(classical.max_residual() < 1e-13);

  const auto mass = theorem_check(dual_of(corpus::mass_case()), 32);
  CHECK(mass.complement_dimension == 33);
  CHECK(mass.max_membership_residual < 1e-7);
  CHECK(mass.orthogonality_residual < 1e-8);

  const auto hm = theorem_check(dual_of(corpus::hankel_mass_case()), 48);
  CHECK(hm.max_residual() < 1e-6);

  // B z^p leaves the band at order |zeta|^M, so the orthogonality test needs M large
  for (const auto& d : corpus::mixed_cases()) {
    CAPTURE(d.name);
    const auto r = theorem_check(dual_of(d), 48);
    CHECK(r.max_membership_residual < 1e-6);
    CHECK(r.orthogonality_residual < 1e-8);
    CHECK(r.converse_residual < 1e-6);
    CHECK(r.image_l2r_residual < 1e-6);
  }
}

TEST_CASE("duality identity") {
  const auto mass = duality_identity(dual_of(corpus::mass_case()), 40);
  CHECK(std::abs(mass.k_shifted - std::sqrt(5.0 / 17.0)) < 1e-10);
  CHECK(std::abs(mass.k_dual - std::sqrt(17.0 / 20.0)) < 1e-10);
  CHECK(mass.residual < 1e-9);
  CHECK(mass.vector_residual < 1e-6);

  const auto hankel = duality_identity(dual_of(corpus::hankel_case()), 40);
  CHECK(std::abs(hankel.k_shifted - 1.25) < 1e-12);
  CHECK(std::abs(hankel.k_dual - 1.0) < 1e-12);
  CHECK(hankel.residual < 1e-10);
  CHECK(hankel.vector_residual < 1e-10);

  const auto classical = duality_identity(dual_of(corpus::classical_case()), 10);
  CHECK(classical.residual < 1e-15);

  for (const auto& d : corpus::mixed_cases()) {
    CAPTURE(d.name);
    CHECK(duality_identity(dual_of(d), 48).residual < 1e-6);
  }
}

TEST_CASE("regular data requirements") {
  const CircleGrid g(64);
  CHECK_THROWS_AS(make_regular(SymbolData::zero(g), MassSet({0.0}, {1.0})), InvalidArgument);
  Tolerances strict;
  strict.derivative = 10.0;
  CHECK_THROWS_AS(build_dual(make_regular(SymbolData::zero(g), MassSet({0.5}, {1.0}), strict)),
                  DegenerateDerivative);
  std::vector<cplx> touching(g.size(), 0.5);
  touching[0] = 1.0;
  CHECK_THROWS_AS(make_regular(SymbolData::from_samples(g, touching), MassSet{}), SzegoViolation);
  CHECK(mass_convention_from_string("printed") == MassConvention::printed);
  CHECK_THROWS_AS(mass_convention_from_string("other"), InvalidArgument);
}
