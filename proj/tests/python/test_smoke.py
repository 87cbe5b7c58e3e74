import math

import numpy as np
import pytest

import hardy


def mass_space(grid=4096):
    return hardy.Space(hardy.Symbol.zero(grid), hardy.Masses([0.5], [3.0]))


def hankel_space(grid=4096):
    return hardy.Space(hardy.Symbol.from_coefficients(grid, {-1: 0.6}))


def test_gram_closed_forms():
    g = hardy.gram_analytic(hankel_space(), 3, hankel=8)
    assert np.allclose(g, np.diag([0.64, 1, 1, 1]), atol=1e-14)
    m = hardy.gram_analytic(mass_space(), 2)
    idx = np.arange(3)
    expected = np.eye(3) + 3.0 * 2.0 ** -(idx[:, None] + idx[None, :])
    assert np.allclose(m, expected, atol=1e-15)
    lg = hardy.gram_laurent(mass_space(), 2)
    assert lg.shape == (6, 6)
    assert lg[5, 5] == pytest.approx(3.0)


def test_kernel_values():
    assert hardy.kernel_value_at_origin(mass_space(), 40) == pytest.approx(math.sqrt(2 / 5), abs=1e-10)
    assert hardy.kernel_value_at_origin(hankel_space(), 40) == pytest.approx(1.25, abs=1e-12)
    trace = hardy.asymptotic_sweep(mass_space(), 6, 40)
    for n, k in trace:
        assert k == pytest.approx(math.sqrt((1 + 4.0**-n) / (1 + 4.0 ** (1 - n))), abs=1e-10)
    coeffs, value = hardy.kernel_at_point(hardy.Space(hardy.Symbol.zero(256)), 0.5, 60)
    assert value == pytest.approx(4 / 3, abs=1e-12)


def test_symbol_encodings_and_szego():
    fn = hardy.Symbol.from_function(256, lambda t: 0.6 * t.conjugate())
    t = np.exp(2j * np.pi * np.arange(256) / 256)
    samples = hardy.Symbol.from_samples(0.6 * np.conj(t))
    assert np.allclose(fn.values, samples.values, atol=1e-15)
    assert fn.coefficient(-1) == pytest.approx(0.6)
    report = hardy.validate_szego(fn)
    assert report.log_integral == pytest.approx(math.log(0.4), abs=1e-12)
    outer = hardy.build_outer(fn)
    assert outer.value_at_zero == pytest.approx(0.8)
    with pytest.raises(hardy.InvalidArgument):
        hardy.validate_szego(hardy.Symbol.from_coefficients(64, {-1: 1.5}))


def test_duality():
    dual = hardy.build_dual(mass_space())
    assert dual.T_at_zero == pytest.approx(2.0)
    assert dual.masses.weights[0] == pytest.approx(3 / 16)
    identity = hardy.duality_identity(dual, 40)
    assert identity.residual < 1e-9
    theorem = hardy.theorem_check(dual, 32)
    assert theorem.membership_residual < 1e-7
    printed = hardy.build_dual(mass_space(), hardy.MassConvention.printed)
    assert "printed" in printed.provenance


def test_tau_unitarity():
    space = hardy.Space(
        hardy.Symbol.from_function(4096, lambda t: 0.5 * t.conjugate() / (1 - 0.3 * t.conjugate())),
        hardy.Masses([0.5 + 0.1j, -0.3 + 0.4j], [2.0, 0.5]),
    )
    dual = hardy.build_dual(space)
    rng = np.random.default_rng(0)
    for _ in range(5):
        f = rng.normal(size=33) + 1j * rng.normal(size=33)
        masses = list(rng.normal(size=2) + 1j * rng.normal(size=2))
        n0, n1, involution = hardy.tau_residuals(dual, f, masses)
        assert abs(n1 - n0) / n0 < 1e-8
        assert involution < 1e-8


def test_sandwich_and_orthonormal():
    space = hardy.Space(hardy.Symbol.zero(4096), hardy.Masses([0.5, 1 / 3], [3.0, 1.0]))
    r = hardy.sandwich_check(space, 1, 0.5, 0, 40)
    assert r.k_truncated >= r.k_full >= r.k_regularized
    assert r.scalar_margin >= -1e-10
    g = hardy.orthonormal_gram(space, 0, 8, 48)
    assert np.abs(g - np.eye(9)).max() < 1e-7


def test_errors():
    touching = hardy.Space(hardy.Symbol.from_coefficients(64, {-1: 1.0}))
    with pytest.raises(hardy.NotPositiveDefinite):
        hardy.gram_analytic(touching, 4)
    with pytest.raises(hardy.SzegoViolation):
        hardy.build_dual(touching)
    with pytest.raises(hardy.InvalidArgument):
        hardy.Masses([0.5, 0.5], [1.0, 1.0])
