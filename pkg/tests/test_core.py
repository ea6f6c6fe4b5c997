import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_poly
from hmap.core import (
    DEFAULT_GRID,
    ColonnaExtremal,
    ExpLine,
    GridSpec,
    Identity,
    LogRatio,
    MobiusMap,
    NormalizedMap,
    PolynomialMap,
    analytic,
    evaluate,
    lambda_values,
    point_profile,
    sup_inf_lambda,
    sup_modulus,
    wirtinger_derivative,
)
from hmap.errors import DegenerateDerivative, DegenerateMap, DomainError, UnsupportedOrder

EXT = PolynomialMap([0, 1], [0, 0, 0.3])  # z + 0.3 conj(z)^2
COLONNA = ColonnaExtremal(M=1, alpha=1)


def test_evaluate_examples():
    assert evaluate(EXT, 0.5) == pytest.approx(0.575)
    assert evaluate(Identity(), 0.2 + 0.1j) == 0.2 + 0.1j
    assert abs(evaluate(COLONNA, 0)) < 1e-15


@pytest.mark.parametrize("z", [1.0, 1j, -1.5, complex("nan"), complex("inf")])
def test_evaluate_rejects_outside_or_nonfinite(z):
    with pytest.raises(DomainError):
        evaluate(EXT, z)


def test_canonical_decomposition_enforced():
    with pytest.raises(DomainError):
        PolynomialMap([0, 1], [0.1, 0.2])
    with pytest.raises(DomainError):
        PolynomialMap([0, np.inf])


def test_polynomial_coefficients_are_frozen():
    with pytest.raises(ValueError):
        EXT.a[0] = 1


def test_wirtinger_examples():
    assert wirtinger_derivative(EXT, 1, True, 0.5) == pytest.approx(0.3)
    assert wirtinger_derivative(Identity(), 2, False, 0.3 - 0.2j) == 0
    assert abs(wirtinger_derivative(COLONNA, 1, False, 0)) == pytest.approx(2 / math.pi, abs=1e-15)


def test_colonna_derivative_against_finite_difference():
    h = 1e-6
    z = 0.2 - 0.1j
    fd = (COLONNA.h_derivative(0, z + h) - COLONNA.h_derivative(0, z - h)) / (2 * h)
    assert abs(fd - COLONNA.h_derivative(1, z)) < 1e-8


def test_colonna_is_real_valued_and_bounded():
    f = ColonnaExtremal(M=2, alpha=-1, p=0.3 - 0.2j, tau=0.7)
    w = evaluate(f, DEFAULT_GRID.points())
    assert np.abs(w.imag).max() < 1e-12
    assert np.abs(w).max() < 2


@pytest.mark.parametrize("f", [COLONNA, ColonnaExtremal(1.5, 1j, 0.4j, 1.0), ExpLine(1 - 0.5j), LogRatio(0.5),
                               MobiusMap(1, 0.2, 0.5, 1)])
def test_closed_form_taylor_matches_evaluation(f):
    a, b = f.taylor(60)
    z = 0.4 * np.exp(2j * np.pi * np.arange(9) / 9)
    assert np.allclose(evaluate(PolynomialMap(a, b), z), evaluate(f, z), atol=1e-10)


def test_closed_form_order_limit():
    with pytest.raises(UnsupportedOrder):
        wirtinger_derivative(COLONNA, 21, False, 0.1)
    with pytest.raises(UnsupportedOrder):
        wirtinger_derivative(EXT, 0, False, 0.1)


def test_mobius_rejects_interior_pole():
    with pytest.raises(DomainError):
        MobiusMap(1, 0, 1, 0.5)


def test_point_profile_examples():
    p = point_profile(EXT, 0.5)
    assert p.omega == pytest.approx(0.3)
    assert p.jacobian == pytest.approx(0.91)
    assert p.lambda_big == pytest.approx(1.3)
    assert p.lambda_small == pytest.approx(0.7)
    q = point_profile(Identity(), 0)
    assert (q.omega, q.jacobian, q.lambda_big, q.lambda_small) == (0, 1, 1, 1)
    r = point_profile(PolynomialMap([0, 1], [0, 0, 1]), 0.5)
    assert r.omega == pytest.approx(1.0)
    assert r.jacobian == pytest.approx(0) and r.lambda_small == pytest.approx(0)
    with pytest.raises(DegenerateDerivative):
        point_profile(analytic([0, 0, 1]), 0)


def test_sup_modulus_examples():
    assert sup_modulus(Identity()) == pytest.approx(0.999, abs=1e-12)
    assert sup_modulus(PolynomialMap([0.7])) == pytest.approx(0.7)
    # oracle: dense sampling of the outer circle at 10^6 angles
    t = 2 * np.pi * np.arange(10**6) / 10**6
    oracle = np.abs(evaluate(EXT, 0.999 * np.exp(1j * t))).max()
    est = sup_modulus(EXT)
    assert est == pytest.approx(oracle, abs=1e-9)
    assert abs(est - 1.2985) < 1e-3


def test_sup_inf_lambda_examples():
    M, m = sup_inf_lambda(ExpLine(1))
    assert M == pytest.approx(math.exp(0.999))
    assert m == pytest.approx(math.exp(-0.999))
    assert sup_inf_lambda(Identity()) == (1, 1)
    M, m = sup_inf_lambda(EXT)
    assert M == pytest.approx(1 + 0.6 * 0.999) and m == pytest.approx(1 - 0.6 * 0.999)
    # the literal-sup reading of m_f
    assert sup_inf_lambda(EXT, literal_sup=True)[1] == pytest.approx(1)
    with pytest.raises(DegenerateMap):
        sup_inf_lambda(PolynomialMap([0.3]))


def test_grid_spec():
    g = GridSpec(4, 8, 0.5)
    pts = g.points()
    assert len(pts) == g.n_points == 33
    assert pts[0] == 0
    assert np.abs(pts[g.ring(4)]) == pytest.approx(0.5)
    assert g.index(2, 9) == g.index(2, 1)
    for bad in [(1, 8, 0.5), (4, 4, 0.5), (4, 8, 1.0), (4, 8, 0.0)]:
        with pytest.raises(DomainError):
            GridSpec(*bad)


def test_normalized_map():
    f = NormalizedMap([0, 1, 0.2], [0, 0, 0.1])
    assert f.s_h0
    assert not NormalizedMap([0, 1], [0, 0.3]).s_h0
    with pytest.raises(DomainError):
        NormalizedMap([0, 2], [0])


# --------------------------------------------------------------------------
# properties

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_jacobian_equals_lambda_product(seed):
    f = random_poly(np.random.default_rng(seed))
    z = GridSpec(16, 32).points()
    hp, gp = f.h_derivative(1, z), f.g_derivative(1, z)
    jac = np.abs(hp) ** 2 - np.abs(gp) ** 2
    big, small = lambda_values(f, z)
    ok = jac >= 0
    assert np.all(np.abs(jac - big * small)[ok] <= 1e-12 * (1 + np.abs(jac[ok])))
    assert np.all(big >= small) and np.all(small >= 0)


def _d_dz(fun, z, h=1e-5):
    fx = (fun(z + h) - fun(z - h)) / (2 * h)
    fy = (fun(z + 1j * h) - fun(z - 1j * h)) / (2 * h)
    return (fx - 1j * fy) / 2, (fx + 1j * fy) / 2


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_wirtinger_matches_finite_differences(seed, n):
    """The n-th derivative is the directional difference of the (n-1)-th."""
    rng = np.random.default_rng(seed)
    f = random_poly(rng)
    z = 0.8 * np.sqrt(rng.uniform(0, 1, 6)) * np.exp(2j * np.pi * rng.uniform(0, 1, 6))
    if n == 1:
        dz, dzbar = _d_dz(lambda w: evaluate(f, w), z)
    else:
        dz, _ = _d_dz(lambda w: wirtinger_derivative(f, n - 1, False, w), z)
        _, dzbar = _d_dz(lambda w: wirtinger_derivative(f, n - 1, True, w), z)
    for approx, exact in [(dz, wirtinger_derivative(f, n, False, z)), (dzbar, wirtinger_derivative(f, n, True, z))]:
        assert np.all(np.abs(approx - exact) <= 1e-6 * (1 + np.abs(exact)))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_lambda_is_max_over_directions(seed):
    rng = np.random.default_rng(seed)
    f = random_poly(rng)
    z = 0.7 * np.exp(2j * np.pi * rng.uniform(0, 1, 5))
    hp, gp = f.h_derivative(1, z), np.conj(f.g_derivative(1, z))
    big, _ = lambda_values(f, z)
    prev = np.zeros_like(big)
    for K in (4, 16, 64, 256, 4096):
        theta = 2 * np.pi * np.arange(K) / K
        est = np.abs(hp[:, None] + np.exp(-2j * theta)[None, :] * gp[:, None]).max(axis=1)
        assert np.all(est <= big + 1e-12)
        assert np.all(est >= prev - 1e-12)  # nested angle sets
        prev = est
    assert np.allclose(prev, big, rtol=1e-5)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_sup_modulus_monotone(seed):
    f = random_poly(np.random.default_rng(seed))
    radii = [sup_modulus(f, GridSpec(16, 64, r)) for r in (0.5, 0.8, 0.95, 0.999)]
    assert all(b >= a - 1e-12 for a, b in zip(radii, radii[1:]))
    coarse = sup_modulus(f, GridSpec(16, 64))
    fine = sup_modulus(f, GridSpec(32, 128))
    assert fine >= coarse - 1e-9
