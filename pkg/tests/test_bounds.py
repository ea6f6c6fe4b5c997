import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_poly
from hmap.bounds import (
    b2_bound_check,
    boundary_lipschitz_fit,
    coefficient_bound_check,
    coefficient_growth_check,
    rhs_colonna,
    rhs_ruscheweyh,
    rhs_schwarz,
    rhs_schwarz_pick_harmonic,
    rhs_szasz,
    rhs_thmA,
    verify_analytic_re_bound,
    verify_colonna,
    verify_derivative_sum_bound,
    verify_distortion_lower,
    verify_self_map,
    verify_thmA,
)
from hmap.core import ColonnaExtremal, GridSpec, Identity, LogRatio, NormalizedMap, PolynomialMap, analytic, sup_modulus
from hmap.errors import DegenerateMap, DilatationBoundViolated, DomainError
from hmap.transforms import estimate_c1, shear

COLONNA = ColonnaExtremal(M=1, alpha=1)
EXT = NormalizedMap([0, 1], [0, 0, 0.3])


def test_rhs_examples():
    assert rhs_schwarz_pick_harmonic(1, 1, 0) == pytest.approx(4 / math.pi)
    assert 4 / math.pi == pytest.approx(1.273240, abs=1e-6)
    assert rhs_schwarz_pick_harmonic(2, 1, 0.5) == pytest.approx(2 * 4 / math.pi / 0.375)
    assert rhs_schwarz_pick_harmonic(2, 1, 0.5) == pytest.approx(6.7906, abs=1e-4)
    assert rhs_schwarz_pick_harmonic(1, 2, 0) == pytest.approx(8 / math.pi)
    assert rhs_colonna(1, 0) == pytest.approx(4 / math.pi)
    assert rhs_szasz(1, 0) == 6
    assert rhs_szasz(1, 0.5) == pytest.approx(6 / 0.75 ** 3 * 1.25)
    assert rhs_thmA(1, 1, 0.5) == pytest.approx(4)
    assert rhs_ruscheweyh(1, 0, 0) == 1
    assert rhs_schwarz(0.5, 0.5) == pytest.approx(1)


@pytest.mark.parametrize("call", [
    lambda: rhs_schwarz_pick_harmonic(1, 1, 1.0),
    lambda: rhs_schwarz_pick_harmonic(0, 1, 0.5),
    lambda: rhs_schwarz_pick_harmonic(1, 0, 0.5),
    lambda: rhs_colonna(1, -0.1),
    lambda: rhs_thmA(1.5, 1, 0.2),
    lambda: rhs_ruscheweyh(1, 1.1, 0.2),
    lambda: rhs_schwarz(-0.1, 0.2),
    lambda: rhs_szasz(0, 0.2),
])
def test_rhs_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_improvement_over_separate_bound_exact():
    # rhs_thm1.1 <= 2 rhs_thmC  <=>  (4/pi) (1-r) <= 2 (1+r); check in rationals with pi >= 3
    for n in range(1, 11):
        for k in range(1000):
            r = Fraction(k, 1000)
            for M in (Fraction(1, 2), Fraction(1), Fraction(3)):
                lhs_over_pi = math.factorial(n) * 4 * M / ((1 - r) ** n * (1 + r))
                rhs = 2 * math.factorial(n) * M / (1 - r) ** (n + 1)
                assert lhs_over_pi / 3 <= rhs


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.floats(0, 0.998), st.floats(0, 0.998), st.floats(0.01, 10))
def test_rhs_monotone(n, r1, r2, M):
    lo, hi = sorted((r1, r2))
    assert rhs_schwarz_pick_harmonic(n, M, lo) <= rhs_schwarz_pick_harmonic(n, M, hi)
    assert rhs_schwarz_pick_harmonic(n, M, lo) <= rhs_schwarz_pick_harmonic(n, 2 * M, lo)
    assert rhs_colonna(M, lo) <= rhs_colonna(M, hi)
    assert rhs_thmA(n, M, lo) <= rhs_thmA(n, M, hi)
    assert rhs_szasz(n, lo) <= rhs_szasz(n, hi)
    assert rhs_schwarz_pick_harmonic(n, M, lo) <= 2 * rhs_thmA(n, M, lo) * (1 + 1e-12)


def test_verify_derivative_sum_examples():
    rep = verify_derivative_sum_bound(COLONNA, 1, keep_pointwise=True)
    assert rep.M_used == 1
    z, lhs, rhs = rep.pointwise
    assert z[0] == 0 and lhs[0] == pytest.approx(4 / math.pi, abs=1e-12) and rhs[0] == pytest.approx(lhs[0])
    # for n = 1 the extremal is sharp along the whole real diameter
    assert abs(rep.worst_margin) < 1e-9 and abs(rep.worst_point.imag) < 1e-15
    assert rep.passed
    ident = verify_derivative_sum_bound(Identity(), 1)
    assert ident.passed and ident.worst_margin > 0
    f = PolynomialMap([0, 0, 0.5], [0, 0.5])
    coarse = verify_derivative_sum_bound(f, 1)
    fine = verify_derivative_sum_bound(f, 1, GridSpec(128, 512))
    assert coarse.worst_margin >= 0 and fine.worst_margin >= 0
    d = rep.to_dict()
    assert set(d) >= {"inequality", "n", "M", "worst_margin", "worst_point", "pass"}


def test_verify_colonna_examples():
    rep = verify_colonna(COLONNA, keep_pointwise=True)
    z, lhs, rhs = rep.pointwise
    real = np.abs(z.imag) < 1e-15
    assert np.allclose((rhs - lhs)[real], 0, atol=1e-9)
    assert verify_colonna(Identity()).worst_margin > 0
    rng = np.random.default_rng(3)
    for _ in range(10):
        f = random_poly(rng, normalized=False)
        assert verify_colonna(f).worst_margin >= -1e-9


def test_verify_thmA():
    assert verify_thmA(COLONNA, 2).passed
    ident = verify_thmA(Identity(), 1)
    assert ident.worst_point == 0 and ident.worst_margin == pytest.approx(0)


def test_verify_analytic_re_bound():
    rep = verify_analytic_re_bound(analytic([0, 1]), 1)
    assert rep.M_used == pytest.approx(0.999)
    assert rep.worst_margin >= 0
    for scale in (0.5, -0.5j):
        assert verify_analytic_re_bound(LogRatio(scale), 1).worst_margin >= -1e-9
        assert verify_analytic_re_bound(LogRatio(scale), 3).worst_margin >= -1e-9
    with pytest.raises(DegenerateMap):
        verify_analytic_re_bound(analytic([0.4]), 1)
    with pytest.raises(DomainError):
        verify_analytic_re_bound(EXT, 1)


def test_verify_self_map():
    F = analytic([0.1, 0.5, 0.3])
    for ineq in ("schwarz", "szasz", "ruscheweyh"):
        assert verify_self_map(F, ineq).passed
    with pytest.raises(DomainError):
        verify_self_map(analytic([0, 2]), "schwarz")
    with pytest.raises(DomainError):
        verify_self_map(F, "bogus")


def test_coefficient_bound_check():
    rep = coefficient_bound_check(COLONNA)
    n, value, bound = rep.entries[0]
    assert n == 1 and value == pytest.approx(4 / math.pi, abs=1e-12) and bound == pytest.approx(4 / math.pi)
    assert rep.passed
    rep = coefficient_bound_check(analytic([0, 0.9]))
    assert rep.entries[0][1] == pytest.approx(0.9)
    assert rep.entries[0][2] == pytest.approx(4 * 0.9 * 0.999 / math.pi)
    const = coefficient_bound_check(PolynomialMap([0.4]))
    assert const.a0_margin == pytest.approx(0)


def test_coefficient_growth_check():
    assert coefficient_growth_check(EXT).entries[0] == (2, pytest.approx(0.3), 2.0)
    n = np.arange(25)
    koebe = coefficient_growth_check(NormalizedMap(n.astype(complex)))
    assert np.allclose(koebe.margins, 0) and koebe.passed
    ident = coefficient_growth_check(NormalizedMap([0, 1, 0, 0]))
    assert np.allclose(ident.margins, [2, 3])


def test_b2_bound_check():
    ext = b2_bound_check(NormalizedMap([0, 1], [0, 0, 0.3]), 0.6)
    assert ext.margin == 0 and ext.sharp
    ident = b2_bound_check(NormalizedMap([0, 1]), 0.6)
    assert ident.margin == pytest.approx(0.3) and not ident.sharp
    s = b2_bound_check(shear([0, 1], [0, 0.5]), 0.5)
    assert abs(s.margin) < 1e-15
    with pytest.raises(DilatationBoundViolated):
        b2_bound_check(NormalizedMap([0, 1], [0, 0, 0.3]), 0.5)


def test_distortion_lower():
    f = shear([0, 1], [0, 0.4])
    same = verify_distortion_lower(f, 2.0, 1, 0.5, 0.5)
    assert same.margin > 0
    ident = verify_distortion_lower(Identity(), 1.5, 1j, 0.1, 0.9)
    assert ident.lhs == 1 and ident.rhs <= 1
    c1 = estimate_c1(f, GridSpec(16, 64, 0.95)).c1_hat
    rep = verify_distortion_lower(f, c1, 1, 0.2, 0.8)
    assert rep.margin >= 0 and rep.margin_sharp >= 0
    with pytest.raises(DomainError):
        verify_distortion_lower(f, c1, 0.5, 0.2, 0.8)
    with pytest.raises(DomainError):
        verify_distortion_lower(f, c1, 1, 0.8, 0.2)


def test_boundary_lipschitz_fit():
    fit = boundary_lipschitz_fit(Identity())
    assert fit.c3 == 1 and fit.c2 == pytest.approx(1)
    ext = boundary_lipschitz_fit(EXT, 128)
    assert ext.c3 == 1 and ext.c2 > 0
    assert ext.worst_pair[0] != ext.worst_pair[1]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_rescaled_random_maps_satisfy_bounds(seed, n):
    f = random_poly(np.random.default_rng(seed))
    grid = GridSpec(24, 96)
    s = sup_modulus(f, grid)
    g = PolynomialMap(f.a / s, f.b / s)
    assert verify_derivative_sum_bound(g, n, grid, M=1.0).worst_margin >= -1e-9
    assert verify_colonna(g, grid, M=1.0).worst_margin >= -1e-9
    assert coefficient_bound_check(g, M=1.0).worst_margin >= -1e-9
