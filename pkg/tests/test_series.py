import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hmap import series

coeff = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)
poly = st.lists(coeff, min_size=1, max_size=8)


def test_truncate_pads_and_cuts():
    assert series.truncate(np.array([1, 2, 3]), 1).tolist() == [1, 2]
    assert series.truncate(np.array([1]), 2).tolist() == [1, 0, 0]


@given(poly, poly)
def test_div_inverts_mul(p, q):
    q = np.array(q)
    q[0] = 1 + abs(q[0])
    order = 10
    prod = series.mul(p, q, order)
    assert np.allclose(series.div(prod, q, order), series.truncate(np.array(p, dtype=complex), order), atol=1e-9)


def test_div_by_geometric():
    # 1/(1 - z) = sum z^k
    assert np.allclose(series.div([1], [1, -1], 6), np.ones(7))


def test_div_rejects_zero_constant():
    try:
        series.div([1], [0, 1], 4)
    except ZeroDivisionError:
        return
    raise AssertionError("expected ZeroDivisionError")


@given(poly)
def test_integrate_then_differentiate(p):
    p = np.array(p, dtype=complex)
    back = series.derivative(series.integrate(p))
    assert np.allclose(back, p)
    assert series.integrate(p)[0] == 0


@settings(max_examples=50)
@given(poly, st.complex_numbers(max_magnitude=0.9, allow_nan=False))
def test_mobius_composition_matches_pointwise(p, z0):
    order = 40
    s = series.mobius_series(z0, order)
    comp = series.compose(p, s, order)
    z = 0.3 * np.exp(2j * np.pi * np.arange(7) / 7)
    phi = (z + z0) / (1 + np.conj(z0) * z)
    assert np.allclose(series.evaluate(comp, z), series.evaluate(np.array(p, dtype=complex), phi), atol=1e-8)


def test_compose_with_identity():
    p = np.array([1, 2, 3], dtype=complex)
    assert np.allclose(series.compose(p, [0, 1], 4), series.truncate(p, 4))


def test_evaluate_matches_numpy_and_scalars():
    c = np.array([1 + 1j, -2, 0.5j])
    z = np.array([0.1, -0.3 + 0.2j])
    assert np.allclose(series.evaluate(c, z), np.polynomial.polynomial.polyval(z, c))
    assert np.isclose(series.evaluate(c, 0.5), 1 + 1j - 1 + 0.125j)
    assert np.allclose(series.evaluate_derivative(c, 1, z), -2 + 1j * z)
    assert np.allclose(series.evaluate_derivative(c, 3, z), 0)
