"""Truncated power series over the complex numbers.

A series is a 1-D complex numpy array ``c`` with ``c[k]`` the coefficient of
``z**k``.  Every operation takes an explicit ``order`` (the highest retained
power) so truncation is always visible at the call site.  Evaluation and
term-wise calculus are delegated to :mod:`numpy.polynomial.polynomial`;
division and composition, which numpy does not provide for power series,
live here.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P


def as_series(coeffs, order=None):
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
    if order is None:
        return c
    return truncate(c, order)


def truncate(c, order):
    """Return ``c`` cut (or zero-padded) to exactly ``order + 1`` coefficients."""
    out = np.zeros(order + 1, dtype=complex)
    n = min(len(c), order + 1)
    out[:n] = c[:n]
    return out


def mul(p, q, order):
    return truncate(np.convolve(p, q), order)


def div(p, q, order):
    """Series quotient p/q by the recursive convolution; needs q[0] != 0."""
    p = truncate(np.asarray(p, dtype=complex), order)
    q = truncate(np.asarray(q, dtype=complex), order)
    if q[0] == 0:
        raise ZeroDivisionError("constant term of the divisor vanishes")
    out = np.zeros(order + 1, dtype=complex)
    for k in range(order + 1):
        # sum_{j=1..k} q[j] * out[k-j]
        acc = np.dot(q[1:k + 1], out[:k][::-1])
        out[k] = (p[k] - acc) / q[0]
    return out


def derivative(c, m=1):
    if len(c) <= m:
        return np.zeros(1, dtype=complex)
    return P.polyder(c, m)


def integrate(c):
    """Antiderivative vanishing at 0."""
    return P.polyint(c)


def compose(p, q, order):
    """Coefficients of p(q(z)) by Horner's rule in the series ring."""
    q = truncate(np.asarray(q, dtype=complex), order)
    out = np.zeros(order + 1, dtype=complex)
    for coeff in np.asarray(p, dtype=complex)[::-1]:
        out = mul(out, q, order)
        out[0] += coeff
    return out


def mobius_series(z0, order):
    """Taylor coefficients of phi(z) = (z + z0)/(1 + conj(z0) z) about 0.

    phi(z) = z0 + (1 - |z0|^2) * sum_{k>=1} (-conj(z0))**(k-1) z**k
    """
    z0 = complex(z0)
    c = np.zeros(order + 1, dtype=complex)
    c[0] = z0
    k = np.arange(1, order + 1)
    c[1:] = (1 - abs(z0) ** 2) * (-z0.conjugate()) ** (k - 1)
    return c


def evaluate(c, z):
    """Horner's rule; in place for arrays (about 2-3x faster than polyval)."""
    if np.ndim(z) == 0:
        return P.polyval(z, c)
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, c[-1], dtype=complex)
    for ck in c[-2::-1]:
        out *= z
        out += ck
    return out


def evaluate_derivative(c, n, z):
    if n == 0:
        return evaluate(c, z)
    if len(c) <= n:
        return np.zeros_like(np.asarray(z, dtype=complex))
    return evaluate(derivative(c, n), z)
