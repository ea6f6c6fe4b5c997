"""Linear/affine invariance machinery and the shear construction.

All coefficient work is done in truncated power-series algebra
(:mod:`hmap.series`); closed-form inputs are first expanded to
``DEFAULT_ORDER`` Taylor coefficients.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from . import series
from .core import (
    DEFAULT_GRID,
    DEFAULT_ORDER,
    HarmonicMap,
    NormalizedMap,
    PolynomialMap,
    _points,
    _scalar_out,
)
from .errors import DegenerateDerivative, DegenerateDilatation, DomainError, SingularAffine


@dataclass(frozen=True)
class DiskAutomorphism:
    """phi(zeta) = (zeta + z0)/(1 + conj(z0) zeta)."""

    z0: complex

    def __post_init__(self):
        object.__setattr__(self, "z0", complex(self.z0))
        if abs(self.z0) >= 1:
            raise DomainError("automorphism parameter must satisfy |z0| < 1")

    def __call__(self, zeta):
        return (zeta + self.z0) / (1 + self.z0.conjugate() * zeta)

    def inverse(self, w):
        return (w - self.z0) / (1 - self.z0.conjugate() * w)

    @property
    def derivative_at_zero(self):
        return 1 - abs(self.z0) ** 2

    def series(self, order):
        return series.mobius_series(self.z0, order)


def _coefficients(f, order=DEFAULT_ORDER):
    if isinstance(f, PolynomialMap):
        return f.a, f.b
    return f.taylor(order)


def affine_transform(f, mu):
    """(f + mu conj(f)) / (1 + mu g'(0)) for a normalised f."""
    f = NormalizedMap.from_map(f)
    mu = complex(mu)
    if abs(mu) >= 1:
        raise DomainError("affine parameter must satisfy |mu| < 1")
    denom = 1 + mu * f.b[1]
    if abs(denom) == 0:
        raise SingularAffine("1 + mu g'(0) vanishes")
    a = (f.a + mu * f.b) / denom
    b = (f.b + mu.conjugate() * f.a) / denom.conjugate()
    a[1] = 1  # (h'(0) + mu g'(0)) / (1 + mu g'(0)) with h'(0) = 1
    return NormalizedMap(a, b)


def koebe_transform(f, z0, order=DEFAULT_ORDER):
    """(f(phi(z)) - f(phi(0))) / (phi'(0) h'(phi(0))), truncated at ``order``.

    The normalising constants are read off the composed series itself: its
    constant term is f(z0) and its linear coefficient phi'(0) h'(z0).
    """
    phi = DiskAutomorphism(z0)
    a, b = _coefficients(f, order)
    if phi.z0 == 0:
        scale = a[1]
        if scale == 0:
            raise DegenerateDerivative("h'(0) = 0")
        a_new, b_new = series.truncate(a, order) / scale, series.truncate(b, order) / np.conj(scale)
        a_new[0] = 0
        a_new[1] = 1
        return NormalizedMap(a_new, b_new)
    s = phi.series(order)
    hc = series.compose(a, s, order)
    gc = series.compose(b, s, order)
    scale = hc[1]
    if abs(scale) < 1e-300:
        raise DegenerateDerivative(f"h'({phi.z0}) = 0")
    hc[0] = 0
    gc[0] = 0
    a_new = hc / scale
    a_new[1] = 1
    return NormalizedMap(a_new, gc / np.conj(scale))


class RotatedMap(HarmonicMap):
    """Rotation family built lazily on top of an arbitrary map.

    ``mode="analytic"``: F_theta = h + e^{i theta} g (g-part zero);
    ``mode="harmonic"``: f_theta = h + e^{i theta} conj(g).
    """

    def __init__(self, base, theta, mode):
        self.base = base
        self.theta = float(theta)
        self.mode = mode
        self._rot = cmath.exp(1j * self.theta)
        self.max_order = base.max_order

    def h_derivative(self, n, z):
        h = self.base.h_derivative(n, z)
        if self.mode == "analytic":
            return h + self._rot * self.base.g_derivative(n, z)
        return h

    def g_derivative(self, n, z):
        if self.mode == "analytic":
            return np.zeros_like(np.asarray(z, dtype=complex))
        return self._rot.conjugate() * self.base.g_derivative(n, z)

    def taylor(self, order):
        a, b = self.base.taylor(order)
        if self.mode == "analytic":
            return a + self._rot * b, np.zeros_like(b)
        return a, self._rot.conjugate() * b

    def is_constant(self):
        return PolynomialMap(*self.taylor(8)).is_constant() and self.base.is_constant()

    def is_analytic(self):
        return self.mode == "analytic" or self.base.is_analytic()


def _check_theta(theta):
    if not 0 <= theta < 2 * np.pi:
        raise DomainError("theta must lie in [0, 2 pi)")


def rotation_analytic(f, theta):
    """F_theta = h + e^{i theta} g."""
    _check_theta(theta)
    if isinstance(f, PolynomialMap):
        return PolynomialMap(f.a + cmath.exp(1j * theta) * f.b, [0])
    return RotatedMap(f, theta, "analytic")


def rotation_harmonic(f, theta):
    """f_theta = h + e^{i theta} conj(g) = h + conj(e^{-i theta} g)."""
    _check_theta(theta)
    if isinstance(f, PolynomialMap):
        cls = NormalizedMap if isinstance(f, NormalizedMap) else PolynomialMap
        return cls(f.a, cmath.exp(-1j * theta) * f.b)
    return RotatedMap(f, theta, "harmonic")


@dataclass(frozen=True, eq=False, repr=False)
class ShearedMap(PolynomialMap):
    """Output of :func:`shear`; remembers F = h - g and the dilatation series."""

    F: np.ndarray = field(default_factory=lambda: np.zeros(2, dtype=complex))
    omega: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=complex))

    def omega_sup(self, n_samples=4096):
        """max |omega| on the unit circle, i.e. the sup over the open disk."""
        t = 2 * np.pi * np.arange(n_samples) / n_samples
        return float(np.abs(series.evaluate(self.omega, np.exp(1j * t))).max())


def shear(F, omega, order=DEFAULT_ORDER, grid=DEFAULT_GRID, min_gap=1e-8):
    """Recover f = h + conj(g) from F = h - g and omega = g'/h'.

    h' = F'/(1 - omega), g' = omega h', both integrated from 0.
    """
    F = series.as_series(F)
    omega = series.as_series(omega)
    dF = series.derivative(F)
    if dF[0] == 0:
        raise DegenerateDerivative("F'(0) = 0")
    one_minus = -series.truncate(omega, order)
    one_minus[0] += 1
    gap = np.abs(series.evaluate(one_minus, grid.points())).min()
    if gap <= min_gap:
        raise DegenerateDilatation(f"1 - omega nearly vanishes on the grid (min |1 - omega| = {gap:.3g})")
    hp = series.div(dF, one_minus, order - 1)
    gp = series.mul(omega, hp, order - 1)
    return ShearedMap(series.integrate(hp), series.integrate(gp), F=series.truncate(F, order), omega=omega)


def second_coefficient_A2(f, zeta, mu):
    """A_2(zeta) = (1-|zeta|^2)/2 (h'' + mu g'')/(h' + mu g') - conj(zeta).

    Vectorised over ``zeta`` and ``mu`` (broadcast together).
    """
    z = _points(zeta)
    m = np.asarray(mu, dtype=complex)
    if np.any(np.abs(m) >= 1):
        raise DomainError("|mu| must be < 1")
    denom = f.h_derivative(1, z) + m * f.g_derivative(1, z)
    if np.any(denom == 0):
        raise DegenerateDerivative("h' + mu g' vanishes")
    num = f.h_derivative(2, z) + m * f.g_derivative(2, z)
    value = 0.5 * (1 - np.abs(z) ** 2) * num / denom - np.conj(z)
    return _scalar_out(value, zeta) if np.ndim(zeta) == 0 and np.ndim(mu) == 0 else value


def mu_grid(n_radii=8, n_angles=16, r_max=0.95):
    r = r_max * np.arange(1, n_radii + 1) / n_radii
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    return np.concatenate([[0j], (r[:, None] * np.exp(1j * t)[None, :]).ravel()])


@dataclass(frozen=True, eq=False)
class SecondCoefficientField:
    zeta: np.ndarray
    mu: np.ndarray
    A2: np.ndarray
    c1_hat: float

    @property
    def witness(self):
        i = int(np.argmax(np.abs(self.A2)))
        return complex(self.zeta[i]), complex(self.mu[i])


def estimate_c1(f, grid=DEFAULT_GRID, mus=None):
    """Sweep A_2 over grid x mu-grid; c1_hat = max |A_2| (an under-estimate of c_1)."""
    mus = mu_grid() if mus is None else np.asarray(mus, dtype=complex)
    z = grid.points()
    zz, mm = np.broadcast_arrays(z[:, None], mus[None, :])
    a2 = second_coefficient_A2(f, zz, mm)
    return SecondCoefficientField(zz.ravel(), mm.ravel(), a2.ravel(), float(np.abs(a2).max()))
