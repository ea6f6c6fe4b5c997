"""Harmonic mappings f = h + conj(g) of the unit disk and their pointwise analysis.

Maps are immutable.  Every map exposes ``h_derivative(n, z)`` and
``g_derivative(n, z)`` (``n = 0`` is the value) vectorised over numpy arrays
of points; the module-level functions below validate inputs and build the
derived quantities (Jacobian, dilatation, Lambda_f, lambda_f) from them.

The decomposition is always canonical: ``g(0) = 0``.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import series
from .errors import DegenerateDerivative, DegenerateMap, DomainError, UnsupportedOrder

DEFAULT_ORDER = 24
# factorials swamp double precision beyond this for the closed forms
MAX_CLOSED_FORM_ORDER = 20
NORMALIZATION_TOL = 1e-12


def _points(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("non-finite point")
    if np.any(np.abs(z) >= 1):
        raise DomainError("point outside the open unit disk")
    return z


def _scalar_out(value, z):
    return complex(value) if np.ndim(z) == 0 else value


# --------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class GridSpec:
    """Polar sampling of the disk |z| <= r_max.

    Radii are ``r_max * j / n_radial`` for ``j = 0..n_radial`` (the origin is
    a single point), angles ``2*pi*k / n_angular``.  Point order is origin
    first, then ring by ring.
    """

    n_radial: int = 64
    n_angular: int = 256
    r_max: float = 0.999

    def __post_init__(self):
        if self.n_radial < 2:
            raise DomainError("n_radial must be >= 2")
        if self.n_angular < 8:
            raise DomainError("n_angular must be >= 8")
        if not 0 < self.r_max < 1:
            raise DomainError("r_max must lie in (0, 1)")

    @property
    def n_points(self):
        return self.n_radial * self.n_angular + 1

    def radii(self):
        return self.r_max * np.arange(self.n_radial + 1) / self.n_radial

    def angles(self):
        return 2 * np.pi * np.arange(self.n_angular) / self.n_angular

    def points(self):
        """All sample points (read-only, cached per grid)."""
        return _grid_points(self)

    def ring(self, j):
        """Points of ring ``j`` (1-based) as a slice into :meth:`points`."""
        start = 1 + (j - 1) * self.n_angular
        return slice(start, start + self.n_angular)

    def index(self, j, k):
        if j == 0:
            return 0
        return 1 + (j - 1) * self.n_angular + (k % self.n_angular)

    @property
    def spacing(self):
        """Largest distance between neighbouring grid points."""
        return max(self.r_max / self.n_radial, 2 * self.r_max * math.sin(math.pi / self.n_angular))

    def scaled(self, factor):
        return GridSpec(self.n_radial * factor, self.n_angular * factor, self.r_max)


@functools.lru_cache(maxsize=8)
def _grid_points(grid):
    rings = grid.radii()[1:, None] * np.exp(1j * grid.angles())[None, :]
    pts = np.concatenate([[0j], rings.ravel()])
    pts.flags.writeable = False
    return pts


DEFAULT_GRID = GridSpec()


def golden_maximize(fun, lo, hi, iters=60):
    """Vectorised golden-section search; maximises ``fun`` on each [lo_i, hi_i].

    Returns ``(x_best, f_best)`` arrays.  ``fun`` must accept an array.
    """
    invphi = (math.sqrt(5) - 1) / 2
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        left = fc > fd
        # each lane keeps one interior point and needs one new evaluation
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        x_new = np.where(left, b - invphi * (b - a), a + invphi * (b - a))
        f_new = fun(x_new)
        c, d = np.where(left, x_new, d), np.where(left, c, x_new)
        fc, fd = np.where(left, f_new, fd), np.where(left, fc, f_new)
    x = np.where(fc > fd, c, d)
    return x, np.maximum(fc, fd)


# --------------------------------------------------------------------------
# map representations


class HarmonicMap:
    """Base class.  Subclasses implement the two derivative hooks."""

    max_order = None

    def h_derivative(self, n, z):
        raise NotImplementedError

    def g_derivative(self, n, z):
        raise NotImplementedError

    def is_constant(self):
        raise NotImplementedError

    def known_sup(self):
        """Exact sup of |f| over the open disk when available in closed form."""
        return None

    def known_re_sup(self):
        """Exact sup of |Re f| over the open disk when available."""
        return None

    def is_analytic(self):
        return False

    def taylor(self, order):
        """Taylor coefficients ``(a, b)`` of h and g up to ``order``."""
        raise NotImplementedError

    def to_polynomial(self, order=DEFAULT_ORDER):
        a, b = self.taylor(order)
        return PolynomialMap(a, b)


@dataclass(frozen=True, eq=False)
class PolynomialMap(HarmonicMap):
    """f = sum a_k z^k + conj(sum b_k z^k), with ``b[0]`` forced to 0.

    ``a`` and ``b`` are stored as equal-length complex arrays indexed from 0.
    """

    a: np.ndarray
    b: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=complex))

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=complex))
        b = np.atleast_1d(np.asarray(self.b, dtype=complex))
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DomainError("non-finite coefficient")
        if len(b) and b[0] != 0:
            raise DomainError("canonical decomposition needs g(0) = 0 (b[0] = 0)")
        order = max(len(a), len(b), 2) - 1
        object.__setattr__(self, "a", series.truncate(a, order))
        object.__setattr__(self, "b", series.truncate(b, order))
        self.a.flags.writeable = False
        self.b.flags.writeable = False

    @property
    def truncation_order(self):
        return len(self.a) - 1

    def h_derivative(self, n, z):
        return series.evaluate_derivative(self.a, n, z)

    def g_derivative(self, n, z):
        return series.evaluate_derivative(self.b, n, z)

    def is_constant(self):
        return not (np.any(self.a[1:]) or np.any(self.b[1:]))

    def is_analytic(self):
        return not np.any(self.b)

    def taylor(self, order):
        return series.truncate(self.a, order), series.truncate(self.b, order)

    def to_polynomial(self, order=None):
        if order is None or order == self.truncation_order:
            return self
        return PolynomialMap(*self.taylor(order))

    def __repr__(self):
        return f"{type(self).__name__}(a={self.a.tolist()}, b={self.b.tolist()})"


def analytic(coeffs):
    """Analytic map (g = 0) from Taylor coefficients."""
    return PolynomialMap(coeffs, [0])


@dataclass(frozen=True, eq=False, repr=False)
class NormalizedMap(PolynomialMap):
    """Member of the normalised class: h(0) = g(0) = 0 and h'(0) = 1."""

    def __post_init__(self):
        super().__post_init__()
        if abs(self.a[0]) > NORMALIZATION_TOL or abs(self.a[1] - 1) > NORMALIZATION_TOL:
            raise DomainError(f"not normalized: h(0)={self.a[0]}, h'(0)={self.a[1]}")

    @property
    def s_h0(self):
        """True when additionally g'(0) = 0."""
        return abs(self.b[1]) <= NORMALIZATION_TOL

    @classmethod
    def from_map(cls, f, order=DEFAULT_ORDER):
        if isinstance(f, cls):
            return f
        if isinstance(f, PolynomialMap):
            return cls(f.a, f.b)
        return cls(*f.taylor(order))


class ClosedForm(HarmonicMap):
    kind = ""
    max_order = MAX_CLOSED_FORM_ORDER

    def params(self):
        raise NotImplementedError


def _log_ratio_derivative(n, z, A, B, C, D):
    """n-th derivative (n >= 1) of log((A z + B)/(C z + D))."""
    sign = (-1) ** (n - 1) * math.factorial(n - 1)
    return sign * (A ** n / (A * z + B) ** n - C ** n / (C * z + D) ** n)


def _log_ratio_taylor(order, A, B, C, D):
    n = np.arange(1, order + 1)
    c = np.zeros(order + 1, dtype=complex)
    c[1:] = (-1.0) ** (n - 1) / n * ((A / B) ** n - (C / D) ** n)
    return c


class ColonnaExtremal(ClosedForm):
    """f(z) = (2 M alpha / pi) * arg((1 + psi(z)) / (1 - psi(z))).

    ``psi(z) = e^{i tau} (z - p) / (1 - conj(p) z)`` is a disk automorphism,
    |alpha| = 1.  With L = log((1 + psi)/(1 - psi)) the canonical split is
    h = M alpha/(i pi) * (L - conj(L(0))) and g = M conj(alpha)/(i pi) * (L - L(0)),
    since arg = Im L.  sup |f| is exactly M.
    """

    kind = "colonna"

    def __init__(self, M=1.0, alpha=1.0, p=0.0, tau=0.0):
        self.M = float(M)
        self.alpha = complex(alpha)
        self.p = complex(p)
        self.tau = float(tau)
        if self.M < 0:
            raise DomainError("M must be nonnegative")
        if abs(abs(self.alpha) - 1) > 1e-12:
            raise DomainError("|alpha| must be 1")
        if abs(self.p) >= 1:
            raise DomainError("automorphism parameter must satisfy |p| < 1")
        beta = cmath.exp(1j * self.tau)
        p = self.p
        self._beta = beta
        self._abcd = (beta - p.conjugate(), 1 - beta * p, -(beta + p.conjugate()), 1 + beta * p)
        self._L0 = 2 * cmath.atanh(-beta * p)
        self._kh = self.M * self.alpha / (1j * math.pi)
        self._kg = self.M * self.alpha.conjugate() / (1j * math.pi)

    def psi(self, z):
        return self._beta * (z - self.p) / (1 - self.p.conjugate() * z)

    def _L(self, z):
        return 2 * np.arctanh(self.psi(z))

    def h_derivative(self, n, z):
        if n == 0:
            return self._kh * (self._L(z) - self._L0.conjugate())
        return self._kh * _log_ratio_derivative(n, z, *self._abcd)

    def g_derivative(self, n, z):
        if n == 0:
            return self._kg * (self._L(z) - self._L0)
        return self._kg * _log_ratio_derivative(n, z, *self._abcd)

    def taylor(self, order):
        c = _log_ratio_taylor(order, *self._abcd)
        a = self._kh * c
        b = self._kg * c
        a[0] = self._kh * (self._L0 - self._L0.conjugate())
        return a, b

    def is_constant(self):
        return self.M == 0

    def known_sup(self):
        return self.M

    def known_re_sup(self):
        return self.M * abs(self.alpha.real)

    def params(self):
        return {"M": self.M, "alpha": [self.alpha.real, self.alpha.imag],
                "p": [self.p.real, self.p.imag], "tau": self.tau}


class ExpLine(ClosedForm):
    """The analytic map f(z) = exp(a z)."""

    kind = "exp_line"

    def __init__(self, a=1.0):
        self.a = complex(a)

    def h_derivative(self, n, z):
        return self.a ** n * np.exp(self.a * z)

    def g_derivative(self, n, z):
        return np.zeros_like(np.asarray(z, dtype=complex))

    def taylor(self, order):
        n = np.arange(order + 1)
        a = np.array([self.a ** k / math.factorial(k) for k in n], dtype=complex)
        return a, np.zeros(order + 1, dtype=complex)

    def is_constant(self):
        return self.a == 0

    def is_analytic(self):
        return True

    def known_sup(self):
        return math.exp(abs(self.a))

    def known_re_sup(self):
        return math.exp(abs(self.a))

    def params(self):
        return {"a": [self.a.real, self.a.imag]}


class Identity(ClosedForm):
    kind = "identity"

    def h_derivative(self, n, z):
        z = np.asarray(z, dtype=complex)
        if n == 0:
            return z.copy()
        return np.full_like(z, 1.0 if n == 1 else 0.0)

    def g_derivative(self, n, z):
        return np.zeros_like(np.asarray(z, dtype=complex))

    def taylor(self, order):
        a = np.zeros(order + 1, dtype=complex)
        a[1] = 1
        return a, np.zeros(order + 1, dtype=complex)

    def is_constant(self):
        return False

    def is_analytic(self):
        return True

    def known_sup(self):
        return 1.0

    def known_re_sup(self):
        return 1.0

    def params(self):
        return {}


class MobiusMap(ClosedForm):
    """Analytic map (a z + b)/(c z + d) with its pole off the open disk."""

    kind = "mobius"

    def __init__(self, a=1.0, b=0.0, c=0.0, d=1.0):
        self.coef = tuple(complex(x) for x in (a, b, c, d))
        a, b, c, d = self.coef
        if c != 0 and abs(d / c) < 1:
            raise DomainError("pole inside the unit disk")
        if d == 0:
            raise DomainError("pole at the origin")

    def h_derivative(self, n, z):
        a, b, c, d = self.coef
        if n == 0:
            return (a * z + b) / (c * z + d)
        return (-1) ** (n + 1) * math.factorial(n) * c ** (n - 1) * (a * d - b * c) / (c * z + d) ** (n + 1)

    def g_derivative(self, n, z):
        return np.zeros_like(np.asarray(z, dtype=complex))

    def taylor(self, order):
        a, b, c, d = self.coef
        n = np.arange(1, order + 1)
        out = np.zeros(order + 1, dtype=complex)
        out[0] = b / d
        out[1:] = (-c / d) ** (n - 1) * (a * d - b * c) / d ** 2
        return out, np.zeros(order + 1, dtype=complex)

    def is_constant(self):
        a, b, c, d = self.coef
        return a * d - b * c == 0

    def is_analytic(self):
        return True

    def params(self):
        return {k: [v.real, v.imag] for k, v in zip("abcd", self.coef)}


class LogRatio(ClosedForm):
    """Analytic map scale * log((1 + z)/(1 - z))."""

    kind = "log_ratio"
    _ABCD = (1, 1, -1, 1)

    def __init__(self, scale=0.5):
        self.scale = complex(scale)

    def h_derivative(self, n, z):
        if n == 0:
            return self.scale * 2 * np.arctanh(z)
        return self.scale * _log_ratio_derivative(n, z, *self._ABCD)

    def g_derivative(self, n, z):
        return np.zeros_like(np.asarray(z, dtype=complex))

    def taylor(self, order):
        return self.scale * _log_ratio_taylor(order, *self._ABCD), np.zeros(order + 1, dtype=complex)

    def is_constant(self):
        return self.scale == 0

    def known_re_sup(self):
        # Re(scale * L) = Re(scale) log|.| - Im(scale) arg(.), and |arg| < pi/2
        if self.scale.real == 0:
            return abs(self.scale.imag) * math.pi / 2
        return None

    def is_analytic(self):
        return True

    def params(self):
        return {"scale": [self.scale.real, self.scale.imag]}


# --------------------------------------------------------------------------
# pointwise operations


def _check_order(f, n):
    if n < 0:
        raise UnsupportedOrder(f"negative derivative order {n}")
    if f.max_order is not None and n > f.max_order:
        raise UnsupportedOrder(f"{type(f).__name__} implements derivatives up to order {f.max_order}")


def evaluate(f, z):
    """h(z) + conj(g(z))."""
    zz = _points(z)
    value = f.h_derivative(0, zz) + np.conj(f.g_derivative(0, zz))
    return _scalar_out(value, z)


def wirtinger_derivative(f, n, conjugated, z):
    """d^n f / dz^n = h^(n)(z), or d^n f / dzbar^n = conj(g^(n)(z))."""
    if n < 1:
        raise UnsupportedOrder("Wirtinger derivative order must be >= 1")
    _check_order(f, n)
    zz = _points(z)
    if conjugated:
        value = np.conj(f.g_derivative(n, zz))
    else:
        value = f.h_derivative(n, zz)
    return _scalar_out(value, z)


def first_derivatives(f, z):
    """(h'(z), g'(z)) as arrays."""
    zz = _points(z)
    return f.h_derivative(1, zz), f.g_derivative(1, zz)


def lambda_values(f, z):
    """(Lambda_f, lambda_f) = (|h'| + |g'|, ||h'| - |g'||) as arrays."""
    hp, gp = first_derivatives(f, z)
    ah, ag = np.abs(hp), np.abs(gp)
    return ah + ag, np.abs(ah - ag)


def dilatation(f, z):
    hp, gp = first_derivatives(f, z)
    if np.any(hp == 0):
        raise DegenerateDerivative("h' vanishes; dilatation undefined")
    return _scalar_out(gp / hp, z)


@dataclass(frozen=True)
class PointProfile:
    z: complex
    hp: complex
    gp: complex
    omega: complex | None
    jacobian: float
    lambda_big: float
    lambda_small: float


def point_profile(f, z):
    hp, gp = first_derivatives(f, complex(z))
    hp, gp = complex(hp), complex(gp)
    if hp == 0:
        raise DegenerateDerivative(f"h'({z}) = 0")
    ah, ag = abs(hp), abs(gp)
    return PointProfile(
        z=complex(z), hp=hp, gp=gp, omega=gp / hp,
        jacobian=ah * ah - ag * ag, lambda_big=ah + ag, lambda_small=abs(ah - ag),
    )


def _require_nonconstant(f):
    if f.is_constant():
        raise DegenerateMap("constant map")


def sup_modulus(f, grid=DEFAULT_GRID, n_refine=16):
    """Grid estimate (from below) of sup |f| over |z| <= grid.r_max.

    The outer circle is refined around its discrete local maxima (a dense
    local resample, then golden-section search); by subharmonicity of |f|
    that circle carries the maximum.
    """
    z = grid.points()
    values = np.abs(evaluate(f, z))
    best = float(values.max())
    outer = values[grid.ring(grid.n_radial)]
    peaks = np.flatnonzero((outer >= np.roll(outer, 1)) & (outer >= np.roll(outer, -1)))
    if len(peaks) == 0:
        return best
    peaks = peaks[np.argsort(outer[peaks])[::-1][:n_refine]]
    theta = grid.angles()[peaks]
    step = 2 * np.pi / grid.n_angular
    r = grid.r_max

    def on_circle(t):
        u = r * np.exp(1j * t)
        return np.abs(f.h_derivative(0, u) + np.conj(f.g_derivative(0, u)))

    fine = 32
    offsets = step * np.arange(-fine, fine + 1) / fine
    local = on_circle(theta[:, None] + offsets[None, :])
    k = np.argmax(local, axis=1)
    centre = theta + offsets[k]
    _, refined = golden_maximize(on_circle, centre - step / fine, centre + step / fine, iters=14)
    return max(best, float(local.max()), float(refined.max()))


def sup_inf_lambda(f, grid=DEFAULT_GRID, literal_sup=False):
    """(M_f_hat, m_f_hat): grid max of Lambda_f and grid min of lambda_f.

    ``literal_sup=True`` returns the grid max of lambda_f for m_f instead.
    """
    _require_nonconstant(f)
    big, small = lambda_values(f, grid.points())
    m = small.max() if literal_sup else small.min()
    return float(big.max()), float(m)
