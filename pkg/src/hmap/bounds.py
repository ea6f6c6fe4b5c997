"""Right-hand sides of the Schwarz-Pick type inequalities and grid verifiers.

Every verifier sweeps a :class:`~hmap.core.GridSpec`, evaluates LHS and RHS
pointwise and keeps the worst margin ``rhs - lhs``.  The sup bound M defaults
to the closed-form supremum when the map knows it, otherwise to the grid
estimate from :func:`~hmap.core.sup_modulus`, which is a lower bound of the
true M and so makes a pass conservative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_GRID,
    DEFAULT_ORDER,
    GridSpec,
    NormalizedMap,
    PolynomialMap,
    _points,
    dilatation,
    evaluate,
    lambda_values,
    sup_modulus,
)
from .errors import DegenerateMap, DilatationBoundViolated, DomainError

TOL = 1e-9


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise DomainError("radius must lie in [0, 1)")
    return r


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError("derivative order must be a positive integer")
    return int(n)


def _check_M(M):
    if not M > 0:
        raise DomainError("M must be positive")


def _check_modulus(w):
    w = np.asarray(w, dtype=float)
    if np.any(w < 0) or np.any(w > 1):
        raise DomainError("|f(z)| must lie in [0, 1] for a self-map of the disk")
    return w


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def rhs_schwarz_pick_harmonic(n, M, r):
    """n! (4M/pi) / ((1-r)^n (1+r))."""
    n = _check_n(n)
    _check_M(M)
    r = _check_r(r)
    return _out(math.factorial(n) * 4 * M / math.pi / ((1 - r) ** n * (1 + r)))


def rhs_colonna(M, r):
    _check_M(M)
    r = _check_r(r)
    return _out(4 * M / math.pi / (1 - r * r))


def rhs_thmA(n, M, r):
    """n! M / (1-r)^(n+1), bound for each Wirtinger derivative separately."""
    n = _check_n(n)
    _check_M(M)
    r = _check_r(r)
    return _out(math.factorial(n) * M / (1 - r) ** (n + 1))


def rhs_ruscheweyh(n, modulus_fz, r):
    n = _check_n(n)
    w = _check_modulus(modulus_fz)
    r = _check_r(r)
    return _out(math.factorial(n) * (1 - w * w) / ((1 - r) ** n * (1 + r)))


def rhs_szasz(m, r):
    """Bound on |f^(2m+1)(z)| for analytic self-maps."""
    m = _check_n(m)
    r = _check_r(r)
    s = sum(math.comb(m, k) ** 2 * r ** (2 * k) for k in range(m + 1))
    return _out(math.factorial(2 * m + 1) / (1 - r * r) ** (2 * m + 1) * s)


def rhs_schwarz(modulus_fz, r):
    w = _check_modulus(modulus_fz)
    r = _check_r(r)
    return _out((1 - w * w) / (1 - r * r))


# --------------------------------------------------------------------------
# grid verifiers


@dataclass
class BoundReport:
    inequality_id: str
    grid: GridSpec
    worst_margin: float
    worst_point: complex
    n: int | None
    M_used: float | None
    tol: float = TOL
    pointwise: tuple | None = field(default=None, repr=False)

    @property
    def passed(self):
        return self.worst_margin >= -self.tol

    def to_dict(self):
        return {
            "inequality": self.inequality_id,
            "n": self.n,
            "M": self.M_used,
            "worst_margin": self.worst_margin,
            "worst_point": [self.worst_point.real, self.worst_point.imag],
            "tol": self.tol,
            "grid": [self.grid.n_radial, self.grid.n_angular, self.grid.r_max],
            "pass": self.passed,
        }


def _report(ident, grid, z, lhs, rhs, n, M, keep_pointwise):
    margin = rhs - lhs
    i = int(np.argmin(margin))
    pointwise = (z, lhs, rhs) if keep_pointwise else None
    return BoundReport(ident, grid, float(margin[i]), complex(z[i]), n, M, pointwise=pointwise)


def resolve_M(f, grid=DEFAULT_GRID, M=None):
    """Explicit M, else the map's closed-form sup, else the grid estimate."""
    if M is not None:
        return float(M)
    known = f.known_sup()
    return float(known) if known is not None else sup_modulus(f, grid)


def verify_derivative_sum_bound(f, n, grid=DEFAULT_GRID, M=None, keep_pointwise=False):
    """|h^(n)| + |g^(n)| <= n! 4M/pi / ((1-|z|)^n (1+|z|)) on the grid."""
    n = _check_n(n)
    M = resolve_M(f, grid, M)
    z = grid.points()
    lhs = np.abs(f.h_derivative(n, z)) + np.abs(f.g_derivative(n, z))
    rhs = rhs_schwarz_pick_harmonic(n, M, np.abs(z))
    return _report("thm1.1", grid, z, lhs, rhs, n, M, keep_pointwise)


def verify_colonna(f, grid=DEFAULT_GRID, M=None, keep_pointwise=False):
    """Lambda_f(z) <= 4M/pi / (1 - |z|^2)."""
    M = resolve_M(f, grid, M)
    z = grid.points()
    lhs, _ = lambda_values(f, z)
    return _report("colonna", grid, z, lhs, rhs_colonna(M, np.abs(z)), 1, M, keep_pointwise)


def verify_thmA(f, n, grid=DEFAULT_GRID, M=None, keep_pointwise=False):
    """Each of |h^(n)|, |g^(n)| separately against n! M / (1-|z|)^(n+1)."""
    n = _check_n(n)
    M = resolve_M(f, grid, M)
    z = grid.points()
    lhs = np.maximum(np.abs(f.h_derivative(n, z)), np.abs(f.g_derivative(n, z)))
    return _report("thmC", grid, z, lhs, rhs_thmA(n, M, np.abs(z)), n, M, keep_pointwise)


def real_part_sup(F, grid=DEFAULT_GRID):
    return float(np.abs(evaluate(F, grid.points()).real).max())


def verify_analytic_re_bound(F, n, grid=DEFAULT_GRID, re_sup=None, keep_pointwise=False):
    """|F^(n)(z)| <= n! 4 sup|Re F| / pi / ((1-|z|)^n (1+|z|)) for analytic F."""
    n = _check_n(n)
    if not F.is_analytic():
        raise DomainError("expected an analytic map (g = 0)")
    if F.is_constant():
        raise DegenerateMap("constant map")
    if re_sup is None:
        re_sup = F.known_re_sup()
    if re_sup is None:
        re_sup = real_part_sup(F, grid)
    if re_sup <= 0:
        raise DegenerateMap("Re F vanishes on the grid")
    z = grid.points()
    lhs = np.abs(F.h_derivative(n, z))
    rhs = rhs_schwarz_pick_harmonic(n, re_sup, np.abs(z))
    return _report("cor1.2", grid, z, lhs, rhs, n, re_sup, keep_pointwise)


def verify_self_map(F, inequality, grid=DEFAULT_GRID, n=1, keep_pointwise=False):
    """Classical bounds for analytic self-maps of the disk.

    ``inequality`` is "schwarz" (first derivative), "szasz" (order 2n+1) or
    "ruscheweyh" (order n).
    """
    if not F.is_analytic():
        raise DomainError("expected an analytic map (g = 0)")
    z = grid.points()
    w = np.abs(evaluate(F, z))
    if w.max() > 1:
        raise DomainError("map does not send the sampled disk into the unit disk")
    r = np.abs(z)
    if inequality == "schwarz":
        order, rhs = 1, rhs_schwarz(w, r)
    elif inequality == "szasz":
        order, rhs = 2 * _check_n(n) + 1, rhs_szasz(n, r)
    elif inequality == "ruscheweyh":
        order, rhs = _check_n(n), rhs_ruscheweyh(n, w, r)
    else:
        raise DomainError(f"unknown self-map inequality {inequality!r}")
    lhs = np.abs(F.h_derivative(order, z))
    return _report(inequality, grid, z, lhs, rhs, order, 1.0, keep_pointwise)


# --------------------------------------------------------------------------
# coefficients


@dataclass
class CoefficientReport:
    kind: str
    entries: list  # (n, |a_n| + |b_n|, bound)
    a0_margin: float | None = None
    tol: float = TOL

    @property
    def margins(self):
        return np.array([bound - value for _, value, bound in self.entries])

    @property
    def worst_index(self):
        return self.entries[int(np.argmin(self.margins))][0] if self.entries else None

    @property
    def worst_margin(self):
        m = float(self.margins.min()) if self.entries else math.inf
        if self.a0_margin is not None:
            m = min(m, self.a0_margin)
        return m

    @property
    def passed(self):
        return self.worst_margin >= -self.tol

    def to_dict(self):
        return {
            "kind": self.kind,
            "entries": [[n, v, b] for n, v, b in self.entries],
            "a0_margin": self.a0_margin,
            "worst_index": self.worst_index,
            "worst_margin": self.worst_margin,
            "pass": self.passed,
        }


def _require_polynomial(f):
    if not isinstance(f, PolynomialMap):
        raise DomainError("coefficient checks need a polynomial representation (use to_polynomial)")


def coefficient_bound_check(f, M=None, grid=DEFAULT_GRID, order=DEFAULT_ORDER):
    """|a_0| <= M and |a_n| + |b_n| <= 4M/pi for n >= 1.

    Closed forms are expanded to ``order`` Taylor coefficients and keep their
    exact sup as M.
    """
    M = resolve_M(f, grid, M)
    if not isinstance(f, PolynomialMap):
        f = f.to_polynomial(order)
    bound = 4 * M / math.pi
    total = np.abs(f.a) + np.abs(f.b)
    entries = [(n, float(total[n]), bound) for n in range(1, len(total))]
    return CoefficientReport("lemmaA", entries, a0_margin=float(M - abs(f.a[0])))


def coefficient_growth_check(f):
    """|a_n| + |b_n| <= n for n >= 2."""
    _require_polynomial(f)
    total = np.abs(f.a) + np.abs(f.b)
    return CoefficientReport("growth", [(n, float(total[n]), float(n)) for n in range(2, len(total))])


@dataclass(frozen=True)
class B2Check:
    b2: complex
    c: float
    margin: float
    sharp: bool


def b2_bound_check(f, c, grid=DEFAULT_GRID, tol=1e-12):
    """c/2 - |b_2| for a normalised map whose dilatation is bounded by c."""
    f = NormalizedMap.from_map(f)
    omega_max = float(np.abs(dilatation(f, grid.points())).max())
    if omega_max > c + tol:
        raise DilatationBoundViolated(f"max |omega| on the grid is {omega_max} > c = {c}")
    b2 = complex(f.b[2]) if len(f.b) > 2 else 0j
    margin = c / 2 - abs(b2)
    return B2Check(b2, float(c), float(margin), abs(margin) <= tol)


@dataclass(frozen=True)
class DistortionCheck:
    lhs: float
    rhs: float
    margin: float
    rhs_sharp: float
    margin_sharp: float


def verify_distortion_lower(f, c1, xi, rho, r):
    """Lambda_f(r xi) against 2^-(1+c1) Lambda_f(rho xi) ((1-r)/(1-rho))^(c1-1).

    Also reports the intermediate form with ((1+rho)/(1+r))^(c1+1) in place
    of 2^-(1+c1).
    """
    xi = complex(xi)
    if abs(abs(xi) - 1) > 1e-12:
        raise DomainError("xi must be unimodular")
    if not 0 <= rho <= r < 1:
        raise DomainError("need 0 <= rho <= r < 1")
    big, _ = lambda_values(f, np.array([r * xi, rho * xi]))
    lam_r, lam_rho = float(big[0]), float(big[1])
    ratio = ((1 - r) / (1 - rho)) ** (c1 - 1)
    rhs = lam_rho * ratio / 2 ** (1 + c1)
    rhs_sharp = lam_rho * ratio * ((1 + rho) / (1 + r)) ** (c1 + 1)
    return DistortionCheck(lam_r, rhs, lam_r - rhs, rhs_sharp, lam_r - rhs_sharp)


@dataclass
class LipschitzFit:
    c2: float
    c3: float
    worst_pair: tuple
    table: list  # (c3, c2)


def boundary_lipschitz_fit(f, n_boundary_samples=256, r=0.999, c3_values=None):
    """Empirical (c2, c3) with |f(z1) - f(z2)| >= c2 |z1 - z2|^c3 on |z| = r.

    For each c3 the largest admissible c2 is the minimum pairwise ratio; the
    reported pair is the smallest c3 whose c2 is positive.  Exploratory only.
    """
    if c3_values is None:
        c3_values = np.round(np.arange(1.0, 2.0, 0.05), 10)
    t = 2 * np.pi * np.arange(n_boundary_samples) / n_boundary_samples
    z = r * np.exp(1j * t)
    w = evaluate(f, _points(z))
    i, j = np.triu_indices(n_boundary_samples, k=1)
    dz = np.abs(z[i] - z[j])
    dw = np.abs(w[i] - w[j])
    table = []
    for c3 in c3_values:
        ratio = dw / dz ** c3
        k = int(np.argmin(ratio))
        table.append((float(c3), float(ratio[k]), (complex(z[i[k]]), complex(z[j[k]]))))
    for c3, c2, pair in table:
        if c2 > 1e-12:
            return LipschitzFit(c2, c3, pair, [(a, b) for a, b, _ in table])
    c3, c2, pair = table[-1]
    return LipschitzFit(c2, c3, pair, [(a, b) for a, b, _ in table])
