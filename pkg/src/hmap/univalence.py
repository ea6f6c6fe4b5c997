"""Univalency criteria and a brute-force injectivity oracle.

The criteria are one-sided: a ``True`` certificate means univalent (at grid
scale), a ``False`` says nothing.  The oracle is the independent check used
to audit them.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial import cKDTree

from .core import (
    DEFAULT_GRID,
    ExpLine,
    PolynomialMap,
    evaluate,
    golden_maximize,
    sup_inf_lambda,
)
from .errors import DegenerateDerivative, DegenerateMap, DomainError, HmapError

JOHN_THRESHOLD = math.exp(math.pi / 2)
JOHN_UPPER = math.exp(math.pi)


def _analytic_ratio(F, z):
    d1 = F.h_derivative(1, z)
    if np.any(d1 == 0):
        raise DegenerateDerivative("F' vanishes on the grid")
    return F.h_derivative(2, z) / d1


def pre_schwarzian_norm(F, grid=DEFAULT_GRID):
    """Grid sup of (1 - |z|^2) |F''/F'|, refined by golden section along the worst ray."""
    if not F.is_analytic():
        raise DomainError("pre-Schwarzian norm needs an analytic map")
    z = grid.points()
    values = (1 - np.abs(z) ** 2) * np.abs(_analytic_ratio(F, z))
    i = int(np.argmax(values))
    best = float(values[i])
    if i == 0:
        return best
    radii = grid.radii()
    j = (i - 1) // grid.n_angular + 1
    theta = grid.angles()[(i - 1) % grid.n_angular]
    lo, hi = radii[j - 1], radii[min(j + 1, grid.n_radial)]
    u = np.exp(1j * theta)

    def along_ray(r):
        w = r * u
        return (1 - r * r) * np.abs(_analytic_ratio(F, w))

    _, refined = golden_maximize(along_ray, [lo], [hi])
    return max(best, float(refined[0]))


def becker_certify(F, grid=DEFAULT_GRID):
    return pre_schwarzian_norm(F, grid) <= 1


@dataclass(frozen=True)
class JohnProfile:
    M_f_hat: float
    m_f_hat: float
    mu_f: float
    criterion_value: float
    certified: bool


def john_certify(f, grid=DEFAULT_GRID, tol=1e-12):
    """Certificate (2/pi) log(M_f/m_f) <= 1 from grid estimates of M_f and m_f."""
    M, m = sup_inf_lambda(f, grid)
    if m <= 0:
        raise DegenerateMap("lambda_f vanishes on the grid")
    mu = M / m
    value = 2 / math.pi * math.log(mu)
    return JohnProfile(M, m, mu, value, value <= 1 + tol)


@dataclass(frozen=True)
class HSweep:
    value: float
    worst_theta: float
    worst_point: complex
    bound: float

    @property
    def margin(self):
        return self.bound - self.value


def theta_sweep_H_bound(f, grid=DEFAULT_GRID, n_theta=16):
    """max over theta, z of (1-|z|^2)|(h'' + e^{it} g'')/(h' + e^{it} g')| vs (2/pi) log(M_f/m_f)."""
    M, m = sup_inf_lambda(f, grid)
    if m <= 0:
        raise DegenerateMap("lambda_f vanishes on the grid")
    z = grid.points()
    h1, h2 = f.h_derivative(1, z), f.h_derivative(2, z)
    g1, g2 = f.g_derivative(1, z), f.g_derivative(2, z)
    weight = 1 - np.abs(z) ** 2
    best = (-1.0, 0.0, 0j)
    for k in range(n_theta):
        theta = 2 * math.pi * k / n_theta
        rot = np.exp(1j * theta)
        denom = h1 + rot * g1
        if np.any(denom == 0):
            raise DegenerateDerivative(f"F_theta' vanishes (theta={theta})")
        values = weight * np.abs((h2 + rot * g2) / denom)
        i = int(np.argmax(values))
        if values[i] > best[0]:
            best = (float(values[i]), theta, complex(z[i]))
    return HSweep(best[0], best[1], best[2], 2 / math.pi * math.log(M / m))


# --------------------------------------------------------------------------
# injectivity oracle


@dataclass(frozen=True)
class InjectivityWitness:
    z1: complex
    z2: complex
    image_distance: float

    def to_dict(self):
        return {"z1": [self.z1.real, self.z1.imag], "z2": [self.z2.real, self.z2.imag],
                "separation": abs(self.z1 - self.z2), "image_distance": self.image_distance}


def neighbour_lengths(grid, w):
    """Image-space lengths of radial and angular grid edges."""
    rings = w[1:].reshape(grid.n_radial, grid.n_angular)
    angular = np.abs(rings - np.roll(rings, -1, axis=1)).ravel()
    radial = np.abs(np.diff(np.vstack([np.full(grid.n_angular, w[0]), rings]), axis=0)).ravel()
    return np.concatenate([angular, radial])


def _newton_partner(f, target, z, iters=40):
    """Solve f(z) = target from the starting point z (real 2x2 Newton in complex form)."""
    for _ in range(iters):
        if abs(z) >= 1:
            return None
        e = target - evaluate(f, z)
        if abs(e) < 1e-15 * (1 + abs(target)):
            return z
        hp, gp = complex(f.h_derivative(1, z)), complex(f.g_derivative(1, z))
        jac = abs(hp) ** 2 - abs(gp) ** 2
        if jac == 0:
            return None
        z = z + (hp.conjugate() * e - gp.conjugate() * e.conjugate()) / jac
    return z if abs(z) < 1 else None


def injectivity_oracle(f, grid=DEFAULT_GRID, collision_tol=None, max_candidates=64):
    """Search for z1 != z2 with f(z1) = f(z2).

    Image points are bucketed with a k-d tree; pairs that are close in the
    image but at least two grid spacings apart in the disk are refined by
    Newton's method on f(z2) = f(z1).  Returns an :class:`InjectivityWitness`
    or ``None``.
    """
    z = grid.points()
    w = evaluate(f, z)
    lengths = neighbour_lengths(grid, w)
    positive = lengths[lengths > 0]
    if collision_tol is None:
        collision_tol = max(0.5 * positive.min(), 1e-7) if len(positive) else 1e-7
    radius = max(collision_tol, float(np.median(positive)) if len(positive) else 0.0)
    min_sep = 2 * grid.spacing
    pts = np.column_stack([w.real, w.imag])
    pairs = cKDTree(pts).query_pairs(radius, output_type="ndarray")
    if len(pairs) == 0:
        return None
    i, j = pairs[:, 0], pairs[:, 1]
    keep = np.abs(z[i] - z[j]) >= min_sep
    i, j = i[keep], j[keep]
    if len(i) == 0:
        return None
    dist = np.abs(w[i] - w[j])
    order = np.argsort(dist, kind="stable")[:max_candidates]
    for k in order:
        z1, z2 = complex(z[i[k]]), complex(z[j[k]])
        refined = _newton_partner(f, complex(w[i[k]]), z2)
        if refined is not None and abs(refined - z1) >= min_sep:
            gap = abs(evaluate(f, refined) - w[i[k]])
            if gap <= collision_tol:
                return InjectivityWitness(z1, refined, float(gap))
        if dist[k] <= collision_tol:
            return InjectivityWitness(z1, z2, float(dist[k]))
    return None


# --------------------------------------------------------------------------
# bracketing experiment for the harmonic John constant


def _sweep_values(sweep):
    if isinstance(sweep, dict):
        start, stop, step = sweep["start"], sweep["stop"], sweep["step"]
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 12) for k in range(n)]
    return list(sweep)


def family_maps(family):
    """Expand a family description into ``(params, map)`` pairs.

    Supported kinds: ``exp_line`` (parameter ``a``), ``quadratic``
    (f = z + b conj(z^2), parameter ``b``) and ``maps`` (explicit list of map
    descriptions, see :mod:`hmap.io`).
    """
    if not family:
        return []
    kind = family.get("kind")
    if kind == "exp_line":
        return [({"a": a}, ExpLine(a)) for a in _sweep_values(family["a"])]
    if kind == "quadratic":
        return [({"b": b}, PolynomialMap([0, 1], [0, 0, b])) for b in _sweep_values(family["b"])]
    if kind == "maps":
        from .io import map_from_dict

        return [({"index": k}, map_from_dict(d)) for k, d in enumerate(family["maps"])]
    raise DomainError(f"unknown family kind {kind!r}")


@dataclass
class JohnRow:
    params: dict
    mu_f: float | None = None
    criterion_value: float | None = None
    certified: bool | None = None
    witness: InjectivityWitness | None = None
    error: str | None = None

    def to_dict(self):
        d = asdict(self)
        d["witness"] = self.witness.to_dict() if self.witness else None
        return d


@dataclass
class JohnExperiment:
    rows: list

    @property
    def contradictions(self):
        """Certified rows for which the oracle found a collision (must be empty)."""
        return [r for r in self.rows if r.certified and r.witness is not None]

    @property
    def upper_specimen(self):
        """Smallest mu_f among maps shown non-injective: a grid-scale upper bound on gamma."""
        mus = [r.mu_f for r in self.rows if r.witness is not None and r.mu_f is not None]
        return min(mus) if mus else None

    def summary(self):
        specimen = self.upper_specimen
        return {
            "rows": len(self.rows),
            "certified": sum(bool(r.certified) for r in self.rows),
            "non_injective": sum(r.witness is not None for r in self.rows),
            "contradictions": len(self.contradictions),
            "gamma_lower_theorem": JOHN_THRESHOLD,
            "gamma_upper_theorem": JOHN_UPPER,
            "gamma_upper_specimen": specimen,
            # a specimen below e^{pi/2} would contradict the lower bound
            "consistent": not self.contradictions and (specimen is None or specimen > JOHN_THRESHOLD),
        }


def john_experiment(family, grid=DEFAULT_GRID, oracle=True):
    rows = []
    for params, f in family_maps(family):
        row = JohnRow(params)
        try:
            profile = john_certify(f, grid)
            row.mu_f = profile.mu_f
            row.criterion_value = profile.criterion_value
            row.certified = profile.certified
            if oracle:
                row.witness = injectivity_oracle(f, grid)
        except HmapError as exc:
            row.error = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return JohnExperiment(rows)
