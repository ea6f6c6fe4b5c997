"""Randomised search for counterexamples to the derivative and coefficient bounds.

Each map gets its own generator ``default_rng([seed, index])`` so results do
not depend on how the run is split across workers.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds, series
from .core import DEFAULT_GRID, PolynomialMap, dilatation, sup_modulus
from .errors import HmapError
from .transforms import shear

MAX_DEGREE = 8
SHEAR_EVERY = 4
SHEAR_C_MAX = 0.6
SHEAR_ORDER = 16
ORDERS = (1, 2, 3, 4, 5)

COLUMNS = (["index", "kind", "degree", "scale"] + [f"thm1.1_n{n}" for n in ORDERS]
           + ["colonna", "lemmaA", "b2", "growth", "min_margin", "violation"])


def _gaussian(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def random_polynomial_map(rng):
    deg = int(rng.integers(1, MAX_DEGREE + 1))
    a = _gaussian(rng, deg + 1)
    b = np.concatenate([[0], _gaussian(rng, deg)])
    return PolynomialMap(a, b), deg


def random_shear_map(rng, grid=DEFAULT_GRID):
    """Shear of F = z with omega = c z q(z), q a random cubic with max |q| = 1 on the circle."""
    q = _gaussian(rng, 4)
    t = 2 * np.pi * np.arange(1024) / 1024
    q /= np.abs(series.evaluate(q, np.exp(1j * t))).max()
    c = float(rng.uniform(0.05, SHEAR_C_MAX))
    f = shear([0, 1], c * np.concatenate([[0], q]), order=SHEAR_ORDER, grid=grid)
    # the dilatation bound actually met: sampled circle sup of omega, or the
    # grid sup of the truncated map's own dilatation if that is larger
    bound = max(f.omega_sup(16384), float(np.abs(dilatation(f, grid.points())).max()))
    return f, bound


def check_map(index, seed, grid=DEFAULT_GRID, tol=bounds.TOL):
    rng = np.random.default_rng([seed, index])
    row = dict.fromkeys(COLUMNS, "")
    row["index"] = index
    if index % SHEAR_EVERY == SHEAR_EVERY - 1:
        f, c = random_shear_map(rng, grid)
        row["kind"] = "shear"
        row["b2"] = bounds.b2_bound_check(f, c, grid).margin
        row["growth"] = bounds.coefficient_growth_check(f).worst_margin
    else:
        f, _ = random_polynomial_map(rng)
        row["kind"] = "polynomial"
    row["degree"] = f.truncation_order
    scale = sup_modulus(f, grid)
    row["scale"] = scale
    # rescaled so the grid sup-modulus is 1
    g = PolynomialMap(f.a / scale, f.b / scale)
    for n in ORDERS:
        row[f"thm1.1_n{n}"] = bounds.verify_derivative_sum_bound(g, n, grid, M=1.0).worst_margin
    row["colonna"] = bounds.verify_colonna(g, grid, M=1.0).worst_margin
    row["lemmaA"] = bounds.coefficient_bound_check(g, M=1.0).worst_margin
    margins = [v for k, v in row.items() if k not in ("index", "kind", "degree", "scale") and v != ""]
    row["min_margin"] = min(margins)
    row["violation"] = row["min_margin"] < -tol
    return row


def _chunk(args):
    start, stop, seed, grid, tol = args
    return [check_map(i, seed, grid, tol) for i in range(start, stop)]


@dataclass
class FalsifyResult:
    rows: list
    seed: int
    grid: object
    tol: float

    @property
    def violations(self):
        return [r for r in self.rows if r["violation"]]

    def minima(self):
        out = {}
        for key in COLUMNS[4:-1]:
            vals = [r[key] for r in self.rows if r[key] != ""]
            out[key] = min(vals) if vals else None
        return out

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(r[k]) for k in COLUMNS])
        return buf.getvalue()

    def summary(self):
        return {"count": len(self.rows), "seed": self.seed, "tol": self.tol,
                "violations": len(self.violations), "minimal_margins": self.minima()}


def _fmt(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def threads():
    try:
        return max(1, int(os.environ.get("HMAP_THREADS", "1")))
    except ValueError:
        return 1


def falsify(count, seed=0, grid=DEFAULT_GRID, tol=bounds.TOL, workers=None):
    """Run ``count`` random maps through the gated verifiers.

    Violations are findings, not errors.  ``workers`` defaults to
    ``HMAP_THREADS`` (1 when unset); rows are merged in index order, so the
    output is identical for any worker count.
    """
    if count < 1:
        raise HmapError("count must be >= 1")
    workers = threads() if workers is None else workers
    if workers <= 1:
        rows = _chunk((0, count, seed, grid, tol))
    else:
        size = math.ceil(count / workers)
        jobs = [(s, min(s + size, count), seed, grid, tol) for s in range(0, count, size)]
        with ProcessPoolExecutor(workers) as pool:
            rows = [r for part in pool.map(_chunk, jobs) for r in part]
    return FalsifyResult(rows, seed, grid, tol)
