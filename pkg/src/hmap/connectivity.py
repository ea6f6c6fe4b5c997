"""Linear connectivity of image domains, close-to-convexity, shear criteria.

The image f(D) is discretised as the image of a polar grid joined into a
graph with Euclidean edge weights.  Dijkstra distances in this graph
approximate internal geodesic lengths from above, so ``M_hat`` is biased
upwards by a resolution-dependent factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.spatial import cKDTree

from .core import DEFAULT_GRID, GridSpec, PolynomialMap, _points, evaluate, golden_maximize, lambda_values
from .errors import ArgWrap, DegenerateDerivative, Disconnected, InadmissibleParameters, InjectivityFailure
from .transforms import rotation_harmonic
from .univalence import injectivity_oracle

MESH_SLACK = 1.10
DEFAULT_REACH = 5.0


@dataclass(frozen=True, eq=False)
class ImageMesh:
    grid: GridSpec
    preimages: np.ndarray
    vertices: np.ndarray
    graph: object  # scipy CSR matrix, upper-triangular edge list
    reach: float

    @property
    def n_vertices(self):
        return len(self.vertices)


def _polar_neighbours(grid):
    """Ring, radial and cell-diagonal adjacency of the polar grid, plus origin spokes."""
    nr, na = grid.n_radial, grid.n_angular
    idx = 1 + np.arange(nr * na).reshape(nr, na)
    pairs = [
        (idx, np.roll(idx, -1, axis=1)),
        (idx[:-1], idx[1:]),
        (idx[:-1], np.roll(idx[1:], -1, axis=1)),
        (idx[:-1], np.roll(idx[1:], 1, axis=1)),
        (np.zeros(na, dtype=int), idx[0]),
    ]
    return np.concatenate([a.ravel() for a, _ in pairs]), np.concatenate([b.ravel() for _, b in pairs])


def build_image_mesh(f, grid=DEFAULT_GRID, reach=DEFAULT_REACH, collision_tol=1e-12):
    """Image of the polar grid with Euclidean edge weights.

    Edges join polar-grid neighbours (with cell diagonals) and, in addition,
    every pair of grid points within ``reach`` radial spacings of each other
    in the disk.  The extra edges let paths run in many directions, which
    removes most of the staircase bias of a bare polar lattice (the origin
    region is badly anisotropic there).  ``reach=0`` keeps only the lattice.
    """
    z = grid.points()
    w = evaluate(f, z)
    coincide = cKDTree(np.column_stack([w.real, w.imag])).query_pairs(collision_tol, output_type="ndarray")
    if len(coincide):
        i, j = coincide[0]
        raise InjectivityFailure(f"image vertices coincide: f({z[i]}) = f({z[j]})", (complex(z[i]), complex(z[j])))
    src, dst = _polar_neighbours(grid)
    if reach > 0:
        radius = reach * grid.r_max / grid.n_radial * (1 + 1e-9)
        near = cKDTree(np.column_stack([z.real, z.imag])).query_pairs(radius, output_type="ndarray")
        src, dst = np.concatenate([src, near[:, 0]]), np.concatenate([dst, near[:, 1]])
    n = len(w)
    # duplicate entries would be summed by the sparse constructor
    key = np.unique(np.minimum(src, dst).astype(np.int64) * n + np.maximum(src, dst))
    src, dst = key // n, key % n
    weights = np.abs(w[src] - w[dst])
    graph = coo_matrix((weights, (src, dst)), shape=(n, n)).tocsr()
    return ImageMesh(grid, z, w, graph, float(reach))


def geodesic_length(mesh, i, j):
    if i == j:
        return 0.0
    d = dijkstra(mesh.graph, directed=False, indices=i)[j]
    if not np.isfinite(d):
        raise Disconnected(f"no path between vertices {i} and {j}")
    return float(d)


@dataclass
class ConnectivityEstimate:
    M_hat: float
    witness: tuple  # image points (w1, w2)
    witness_preimages: tuple
    path: list
    resolution: GridSpec
    seed: int
    n_pairs: int
    reach: float

    def to_dict(self):
        c = lambda v: [v.real, v.imag]
        return {
            "M_hat": self.M_hat,
            "witness": [c(v) for v in self.witness],
            "witness_preimages": [c(v) for v in self.witness_preimages],
            "path_length": len(self.path),
            "resolution": [self.resolution.n_radial, self.resolution.n_angular, self.resolution.r_max],
            "seed": self.seed,
            "n_pairs": self.n_pairs,
            "reach": self.reach,
        }


def _sources(grid, n_sources, rng):
    n_boundary = max(1, (3 * n_sources) // 4)
    outer = grid.ring(grid.n_radial)
    stride = max(1, grid.n_angular // n_boundary)
    boundary = np.arange(outer.start, outer.stop, stride)[:n_boundary]
    n_inner = n_sources - len(boundary)
    interior = rng.choice(np.arange(0, outer.start), size=min(n_inner, outer.start), replace=False)
    return np.concatenate([boundary, np.sort(interior)])


def linear_connectivity_estimate(f, grid=DEFAULT_GRID, n_sources=32, seed=0, reach=DEFAULT_REACH, mesh=None):
    """Largest (graph geodesic)/(chord) ratio over sampled vertex pairs.

    Sources are boundary vertices at a uniform stride plus seeded random
    interior vertices; each source is paired with every vertex, which covers
    the boundary-boundary, boundary-interior and interior strata at once.
    """
    mesh = mesh or build_image_mesh(f, grid, reach)
    n_comp, _ = connected_components(mesh.graph, directed=False)
    if n_comp != 1:
        raise Disconnected(f"image mesh has {n_comp} components")
    rng = np.random.default_rng(seed)
    sources = _sources(grid, n_sources, rng)
    dist, pred = dijkstra(mesh.graph, directed=False, indices=sources, return_predecessors=True)
    w = mesh.vertices
    chord = np.abs(w[None, :] - w[sources][:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(chord > 0, dist / chord, 1.0)
    s, t = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    path = [int(t)]
    while path[-1] != sources[s]:
        path.append(int(pred[s, path[-1]]))
    path.reverse()
    src = int(sources[s])
    return ConnectivityEstimate(
        M_hat=float(ratio[s, t]),
        witness=(complex(w[src]), complex(w[t])),
        witness_preimages=(complex(mesh.preimages[src]), complex(mesh.preimages[t])),
        path=path,
        resolution=grid,
        seed=seed,
        n_pairs=int(ratio.size - len(sources)),
        reach=mesh.reach,
    )


def close_to_convex_alpha(F, phi, grid=DEFAULT_GRID):
    """(2/pi) sup |arg(F'/phi')|, with the argument tracked continuously along radii."""
    z = grid.points()
    num, den = F.h_derivative(1, z), phi.h_derivative(1, z)
    if np.any(num == 0) or np.any(den == 0):
        raise DegenerateDerivative("F' or phi' vanishes on the grid")
    ratio = num / den
    origin = np.angle(ratio[0])
    rings = np.angle(ratio[1:]).reshape(grid.n_radial, grid.n_angular)
    radial = np.vstack([np.full(grid.n_angular, origin), rings])
    tracked = np.unwrap(radial, axis=0)
    if np.abs(tracked).max() >= math.pi:
        raise ArgWrap("arg(F'/phi') reaches pi along a radius")
    j, k = np.unravel_index(int(np.argmax(np.abs(tracked))), tracked.shape)
    best = float(np.abs(tracked[j, k]))
    if j > 0:
        r = grid.radii()[j]
        step = 2 * math.pi / grid.n_angular
        theta = grid.angles()[k]

        def on_ring(t):
            u = r * np.exp(1j * t)
            return np.abs(np.angle(F.h_derivative(1, u) / phi.h_derivative(1, u)))

        _, refined = golden_maximize(on_ring, [theta - step], [theta + step])
        best = max(best, float(refined[0]))
    return 2 / math.pi * best


@dataclass(frozen=True)
class CriterionConstants:
    alpha: float
    M1: float | None = None
    M2: float | None = None
    M3: float | None = None
    M4: float | None = None
    K: float | None = None


def criterion_constants(alpha, m, which):
    """Constants of the shear univalency criteria.

    which="I":  M2 = 1/(cos(a pi/2) - M1 (1 + cos(a pi/2))), needs M1 < cos/(1 + cos).
    which="II": K = (1+M3)/(1-M3), M4 = (1+M3)/(cos(a pi/2) - M3 (2 + cos(a pi/2))),
                needs M3 < cos/(2 + cos).
    """
    if not 0 <= alpha < 1:
        raise InadmissibleParameters("alpha must lie in [0, 1)")
    if m < 0:
        raise InadmissibleParameters("dilatation bound must be nonnegative")
    c = math.cos(alpha * math.pi / 2)
    if which == "I":
        limit = c / (1 + c)
        if not m < limit:
            raise InadmissibleParameters(f"M1 = {m} violates M1 < cos(alpha pi/2)/(1 + cos(alpha pi/2)) = {limit}")
        return CriterionConstants(alpha, M1=m, M2=1 / (c - m * (1 + c)))
    if which == "II":
        limit = c / (2 + c)
        if not m < limit:
            raise InadmissibleParameters(f"M3 = {m} violates M3 < cos(alpha pi/2)/(2 + cos(alpha pi/2)) = {limit}")
        return CriterionConstants(alpha, M3=m, M4=(1 + m) / (c - m * (2 + c)), K=(1 + m) / (1 - m))
    raise InadmissibleParameters(f"unknown criterion part {which!r}")


@dataclass
class PartResult:
    part: str
    constants: CriterionConstants
    checks: list = field(default_factory=list)  # dicts, one per map checked

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks)


def verify_theorem16(f, alpha_hat, grid=DEFAULT_GRID, n_theta=8, parts=("I", "II"), slack=MESH_SLACK,
                     omega_bound=None, connectivity=True, n_sources=32, seed=0):
    """Audit both shear criteria on a :class:`~hmap.transforms.ShearedMap`.

    Part I: h injective on the grid and M_hat(h(D)) <= M2 * slack.
    Part II: for each theta, f_theta injective, M_hat(f_theta(D)) <= M4 * slack
    and Lambda/lambda <= K pointwise.
    """
    bound = f.omega_sup() if omega_bound is None else float(omega_bound)
    results = []
    if "I" in parts:
        part = PartResult("I", criterion_constants(alpha_hat, bound, "I"))
        h = PolynomialMap(f.a, [0])
        part.checks.append(_connectivity_check(h, grid, part.constants.M2 * slack, connectivity, n_sources, seed))
        results.append(part)
    if "II" in parts:
        consts = criterion_constants(alpha_hat, bound, "II")
        part = PartResult("II", consts)
        z = grid.points()
        for k in range(n_theta):
            theta = 2 * math.pi * k / n_theta
            ft = rotation_harmonic(f, theta)
            check = _connectivity_check(ft, grid, consts.M4 * slack, connectivity, n_sources, seed)
            big, small = lambda_values(ft, z)
            worst = float((big / small).max())
            check["theta"] = theta
            check["max_dilatation_ratio"] = worst
            check["pass"] = check["pass"] and worst <= consts.K * (1 + 1e-12)
            part.checks.append(check)
        results.append(part)
    return results


def _connectivity_check(g, grid, limit, connectivity, n_sources, seed):
    witness = injectivity_oracle(g, grid)
    out = {"witness": witness.to_dict() if witness else None, "limit": limit, "M_hat": None}
    ok = witness is None
    if connectivity and ok:
        est = linear_connectivity_estimate(g, grid, n_sources=n_sources, seed=seed)
        out["M_hat"] = est.M_hat
        ok = est.M_hat <= limit
    out["pass"] = ok
    return out


def conjecture15_experiment(f, grid=DEFAULT_GRID, n_rays=8):
    """Minimal exponent c4 with Lambda(r xi) >= Lambda(rho xi)/8 ((1-r)/(1-rho))^(c4-1).

    Rows (ray angle, rho, r, c4_min) for every pair of grid radii rho < r.
    Exploratory only.
    """
    radii = grid.radii()
    rows = []
    for k in range(n_rays):
        t = 2 * math.pi * k / n_rays
        big, _ = lambda_values(f, _points(radii * np.exp(1j * t)))
        i, j = np.triu_indices(len(radii), k=1)
        rho, r = radii[i], radii[j]
        # log t < 0 for rho < r, so the condition is c4 - 1 >= log(8 L_r / L_rho) / log t
        c4 = 1 + np.log(8 * big[j] / big[i]) / np.log((1 - r) / (1 - rho))
        rows.extend(zip([t] * len(i), rho.tolist(), r.tolist(), c4.tolist()))
    return rows
