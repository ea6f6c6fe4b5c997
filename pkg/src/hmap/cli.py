"""``hmap`` command-line interface.

Exit codes: 0 when every check passes, 1 on an inequality violation or a
univalence certificate contradicted by the injectivity oracle, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import bounds, connectivity, univalence
from .core import DEFAULT_GRID, GridSpec, evaluate, point_profile
from .errors import ConfigError, HmapError
from .falsify import falsify
from .io import dumps, envelope, load_json, load_map, to_jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    maps: list = field(default_factory=list)
    grid: GridSpec = DEFAULT_GRID
    tol: float = bounds.TOL
    seed: int | None = None
    fmt: str = "json"
    out: str | None = None

    def to_dict(self):
        return {"command": self.command, "maps": self.maps,
                "grid": {"n_radial": self.grid.n_radial, "n_angular": self.grid.n_angular, "r_max": self.grid.r_max},
                "tol": self.tol, "seed": self.seed, "format": self.fmt}


def parse_resolution(text):
    try:
        r, a = text.lower().split("x")
        return int(r), int(a)
    except ValueError:
        raise argparse.ArgumentTypeError(f"resolution must look like 64x256, got {text!r}") from None


def parse_point(text):
    parts = text.split(",")
    try:
        return complex(float(parts[0]), float(parts[1]) if len(parts) > 1 else 0.0)
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"point must look like 0.5,0.1 got {text!r}") from None


def parse_sweep(text):
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sweep must look like START:STOP:STEP, got {text!r}") from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("sweep needs step > 0 and stop >= start")
    return {"start": start, "stop": stop, "step": step}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--resolution", type=parse_resolution, default=None, metavar="RxA",
                        help="grid rings x angles (default 64x256)")
    common.add_argument("--r-max", type=float, default=None, help="outer grid radius (default 0.999)")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--timing", action="store_true", help="add wall time to the report")

    p = argparse.ArgumentParser(prog="hmap", description="Planar harmonic mappings of the unit disk.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="value and first derivatives at points")
    s.add_argument("--map", required=True)
    s.add_argument("--z", type=parse_point, action="append", help="point re,im (repeatable; default 0)")

    s = sub.add_parser("verify", parents=[common], help="grid check of a derivative inequality")
    s.add_argument("--map", required=True)
    s.add_argument("--inequality", required=True,
                   choices=["thm1.1", "colonna", "thmC", "cor1.2", "schwarz", "szasz", "ruscheweyh"])
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--M", type=float, default=None, help="sup bound (default: exact if known, else grid estimate)")
    s.add_argument("--tol", type=float, default=bounds.TOL)
    s.add_argument("--csv", default=None, help="dump pointwise r, theta, lhs, rhs")

    s = sub.add_parser("coeffs", parents=[common], help="coefficient bounds")
    s.add_argument("--map", required=True)
    s.add_argument("--order", type=int, default=24)
    s.add_argument("--M", type=float, default=None)
    s.add_argument("--growth", action="store_true", help="also check |a_n| + |b_n| <= n")
    s.add_argument("--b2", type=float, default=None, metavar="C", help="check |b_2| <= C/2 given |omega| <= C")
    s.add_argument("--tol", type=float, default=bounds.TOL)

    s = sub.add_parser("univalence", parents=[common], help="Becker / John certificates and injectivity oracle")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--map")
    src.add_argument("--family", help="family description JSON")
    s.add_argument("--criterion", choices=["becker", "john", "both"], default="both")
    s.add_argument("--oracle", action="store_true")
    s.add_argument("--format", choices=["json", "csv"], default="json")

    s = sub.add_parser("connectivity", parents=[common], help="linear-connectivity estimate of f(D)")
    s.add_argument("--map", required=True)
    s.add_argument("--pairs", type=int, default=32, help="number of source vertices paired with every vertex")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--reach", type=float, default=connectivity.DEFAULT_REACH)
    s.add_argument("--max-M", type=float, default=None, help="fail (exit 1) if M_hat exceeds this")

    s = sub.add_parser("criteria", parents=[common], help="shear criterion constants (optionally audit a shear map)")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--m1", type=float, default=None)
    s.add_argument("--m3", type=float, default=None)
    s.add_argument("--map", default=None, help="shear map to audit against both criteria")
    s.add_argument("--parts", default="I,II")
    s.add_argument("--thetas", type=int, default=8)
    s.add_argument("--slack", type=float, default=connectivity.MESH_SLACK)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("john-experiment", parents=[common], help="bracketing experiment for the John constant")
    fam = s.add_mutually_exclusive_group(required=True)
    fam.add_argument("--family", help="family description JSON")
    fam.add_argument("--exp-line", type=parse_sweep, metavar="START:STOP:STEP")
    fam.add_argument("--quadratic", type=parse_sweep, metavar="START:STOP:STEP")
    s.add_argument("--no-oracle", action="store_true")
    s.add_argument("--format", choices=["json", "csv"], default="json")

    s = sub.add_parser("conjecture15", parents=[common], help="minimal distortion exponents along rays (CSV)")
    s.add_argument("--map", required=True)
    s.add_argument("--rays", type=int, default=8)

    s = sub.add_parser("falsify", parents=[common], help="random search for counterexamples (CSV)")
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=bounds.TOL)
    s.add_argument("--summary", default=None, help="write the JSON summary here")
    return p


def _grid(args):
    n_r, n_a = args.resolution or (DEFAULT_GRID.n_radial, DEFAULT_GRID.n_angular)
    r_max = DEFAULT_GRID.r_max if args.r_max is None else args.r_max
    return GridSpec(n_r, n_a, r_max)


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# --------------------------------------------------------------------------
# subcommands return (results, passed, text); a non-None text (CSV) replaces
# the JSON report


def cmd_eval(args, cfg):
    f = load_map(args.map)
    out = []
    for z in args.z or [0j]:
        prof = point_profile(f, z)
        out.append({"z": z, "value": complex(evaluate(f, z)), "h_prime": prof.hp, "g_prime": prof.gp,
                    "omega": prof.omega, "jacobian": prof.jacobian,
                    "Lambda": prof.lambda_big, "lambda": prof.lambda_small})
    return out, True, None


def cmd_verify(args, cfg):
    f = load_map(args.map)
    keep = args.csv is not None
    ineq = args.inequality
    if ineq == "thm1.1":
        rep = bounds.verify_derivative_sum_bound(f, args.n, cfg.grid, args.M, keep)
    elif ineq == "colonna":
        rep = bounds.verify_colonna(f, cfg.grid, args.M, keep)
    elif ineq == "thmC":
        rep = bounds.verify_thmA(f, args.n, cfg.grid, args.M, keep)
    elif ineq == "cor1.2":
        rep = bounds.verify_analytic_re_bound(f, args.n, cfg.grid, args.M, keep)
    else:
        rep = bounds.verify_self_map(f, ineq, cfg.grid, args.n, keep)
    rep.tol = args.tol
    if keep:
        z, lhs, rhs = rep.pointwise
        rows = zip(np.abs(z).tolist(), np.angle(z).tolist(), lhs.tolist(), rhs.tolist())
        _write(_csv(["r", "theta", "lhs", "rhs"], rows), args.csv)
    return rep.to_dict(), rep.passed, None


def cmd_coeffs(args, cfg):
    f = load_map(args.map)
    poly = f if hasattr(f, "a") else f.to_polynomial(args.order)
    reports = [bounds.coefficient_bound_check(f, args.M, cfg.grid, args.order)]
    if args.growth:
        reports.append(bounds.coefficient_growth_check(poly))
    for r in reports:
        r.tol = args.tol
    results = [r.to_dict() for r in reports]
    passed = all(r.passed for r in reports)
    if args.b2 is not None:
        chk = bounds.b2_bound_check(poly, args.b2, cfg.grid)
        ok = chk.margin >= -args.tol
        results.append({"kind": "b2", "b2": chk.b2, "c": chk.c, "margin": chk.margin, "sharp": chk.sharp, "pass": ok})
        passed = passed and ok
    return results, passed, None


def _univalence_for_map(f, args, cfg):
    out = {}
    certified = False
    if args.criterion in ("becker", "both"):
        if f.is_analytic():
            norm = univalence.pre_schwarzian_norm(f, cfg.grid)
            out["becker"] = {"norm": norm, "certified": norm <= 1}
            certified |= norm <= 1
        else:
            out["becker"] = {"skipped": "map is not analytic"}
    if args.criterion in ("john", "both"):
        prof = univalence.john_certify(f, cfg.grid)
        out["john"] = to_jsonable(prof)
        certified |= prof.certified
    contradiction = False
    if args.oracle:
        w = univalence.injectivity_oracle(f, cfg.grid)
        out["oracle"] = w.to_dict() if w else None
        contradiction = certified and w is not None
    out["contradiction"] = contradiction
    return out, not contradiction


def _experiment_output(exp, fmt):
    passed = not exp.contradictions
    if fmt != "csv":
        return {"rows": [r.to_dict() for r in exp.rows], "summary": exp.summary()}, passed, None
    rows = []
    for r in exp.rows:
        w = r.witness
        rows.append([";".join(f"{k}={v}" for k, v in r.params.items()), r.mu_f, r.criterion_value,
                     r.certified, "" if w is None else abs(w.z1 - w.z2), r.error or ""])
    header = ["params", "mu_f", "criterion_value", "certified", "witness_separation", "error"]
    return None, passed, _csv(header, rows)


def cmd_univalence(args, cfg):
    if args.map:
        out, passed = _univalence_for_map(load_map(args.map), args, cfg)
        return out, passed, None
    exp = univalence.john_experiment(load_json(args.family), cfg.grid, oracle=args.oracle)
    return _experiment_output(exp, args.format)


def cmd_john(args, cfg):
    if args.family:
        family = load_json(args.family)
    elif args.exp_line:
        family = {"kind": "exp_line", "a": args.exp_line}
    else:
        family = {"kind": "quadratic", "b": args.quadratic}
    exp = univalence.john_experiment(family, cfg.grid, oracle=not args.no_oracle)
    return _experiment_output(exp, args.format)


def cmd_connectivity(args, cfg):
    f = load_map(args.map)
    est = connectivity.linear_connectivity_estimate(f, cfg.grid, n_sources=args.pairs, seed=args.seed,
                                                    reach=args.reach)
    out = est.to_dict()
    passed = True
    if args.max_M is not None:
        out["max_M"] = args.max_M
        passed = est.M_hat <= args.max_M
    return out, passed, None


def cmd_criteria(args, cfg):
    if args.m1 is None and args.m3 is None and args.map is None:
        raise UsageError("criteria needs --m1, --m3 or --map")
    out = {}
    if args.m1 is not None:
        out["I"] = to_jsonable(connectivity.criterion_constants(args.alpha, args.m1, "I"))
    if args.m3 is not None:
        out["II"] = to_jsonable(connectivity.criterion_constants(args.alpha, args.m3, "II"))
    passed = True
    if args.map is not None:
        from .transforms import ShearedMap

        f = load_map(args.map)
        if not isinstance(f, ShearedMap):
            raise ConfigError("--map must describe a shear")
        parts = tuple(p.strip() for p in args.parts.split(","))
        bound = args.m1 if args.m1 is not None else args.m3
        audit = connectivity.verify_theorem16(f, args.alpha, cfg.grid, n_theta=args.thetas, parts=parts,
                                              slack=args.slack, omega_bound=bound, seed=args.seed)
        out["audit"] = [{"part": p.part, "constants": to_jsonable(p.constants), "slack": args.slack,
                         "checks": p.checks, "pass": p.passed} for p in audit]
        passed = all(p.passed for p in audit)
    return out, passed, None


def cmd_conjecture15(args, cfg):
    f = load_map(args.map)
    rows = connectivity.conjecture15_experiment(f, cfg.grid, n_rays=args.rays)
    return None, True, _csv(["theta", "rho", "r", "c4_min"], [[repr(float(v)) for v in row] for row in rows])


def cmd_falsify(args, cfg):
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    res = falsify(args.count, args.seed, cfg.grid, args.tol)
    _write(res.to_csv(), args.out)
    summary = envelope("falsify", cfg.to_dict(), res.summary(), not res.violations)
    text = dumps(summary)
    if args.summary:
        _write(text, args.summary)
    else:
        sys.stderr.write(text)
    return EXIT_OK if not res.violations else EXIT_FAIL


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "coeffs": cmd_coeffs,
    "univalence": cmd_univalence,
    "connectivity": cmd_connectivity,
    "criteria": cmd_criteria,
    "john-experiment": cmd_john,
    "conjecture15": cmd_conjecture15,
}


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    start = time.perf_counter()
    try:
        cfg = RunConfig(args.command, [getattr(args, "map", None)] if getattr(args, "map", None) else [],
                        _grid(args), getattr(args, "tol", bounds.TOL), getattr(args, "seed", None),
                        getattr(args, "format", "json"), args.out)
        if args.command == "falsify":
            return cmd_falsify(args, cfg)
        results, passed, text = COMMANDS[args.command](args, cfg)
        if text is None:
            wall = time.perf_counter() - start if args.timing else None
            text = dumps(envelope(args.command, cfg.to_dict(), results, passed, wall))
        _write(text, args.out)
    except (UsageError, HmapError) as exc:
        print(f"hmap {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if passed else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
