"""Map-description files and the versioned report envelope.

Map descriptions are JSON objects of three types::

    {"type": "polynomial", "a": [[re, im], ...], "b": [[re, im], ...]}
    {"type": "closed_form", "kind": "colonna", "params": {...}}
    {"type": "shear", "F": [[re, im], ...], "omega": [[re, im], ...], "order": 24}

``a`` starts at the constant term, ``b`` at the z-bar term (there is no
constant co-analytic term).  Series for shears start at the constant term.
A complex number may be written as ``[re, im]`` or as a plain real.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

from .core import DEFAULT_ORDER, ClosedForm, ColonnaExtremal, ExpLine, Identity, LogRatio, MobiusMap, PolynomialMap
from .errors import ConfigError, HmapError

SCHEMA = "hmap-report-v1"

CLOSED_FORMS = {cls.kind: cls for cls in (ColonnaExtremal, ExpLine, Identity, MobiusMap, LogRatio)}


def parse_complex(value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise ConfigError(f"cannot read {value!r} as a complex number")


def parse_series(values):
    if isinstance(values, dict):
        values = values.get("coeffs")
    if not isinstance(values, list):
        raise ConfigError("a series must be a list of coefficients")
    return np.array([parse_complex(v) for v in values], dtype=complex)


def format_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def map_from_dict(d):
    if not isinstance(d, dict):
        raise ConfigError("map description must be a JSON object")
    kind = d.get("type")
    try:
        if kind == "polynomial":
            a = parse_series(d.get("a", []))
            b = parse_series(d.get("b", []))
            if len(a) == 0:
                raise ConfigError("polynomial map needs at least one a-coefficient")
            return PolynomialMap(a, np.concatenate([[0j], b]))
        if kind == "closed_form":
            cls = CLOSED_FORMS.get(d.get("kind"))
            if cls is None:
                raise ConfigError(f"unknown closed form {d.get('kind')!r}; known: {sorted(CLOSED_FORMS)}")
            params = {k: (v if k == "M" or k == "tau" else parse_complex(v)) for k, v in d.get("params", {}).items()}
            return cls(**params)
        if kind == "shear":
            from .transforms import shear

            order = int(d.get("order", DEFAULT_ORDER))
            return shear(parse_series(d["F"]), parse_series(d["omega"]), order=order)
    except ConfigError:
        raise
    except (HmapError, KeyError, TypeError) as exc:
        raise ConfigError(f"invalid {kind} map description: {exc}") from exc
    raise ConfigError(f"unknown map type {kind!r}")


def map_to_dict(f):
    from .transforms import ShearedMap

    if isinstance(f, ShearedMap):
        return {"type": "shear", "F": [format_complex(c) for c in f.F],
                "omega": [format_complex(c) for c in f.omega], "order": f.truncation_order}
    if isinstance(f, PolynomialMap):
        return {"type": "polynomial", "a": [format_complex(c) for c in f.a],
                "b": [format_complex(c) for c in f.b[1:]]}
    if isinstance(f, ClosedForm):
        return {"type": "closed_form", "kind": f.kind, "params": f.params()}
    raise ConfigError(f"{type(f).__name__} has no file representation")


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def load_map(path):
    return map_from_dict(load_json(path))


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays, complex numbers and dataclasses."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "to_dict"):
            return to_jsonable(obj.to_dict())
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return format_complex(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def envelope(command, config, results, passed, wall_time=None):
    out = {"schema": SCHEMA, "command": command, "config": config, "results": results, "pass": bool(passed)}
    if wall_time is not None:
        out["wall_time"] = wall_time
    return to_jsonable(out)


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
