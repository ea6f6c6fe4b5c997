"""Planar harmonic mappings of the unit disk: representation, transforms,
derivative and coefficient bounds, univalence criteria and linear
connectivity of image domains."""

from .core import (
    DEFAULT_GRID,
    ColonnaExtremal,
    ExpLine,
    GridSpec,
    HarmonicMap,
    Identity,
    LogRatio,
    MobiusMap,
    NormalizedMap,
    PolynomialMap,
    analytic,
    dilatation,
    evaluate,
    lambda_values,
    point_profile,
    sup_inf_lambda,
    sup_modulus,
    wirtinger_derivative,
)
from .errors import HmapError
from .io import load_map, map_from_dict, map_to_dict
from .transforms import affine_transform, koebe_transform, rotation_analytic, rotation_harmonic, shear

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GRID", "ColonnaExtremal", "ExpLine", "GridSpec", "HarmonicMap", "Identity", "LogRatio", "MobiusMap",
    "NormalizedMap", "PolynomialMap", "analytic", "dilatation", "evaluate", "lambda_values", "point_profile",
    "sup_inf_lambda", "sup_modulus", "wirtinger_derivative", "HmapError", "load_map", "map_from_dict", "map_to_dict",
    "affine_transform", "koebe_transform", "rotation_analytic", "rotation_harmonic", "shear",
]
