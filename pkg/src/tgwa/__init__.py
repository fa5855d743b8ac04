"""Exact construction and verification of weight modules over twisted
generalized Weyl algebras, with the rank-two quantized Weyl algebra
classification."""

from .bm import bm_presentation, nu_formula, simple_torus_module, torus_decompose
from .core import ccr_presentation, normalize, pair_at, qwa_presentation
from .errors import ConfigError, MathError, TgwaError
from .lattice import Lattice, hnf, skew_normal_form
from .module import WeightModule, module_from_json
from .orbit import WeightPoint, g_m, g_tilde, isotropy, n0_point, n1_point, n2_point, point
from .qwa import (CASES, build_generic_induced, build_module, classify_case, compare_modules,
                  induced_constants)
from .scalars import ParameterEnv, Scalar, parse_scalar
from .verify import check_relations, check_simplicity, verify_module

__version__ = "0.1.0"

__all__ = [
    "CASES", "ConfigError", "Lattice", "MathError", "ParameterEnv", "Scalar", "TgwaError",
    "WeightModule", "WeightPoint", "bm_presentation", "build_generic_induced", "build_module",
    "ccr_presentation", "check_relations", "check_simplicity", "classify_case",
    "compare_modules", "g_m", "g_tilde", "hnf", "induced_constants", "isotropy",
    "module_from_json", "n0_point", "n1_point", "n2_point", "normalize", "nu_formula",
    "pair_at", "parse_scalar", "point", "qwa_presentation", "simple_torus_module",
    "skew_normal_form", "torus_decompose", "verify_module",
]
