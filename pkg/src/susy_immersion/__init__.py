"""Soliton surfaces of the supersymmetric sine-Gordon model, computed exactly over a Grassmann algebra."""
from .errors import (CapacityError, DegenerateMetric, DegenerateNormal, GeneratorMismatch, JetOrderError,
                     NonInvertible, ParityError, SusyImmersionError)
from .grassmann import GeneratorSet, GrassmannElement, Parity, apply_analytic, inverse
from .immersion import DeformationSpec, Gauge, Sector, SurfaceGeometry, Symmetry, SymTafel, surface_geometry
from .jetfield import D, J, JetElement, supersymmetry, translation, zcc_residual
from .sinegordon import CASES, KinkSolution, SineGordonModel, build_solution, euler_character, run_case
from .supermatrix import SuperMatrix, inverse_even, killing, supertrace

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DegenerateMetric", "DegenerateNormal", "GeneratorMismatch", "JetOrderError",
    "NonInvertible", "ParityError", "SusyImmersionError",
    "GeneratorSet", "GrassmannElement", "Parity", "apply_analytic", "inverse",
    "DeformationSpec", "Gauge", "Sector", "SurfaceGeometry", "Symmetry", "SymTafel", "surface_geometry",
    "D", "J", "JetElement", "supersymmetry", "translation", "zcc_residual",
    "CASES", "KinkSolution", "SineGordonModel", "build_solution", "euler_character", "run_case",
    "SuperMatrix", "inverse_even", "killing", "supertrace",
]
