"""Exact verification tools for the periodic Full Kostant-Toda lattice on simple Lie algebras."""
from .rootsys import AlgebraType, InvalidAlgebraError, RootSystem, build_root_system
from .phasespace import PhaseSpace, make_phase_space
from .rankcheck import certify
from .lax import evaluate_family, invariant_family, lax_model
from .tk import tk_check, tk_family

__version__ = "0.1.0"

__all__ = [
    "AlgebraType",
    "InvalidAlgebraError",
    "RootSystem",
    "build_root_system",
    "PhaseSpace",
    "make_phase_space",
    "certify",
    "lax_model",
    "invariant_family",
    "evaluate_family",
    "tk_check",
    "tk_family",
]
