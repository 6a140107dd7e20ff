"""Cyclotomic Gaudin models: Hamiltonians, Bethe equations and Bethe vectors with exact arithmetic."""
from .automorphism import AutoSpec, AutoTable, AutomorphismError, build_automorphism, lambda0, l_sigma, projector_pi
from .bethe import BetheError, BetheProblem, SolutionSet, SolveOptions, canonicalize, residuals, solve
from .exact_num import CycloNum, cyclo_context, omega_pow
from .hamiltonians import (
    GaudinModel,
    ModelSpec,
    ModelValidationError,
    build_H,
    double_pole_identity,
    eigenvalue_E_i,
    spectrum,
    validate_model,
)
from .lie_core import LieElement, SimpleLieAlgebra, WeightVec, build_simple_lie_algebra
from .repn import IrrepModule, TensorState, VermaModule, build_irrep, verma_module
from .weight_function import build_psi, swapping_oracle, verify_eigenpair

__version__ = "0.1.0"

__all__ = [
    "AutoSpec",
    "AutoTable",
    "AutomorphismError",
    "BetheError",
    "BetheProblem",
    "CycloNum",
    "GaudinModel",
    "IrrepModule",
    "LieElement",
    "ModelSpec",
    "ModelValidationError",
    "SimpleLieAlgebra",
    "SolutionSet",
    "SolveOptions",
    "TensorState",
    "VermaModule",
    "WeightVec",
    "build_H",
    "build_automorphism",
    "build_irrep",
    "build_psi",
    "build_simple_lie_algebra",
    "canonicalize",
    "cyclo_context",
    "double_pole_identity",
    "eigenvalue_E_i",
    "l_sigma",
    "lambda0",
    "omega_pow",
    "projector_pi",
    "residuals",
    "solve",
    "spectrum",
    "swapping_oracle",
    "validate_model",
    "verify_eigenpair",
    "verma_module",
]
