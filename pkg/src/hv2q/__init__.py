"""Deterministic hidden-variable models for pure two-qubit states.

Each model reproduces the exact quantum averages of dichotomic local
observables; every prediction is checked against a direct linear-algebra
oracle and, optionally, a seeded Monte Carlo simulation.
"""

from .config import (
    TOL,
    FrameConstructionError,
    HV2QError,
    InvariantViolationError,
    NumericalError,
    OracleInconsistencyError,
)
from .frame import CanonicalFrame, frame_of, schmidt_decompose
from .general import solve_ahat, verify_general
from .minimal import locality_probe, minimal_params, verify_minimal
from .oracle import qm_averages
from .states import LocalObservable, TwoQubitState, product_state, schmidt_form, singlet, spin

__version__ = "0.1.0"

__all__ = [
    "TOL",
    "HV2QError",
    "NumericalError",
    "OracleInconsistencyError",
    "FrameConstructionError",
    "InvariantViolationError",
    "CanonicalFrame",
    "frame_of",
    "schmidt_decompose",
    "solve_ahat",
    "verify_general",
    "locality_probe",
    "minimal_params",
    "verify_minimal",
    "qm_averages",
    "LocalObservable",
    "TwoQubitState",
    "product_state",
    "schmidt_form",
    "singlet",
    "spin",
]
