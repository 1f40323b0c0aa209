"""Numerical tolerances shared by every module."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    structural: float = 1e-12  # norms, hermiticity, unit vectors
    spectral: float = 1e-10  # unitarity, eigen-derived quantities
    imag_residual: float = 1e-10  # largest imaginary part tolerated in an expectation value
    route_discrepancy: float = 1e-9  # direct vs closed-form oracle routes
    frame_residual: float = 1e-10
    clamp: float = 1e-12  # arccos arguments may overshoot [-1, 1] by at most this
    bound_slack: float = 1e-9  # target correlation allowed outside [E_min, E_max]
    analytic_check: float = 1e-8  # model vs oracle in verification reports
    bisection_step: float = 1e-12
    bisection_max_iter: int = 200
    phase_cutoff: float = 1e-9
    mc_sigmas: float = 4.0


TOL = Tolerances()


class HV2QError(Exception):
    """Base class for numerical failures inside the package."""


class NumericalError(HV2QError):
    pass


class OracleInconsistencyError(HV2QError):
    pass


class FrameConstructionError(HV2QError):
    pass


class InvariantViolationError(HV2QError):
    """A relation that must hold mathematically did not; indicates a bug."""
