"""Hidden-variable model for an arbitrary pure two-qubit state.

For X = alpha1 + alpha2 sigma.a and Y = beta1 + beta2 sigma.b the model
assigns, for a hidden unit vector lam drawn uniformly from the sphere,

    X(lam) = alpha1 + alpha2 F,   F = +1 iff a_hat.lam >= cos(xi)
    Y(lam) = beta1 + beta2 G,     G = +1 iff b.lam < cos(chi)

The cap half-angles are fixed by the single-party averages,
cos(xi) = -sin(2phi) a'.n' and cos(chi) = -sin(2phi) b.n', and the
nonlocal axis a_hat is placed at the angle gamma from b for which the
spherical-cap correlation equals -r.b.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bell import place_axis
from .caps import cap_correlation, cap_fraction, cap_intersection, correlation_bounds, solve_gamma
from .config import TOL, InvariantViolationError
from .frame import CanonicalFrame, frame_of
from .linalg import safe_arccos
from .oracle import Moments, QMAverages, joint_probabilities, qm_averages
from .sampling import DEFAULT_CHUNK, MCResult, run_moments, sample_sphere
from .states import LocalObservable, TwoQubitState


@dataclass(frozen=True, eq=False)
class ModelParams:
    xi: float
    chi: float
    cos_xi: float
    cos_chi: float
    r: np.ndarray
    a_hat: np.ndarray
    gamma: float
    bounds: tuple[float, float]
    target: float  # -r.b, the required <F G>
    b: np.ndarray
    a_prime: np.ndarray
    iterations: int = 0
    residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "xi": self.xi,
            "chi": self.chi,
            "cos_xi": self.cos_xi,
            "cos_chi": self.cos_chi,
            "r": self.r.tolist(),
            "a_hat": self.a_hat.tolist(),
            "gamma": self.gamma,
            "bounds": list(self.bounds),
            "target": self.target,
            "iterations": self.iterations,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class TripleAngles:
    tau: float  # a . n = cos(tau)
    sigma: float  # b . n' = cos(sigma)
    omega: float  # a' . b = cos(omega)


def response_cosines(frame: CanonicalFrame, x: LocalObservable, y: LocalObservable) -> tuple[float, float]:
    """(cos xi, cos chi) for the sphere model."""
    s2 = frame.sin2phi
    a_p = frame.rotate(x.axis)
    an_rotated = float(a_p @ frame.n_prime)
    an_bare = float(x.axis @ frame.n)
    if abs(an_rotated - an_bare) > TOL.spectral:
        raise InvariantViolationError(f"a'.n' = {an_rotated!r} but a.n = {an_bare!r}")
    return -s2 * an_rotated, -s2 * float(y.axis @ frame.n_prime)


def model_angles(frame: CanonicalFrame, x: LocalObservable, y: LocalObservable) -> tuple[float, float]:
    cos_xi, cos_chi = response_cosines(frame, x, y)
    return safe_arccos(cos_xi), safe_arccos(cos_chi)


def r_vector(frame: CanonicalFrame, x: LocalObservable) -> np.ndarray:
    a_p = frame.rotate(x.axis)
    n_p = frame.n_prime
    return frame.cos2phi * a_p + 2.0 * float(a_p @ n_p) * np.sin(frame.phi) ** 2 * n_p


def triple_angles(frame: CanonicalFrame, x: LocalObservable, y: LocalObservable) -> TripleAngles:
    return TripleAngles(
        tau=safe_arccos(float(x.axis @ frame.n)),
        sigma=safe_arccos(float(y.axis @ frame.n_prime)),
        omega=safe_arccos(float(frame.rotate(x.axis) @ y.axis)),
    )


def angle_inequality(tau: float, sigma: float, omega: float) -> tuple[bool, float]:
    """|cos w - cos t cos s| <= sin t sin s; returns (holds, slack)."""
    slack = np.sin(tau) * np.sin(sigma) - abs(np.cos(omega) - np.cos(tau) * np.cos(sigma))
    return bool(slack >= -TOL.structural), float(slack)


def solve_ahat(frame: CanonicalFrame, x: LocalObservable, y: LocalObservable) -> ModelParams:
    """Fix xi, chi and place a_hat so the model reproduces <X (x) Y>."""
    cos_xi, cos_chi = response_cosines(frame, x, y)
    xi, chi = safe_arccos(cos_xi), safe_arccos(cos_chi)
    r = r_vector(frame, x)
    b = y.axis
    target = -float(r @ b)
    gamma, iters = solve_gamma(xi, chi, target)
    residual = abs(cap_correlation(gamma, xi, chi) - target)
    a_prime = frame.rotate(x.axis)
    return ModelParams(
        xi=xi,
        chi=chi,
        cos_xi=cos_xi,
        cos_chi=cos_chi,
        r=r,
        a_hat=place_axis(b, a_prime, gamma),
        gamma=gamma,
        bounds=correlation_bounds(xi, chi),
        target=target,
        b=np.asarray(b, dtype=float),
        a_prime=a_prime,
        iterations=iters,
        residual=residual,
    )


def assign_values(params: ModelParams, x: LocalObservable, y: LocalObservable, lam):
    """Values of X and Y for hidden variables ``lam`` (shape (3,) or (n, 3)).

    Returns ``(x_val, y_val, F, G)``.
    """
    lam = np.asarray(lam, dtype=float)
    f = np.where(lam @ params.a_hat >= params.cos_xi, 1, -1)
    g = np.where(lam @ params.b < params.cos_chi, 1, -1)
    return x.alpha1 + x.alpha2 * f, y.alpha1 + y.alpha2 * g, f, g


def compose_moments(x: LocalObservable, y: LocalObservable, f: float, g: float, fg: float) -> Moments:
    """Moments of X = alpha1 + alpha2 F and Y = beta1 + beta2 G from those of F, G."""
    return Moments(
        x.alpha1 + x.alpha2 * f,
        y.alpha1 + y.alpha2 * g,
        x.alpha1 * y.alpha1 + x.alpha1 * y.alpha2 * g + x.alpha2 * y.alpha1 * f + x.alpha2 * y.alpha2 * fg,
    )


def analytic_moments(params: ModelParams, x: LocalObservable, y: LocalObservable) -> Moments:
    fg = cap_correlation(params.gamma, params.xi, params.chi)
    return compose_moments(x, y, -params.cos_xi, params.cos_chi, fg)


def model_sign_table(params: ModelParams) -> np.ndarray:
    """Exact P(F, G) over the sphere; index 0 is +1."""
    a = cap_fraction(params.xi)  # P(F = +1)
    b = cap_fraction(params.chi)  # P(G = -1)
    inter = cap_intersection(params.gamma, params.xi, params.chi)
    return np.array([[a - inter, inter], [1.0 - a - b + inter, b - inter]])


@dataclass
class VerificationReport:
    model: str
    state: TwoQubitState
    x: LocalObservable
    y: LocalObservable
    oracle: QMAverages
    analytic: Moments
    born_table: np.ndarray
    model_table: np.ndarray
    params: dict
    mc: MCResult | None = None
    sigmas: float = TOL.mc_sigmas
    tolerance: float = TOL.analytic_check
    timing: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def analytic_discrepancy(self) -> float:
        return self.analytic.max_diff(self.oracle.direct)

    @property
    def table_discrepancy(self) -> float:
        return float(np.max(np.abs(self.model_table - self.born_table)))

    @property
    def mc_zscores(self) -> dict:
        if self.mc is None:
            return {}
        ref = self.oracle.direct
        return {"x": self.mc.x.z(ref.x), "y": self.mc.y.z(ref.y), "xy": self.mc.xy.z(ref.xy)}

    @property
    def analytic_passed(self) -> bool:
        return self.analytic_discrepancy <= self.tolerance and self.table_discrepancy <= self.tolerance

    @property
    def mc_passed(self) -> bool:
        if self.mc is None:
            return True
        ref = self.oracle.direct
        return (
            self.mc.x.within(ref.x, self.sigmas)
            and self.mc.y.within(ref.y, self.sigmas)
            and self.mc.xy.within(ref.xy, self.sigmas)
        )

    @property
    def passed(self) -> bool:
        return self.analytic_passed and self.mc_passed

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "schema": 1,
            "model": self.model,
            "state": self.state.to_dict(),
            "obs_x": self.x.to_dict(),
            "obs_y": self.y.to_dict(),
            "oracle": self.oracle.to_dict(),
            "analytic": self.analytic.to_dict(),
            "params": self.params,
            "born_table": self.born_table.tolist(),
            "model_table": self.model_table.tolist(),
            "analytic_discrepancy": self.analytic_discrepancy,
            "table_discrepancy": self.table_discrepancy,
            "mc": None if self.mc is None else self.mc.to_dict(),
            "mc_zscores": self.mc_zscores,
            "checks": {
                "analytic": self.analytic_passed,
                "monte_carlo": self.mc_passed,
                "passed": self.passed,
                "tolerance": self.tolerance,
                "sigmas": self.sigmas,
            },
            "notes": list(self.notes),
        }
        if include_timing:
            out["timing"] = dict(self.timing)
        return out


def verify_general(
    state: TwoQubitState,
    x: LocalObservable,
    y: LocalObservable,
    n_samples: int = 0,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int | None = None,
    sigmas: float = TOL.mc_sigmas,
    frame: CanonicalFrame | None = None,
) -> VerificationReport:
    """Compare the sphere model with the exact quantum averages.

    ``n_samples = 0`` runs the analytic comparison only; otherwise at least
    10^4 Monte Carlo draws are required.
    """
    if n_samples and n_samples < 10_000:
        raise ValueError("Monte Carlo verification needs n_samples >= 10000")
    t0 = time.perf_counter()
    frame = frame_of(state) if frame is None else frame
    oracle = qm_averages(state, x, y, frame)
    params = solve_ahat(frame, x, y)
    t1 = time.perf_counter()
    report = VerificationReport(
        model="general",
        state=state,
        x=x,
        y=y,
        oracle=oracle,
        analytic=analytic_moments(params, x, y),
        born_table=joint_probabilities(state, x, y),
        model_table=model_sign_table(params),
        params=params.to_dict(),
        sigmas=sigmas,
    )
    if n_samples:
        report.mc = run_moments(
            lambda lam: assign_values(params, x, y, lam), sample_sphere, n_samples, seed, chunk_size, threads
        )
    report.timing = {"analytic_s": t1 - t0, "total_s": time.perf_counter() - t0}
    return report
