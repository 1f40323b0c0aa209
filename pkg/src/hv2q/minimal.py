"""Single-parameter model: the hidden variable is an angle on a circle.

b sits at circle angle 0 and a_hat at angle theta_hat. F = +1 on the arc of
half-width xi around a_hat, G = -1 on the arc of half-width chi around b,
with xi = pi (1 + sin2phi a'.n')/2 and chi = pi (1 + sin2phi b.n')/2. With
theta_hat = pi (1 - r.b)/2 the arc overlap gives <F G> = 2 theta_hat/pi - 1
= -r.b. Only angles enter; the circle is not embedded in Bloch space.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .config import TOL, InvariantViolationError
from .frame import CanonicalFrame, frame_of
from .general import VerificationReport, compose_moments, r_vector, response_cosines
from .oracle import joint_probabilities, qm_averages
from .sampling import DEFAULT_CHUNK, run_moments, sample_circle
from .states import LocalObservable, TwoQubitState


@dataclass(frozen=True)
class MinimalParams:
    xi: float
    chi: float
    theta_hat: float
    target: float  # -r.b
    assumption_ok: bool  # theta_hat <= xi + chi

    @property
    def a_hat_angle(self) -> float:
        return self.theta_hat

    def to_dict(self) -> dict:
        return {
            "xi": self.xi,
            "chi": self.chi,
            "theta_hat": self.theta_hat,
            "target": self.target,
            "assumption_ok": self.assumption_ok,
        }


def minimal_angles(frame: CanonicalFrame, x: LocalObservable, y: LocalObservable) -> tuple[float, float]:
    s2 = frame.sin2phi
    xi = 0.5 * np.pi * (1.0 + s2 * float(frame.rotate(x.axis) @ frame.n_prime))
    chi = 0.5 * np.pi * (1.0 + s2 * float(y.axis @ frame.n_prime))
    return float(np.clip(xi, 0.0, np.pi)), float(np.clip(chi, 0.0, np.pi))


def minimal_theta_hat(frame: CanonicalFrame, x: LocalObservable, y: LocalObservable) -> float:
    rb = float(r_vector(frame, x) @ y.axis)
    theta_hat = float(np.clip(0.5 * np.pi * (1.0 - rb), 0.0, np.pi))
    xi, chi = minimal_angles(frame, x, y)
    if theta_hat > xi + chi + TOL.bound_slack:
        raise InvariantViolationError(f"theta_hat {theta_hat!r} exceeds xi + chi = {xi + chi!r}")
    return theta_hat


def minimal_params(frame: CanonicalFrame, x: LocalObservable, y: LocalObservable) -> MinimalParams:
    xi, chi = minimal_angles(frame, x, y)
    theta_hat = minimal_theta_hat(frame, x, y)
    return MinimalParams(
        xi=xi,
        chi=chi,
        theta_hat=theta_hat,
        target=-float(r_vector(frame, x) @ y.axis),
        assumption_ok=theta_hat <= xi + chi + TOL.bound_slack,
    )


def minimal_correlation(xi: float, chi: float, theta_hat: float) -> float:
    """(2/pi) min(xi + chi, theta_hat) - 1."""
    return 2.0 / np.pi * min(xi + chi, theta_hat) - 1.0


def arc_overlap(xi, chi, separation):
    """Fraction of the circle inside both arcs [-xi, xi] and [d - chi, d + chi].

    Direct interval arithmetic over the three relevant 2pi-translates; no
    closed-form shortcut is assumed, so this checks ``minimal_correlation``.
    """
    xi, chi, d = np.broadcast_arrays(np.asarray(xi, float), np.asarray(chi, float), np.asarray(separation, float))
    total = np.zeros(xi.shape)
    for k in (-1, 0, 1):
        lo = np.maximum(-xi, d - chi + 2 * np.pi * k)
        hi = np.minimum(xi, d + chi + 2 * np.pi * k)
        total += np.maximum(0.0, hi - lo)
    out = total / (2 * np.pi)
    return float(out) if out.ndim == 0 else out


def circle_correlation(xi, chi, separation):
    """<F G> on the circle from the exact arc overlap."""
    out = 2 * (xi / np.pi) + 2 * (chi / np.pi) - 4 * np.asarray(arc_overlap(xi, chi, separation)) - 1.0
    return float(out) if np.ndim(out) == 0 else out


def circle_sign_table(params: MinimalParams) -> np.ndarray:
    a = params.xi / np.pi
    b = params.chi / np.pi
    inter = arc_overlap(params.xi, params.chi, params.theta_hat)
    return np.array([[a - inter, inter], [1.0 - a - b + inter, b - inter]])


def assign_minimal(params: MinimalParams, x: LocalObservable, y: LocalObservable, angle):
    """Values for circle positions ``angle``; returns ``(x_val, y_val, F, G)``."""
    angle = np.asarray(angle, dtype=float)
    f = np.where(np.cos(angle - params.theta_hat) >= np.cos(params.xi), 1, -1)
    g = np.where(np.cos(angle) < np.cos(params.chi), 1, -1)
    return x.alpha1 + x.alpha2 * f, y.alpha1 + y.alpha2 * g, f, g


def minimal_analytic_moments(params: MinimalParams, x: LocalObservable, y: LocalObservable):
    f = 2 * params.xi / np.pi - 1
    g = 1 - 2 * params.chi / np.pi
    return compose_moments(x, y, f, g, minimal_correlation(params.xi, params.chi, params.theta_hat))


def verify_minimal(
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
    if n_samples and n_samples < 10_000:
        raise ValueError("Monte Carlo verification needs n_samples >= 10000")
    t0 = time.perf_counter()
    frame = frame_of(state) if frame is None else frame
    params = minimal_params(frame, x, y)
    report = VerificationReport(
        model="minimal",
        state=state,
        x=x,
        y=y,
        oracle=qm_averages(state, x, y, frame),
        analytic=minimal_analytic_moments(params, x, y),
        born_table=joint_probabilities(state, x, y),
        model_table=circle_sign_table(params),
        params=params.to_dict(),
        sigmas=sigmas,
    )
    arc_fg = circle_correlation(params.xi, params.chi, params.theta_hat)
    closed_fg = minimal_correlation(params.xi, params.chi, params.theta_hat)
    if abs(arc_fg - closed_fg) > TOL.analytic_check:
        report.notes.append(f"closed-form <FG> {closed_fg!r} differs from arc overlap {arc_fg!r}")
    if n_samples:
        report.mc = run_moments(
            lambda ang: assign_minimal(params, x, y, ang), sample_circle, n_samples, seed, chunk_size, threads
        )
    report.timing = {"total_s": time.perf_counter() - t0}
    return report


def factorization_defect(frame: CanonicalFrame, x: LocalObservable, y: LocalObservable) -> float:
    """|(-r.b) - <F><G>| with the sphere-model marginals <F> = -cos xi, <G> = cos chi."""
    cos_xi, cos_chi = response_cosines(frame, x, y)
    target = -float(r_vector(frame, x) @ y.axis)
    return abs(target - (-cos_xi) * cos_chi)


def sup_defect_closed_form(phi: float, a_dot_n: float) -> float:
    """sup over unit b of the factorization defect.

    The defect is |cos2phi| |(a' - 2 sin^2(phi) (a'.n') n') . b|, maximized by
    b along that vector: |cos2phi| sqrt(1 - sin^2(2phi) (a.n)^2).
    """
    return abs(np.cos(2 * phi)) * float(np.sqrt(max(0.0, 1.0 - np.sin(2 * phi) ** 2 * a_dot_n**2)))


@dataclass
class LocalityReport:
    phi: float
    defects: list
    settings: list = field(default_factory=list)
    tolerance: float = TOL.frame_residual

    @property
    def supremum(self) -> float:
        return max(self.defects) if self.defects else 0.0

    @property
    def local(self) -> bool:
        """True when a product-form (local) response reproduces every sampled correlation."""
        return self.supremum <= self.tolerance

    @property
    def verdict(self) -> str:
        return "local" if self.local else "nonlocal"

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "phi": self.phi,
            "separable": bool(abs(np.cos(2 * self.phi)) <= self.tolerance),
            "defects": [
                {"a": s[0], "b": s[1], "defect": d} for s, d in zip(self.settings, self.defects)
            ],
            "supremum": self.supremum,
            "verdict": self.verdict,
        }


def locality_probe(frame: CanonicalFrame, x: LocalObservable, y_list) -> LocalityReport:
    defects, settings = [], []
    for y in y_list:
        defects.append(factorization_defect(frame, x, y))
        settings.append((x.axis.tolist(), y.axis.tolist()))
    return LocalityReport(phi=frame.phi, defects=defects, settings=settings)


def locality_probe_state(state: TwoQubitState, x: LocalObservable, y_list) -> LocalityReport:
    return locality_probe(frame_of(state), x, y_list)
