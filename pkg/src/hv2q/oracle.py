"""Exact quantum averages, computed two independent ways.

The direct route evaluates <psi|X (x) Y|psi> with 4x4 matrices. The tilde
route maps the state back to the singlet through the canonical frame and
absorbs N' into a transformed observable X~ = N' X' N', which makes every
average a short closed-form expression.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL, OracleInconsistencyError
from .frame import CanonicalFrame, frame_of
from .linalg import EZ, expectation, pauli_components, sigma_dot, tensor_product, I2
from .states import LocalObservable, TwoQubitState, local_operator


@dataclass(frozen=True)
class Moments:
    """<X>, <Y> and <X (x) Y>."""

    x: float
    y: float
    xy: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.xy)

    def max_diff(self, other: "Moments") -> float:
        return float(np.max(np.abs(np.subtract(self.as_tuple(), other.as_tuple()))))

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "xy": self.xy}


@dataclass(frozen=True, eq=False)
class TildeObservable:
    alpha1_t: float
    alpha2_t: float
    a_t: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        """alpha2~ * a~."""
        return self.alpha2_t * self.a_t

    @classmethod
    def from_vector(cls, alpha1_t: float, vec) -> "TildeObservable":
        vec = np.asarray(vec, dtype=float)
        norm = float(np.linalg.norm(vec))
        if norm < TOL.structural:
            return cls(float(alpha1_t), 0.0, EZ.copy())
        return cls(float(alpha1_t), norm, vec / norm)


def tilde_transform(x: LocalObservable, frame: CanonicalFrame) -> TildeObservable:
    """Closed form of X~ = N' U^dagger X U N'."""
    s2, sin_sq = frame.sin2phi, np.sin(frame.phi) ** 2
    a_p = frame.rotate(x.axis)
    n_p = frame.n_prime
    an = float(a_p @ n_p)
    alpha1_t = x.alpha1 + x.alpha2 * s2 * an
    vec = x.alpha2 * frame.cos2phi * a_p + (x.alpha1 * s2 + 2 * x.alpha2 * sin_sq * an) * n_p
    return TildeObservable.from_vector(alpha1_t, vec)


def tilde_transform_matrix(x: LocalObservable, frame: CanonicalFrame) -> TildeObservable:
    """Matrix route: build N' X' N' explicitly and read off its Pauli components."""
    u = frame.U
    x_p = u.conj().T @ x.matrix @ u
    n_p = u.conj().T @ frame.N @ u
    c0, c = pauli_components(n_p @ x_p @ n_p)
    return TildeObservable.from_vector(c0.real, c.real)


def direct_moments(state: TwoQubitState, x: LocalObservable, y: LocalObservable) -> Moments:
    psi = state.ket
    return Moments(
        expectation(psi, local_operator(x, None)),
        expectation(psi, local_operator(None, y)),
        expectation(psi, local_operator(x, y)),
    )


def tilde_moments(frame: CanonicalFrame, x: LocalObservable, y: LocalObservable) -> Moments:
    xt = tilde_transform(x, frame)
    b = y.axis
    joint = xt.alpha1_t * y.alpha1 - float(xt.vector @ b) * y.alpha2
    mean_y = y.alpha1 - y.alpha2 * frame.sin2phi * float(b @ frame.n_prime)
    return Moments(xt.alpha1_t, mean_y, joint)


@dataclass(frozen=True)
class QMAverages:
    direct: Moments
    tilde: Moments

    @property
    def discrepancy(self) -> float:
        return self.direct.max_diff(self.tilde)

    def to_dict(self) -> dict:
        return {"direct": self.direct.to_dict(), "tilde": self.tilde.to_dict(), "discrepancy": self.discrepancy}


def qm_averages(
    state: TwoQubitState,
    x: LocalObservable,
    y: LocalObservable,
    frame: CanonicalFrame | None = None,
) -> QMAverages:
    frame = frame_of(state) if frame is None else frame
    out = QMAverages(direct_moments(state, x, y), tilde_moments(frame, x, y))
    if out.discrepancy > TOL.route_discrepancy:
        raise OracleInconsistencyError(f"direct and tilde routes differ by {out.discrepancy:.3e}")
    return out


def _projector(obs: LocalObservable, sign: int) -> np.ndarray:
    return 0.5 * (I2 + sign * sigma_dot(obs.axis))


def joint_probabilities(state: TwoQubitState, x: LocalObservable, y: LocalObservable) -> np.ndarray:
    """Born-rule table P[i, j] for outcomes (alpha1 + s_i alpha2, beta1 + s_j beta2).

    Index 0 is the ``+`` eigenvalue, index 1 the ``-`` one. For an
    identity-like observable the split follows its conventional axis.
    """
    psi = state.ket
    table = np.empty((2, 2))
    for i, si in enumerate((1, -1)):
        for j, sj in enumerate((1, -1)):
            table[i, j] = expectation(psi, tensor_product(_projector(x, si), _projector(y, sj)))
    return table


def moments_from_table(table: np.ndarray, x: LocalObservable, y: LocalObservable) -> Moments:
    xv = np.array([x.alpha1 + x.alpha2, x.alpha1 - x.alpha2])
    yv = np.array([y.alpha1 + y.alpha2, y.alpha1 - y.alpha2])
    return Moments(
        float(table.sum(axis=1) @ xv),
        float(table.sum(axis=0) @ yv),
        float(xv @ table @ yv),
    )
