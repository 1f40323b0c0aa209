"""Schmidt decomposition and the canonical frame psi = N U (x) I |singlet>."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL, FrameConstructionError
from .linalg import I2, SY, bloch_vector, rotation_from_unitary, sigma_dot, svd_2x2, tensor_product, unit
from .states import TwoQubitState, singlet


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """psi = sqrt(mu1)|a1 b1> + sqrt(mu2)|a2 b2>, mu1 >= mu2.

    ``a_basis`` and ``b_basis`` hold the kets as columns.
    """

    mu1: float
    mu2: float
    a_basis: np.ndarray
    b_basis: np.ndarray

    def reconstruct(self) -> np.ndarray:
        a, b = self.a_basis, self.b_basis
        return np.sqrt(self.mu1) * tensor_product(a[:, 0], b[:, 0]) + np.sqrt(self.mu2) * tensor_product(a[:, 1], b[:, 1])


def schmidt_decompose(state: TwoQubitState) -> SchmidtData:
    left, s, right = svd_2x2(state.coefficients)
    # C = sum_i s_i |l_i><r_i|  =>  psi = sum_i s_i |l_i> (x) conj(r_i)
    mu1 = float(s[0] ** 2)
    mu2 = float(s[1] ** 2)
    total = mu1 + mu2
    mu1, mu2 = mu1 / total, mu2 / total
    return SchmidtData(mu1=mu1, mu2=mu2, a_basis=left, b_basis=right.conj())


@dataclass(frozen=True, eq=False)
class CanonicalFrame:
    phi: float
    n: np.ndarray
    U: np.ndarray
    N: np.ndarray
    R: np.ndarray
    n_prime: np.ndarray
    schmidt: SchmidtData

    @property
    def sin2phi(self) -> float:
        return float(np.sin(2 * self.phi))

    @property
    def cos2phi(self) -> float:
        return float(np.cos(2 * self.phi))

    def rotate(self, v) -> np.ndarray:
        return rotate(self, v)

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "mu1": self.schmidt.mu1,
            "mu2": self.schmidt.mu2,
            "n": self.n.tolist(),
            "n_prime": self.n_prime.tolist(),
            "R": self.R.tolist(),
            "U": [[[z.real, z.imag] for z in row] for row in self.U],
        }


def _local_unitary(sd: SchmidtData) -> np.ndarray:
    a, b = sd.a_basis, sd.b_basis
    u1 = np.column_stack((a[:, 0], -a[:, 1]))  # |0> -> |a1>, |1> -> -|a2>
    u2 = np.column_stack((b[:, 1], b[:, 0]))  # |0> -> |b2>, |1> -> |b1>
    # move U2 onto particle 1: (I (x) G)|singlet> = (sy G^T sy (x) I)|singlet>
    return u1 @ SY @ u2.T @ SY


def build_frame(sd: SchmidtData, check: bool = True) -> CanonicalFrame:
    # sqrt(mu1) = sin(phi + pi/4), sqrt(mu2) = cos(phi + pi/4); atan2 keeps both ends accurate
    phi = float(np.arctan2(np.sqrt(sd.mu1), np.sqrt(sd.mu2))) - 0.25 * np.pi
    n = unit(bloch_vector(sd.a_basis[:, 0]))
    u = _local_unitary(sd)
    big_n = np.cos(phi) * I2 + np.sin(phi) * sigma_dot(n)
    rot = rotation_from_unitary(u)
    frame = CanonicalFrame(phi=phi, n=n, U=u, N=big_n, R=rot, n_prime=rot @ n, schmidt=sd)
    if check:
        target = sd.reconstruct()
        res = phase_aligned_residual(target, frame_ket(frame))
        if res > TOL.frame_residual:
            raise FrameConstructionError(f"frame reconstruction residual {res:.3e}")
    return frame


def frame_of(state: TwoQubitState) -> CanonicalFrame:
    frame = build_frame(schmidt_decompose(state))
    res = phase_aligned_residual(state.ket, frame_ket(frame))
    if res > TOL.frame_residual:
        raise FrameConstructionError(f"frame does not reproduce the state (residual {res:.3e})")
    return frame


def frame_ket(frame: CanonicalFrame) -> np.ndarray:
    """N U (x) I |singlet>."""
    # (M (x) I)|psi> acts on the coefficient matrix as M @ C
    return (frame.N @ frame.U @ singlet().coefficients).ravel()


def phase_aligned_residual(psi, chi) -> float:
    """||psi - e^{i g} chi|| with the phase g fixed by the largest amplitude of psi."""
    psi = np.asarray(psi, dtype=complex).ravel()
    chi = np.asarray(chi, dtype=complex).ravel()
    k = int(np.argmax(np.abs(psi)))
    if abs(chi[k]) == 0.0:
        return float(np.linalg.norm(psi - chi))
    g = (psi[k] / abs(psi[k])) / (chi[k] / abs(chi[k]))
    return float(np.linalg.norm(psi - g * chi))


def reconstruction_residual(state: TwoQubitState, frame: CanonicalFrame) -> float:
    return phase_aligned_residual(state.ket, frame_ket(frame))


def rotate(frame: CanonicalFrame, v) -> np.ndarray:
    """R v, the rotation induced by conjugation with U (a -> a', n -> n')."""
    return frame.R @ np.asarray(v, dtype=float)
