"""Small dense complex linear algebra for one and two qubits.

Matrices are plain ``numpy`` arrays (2x2 or 4x4 complex), kets are 1-D
complex arrays in the basis order |00>, |01>, |10>, |11>, and 3-vectors are
1-D float arrays.
"""

from __future__ import annotations

import numpy as np

from .config import TOL, NumericalError

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)
_PAULI_STACK = np.stack(PAULI)

EX = np.array([1.0, 0.0, 0.0])
EY = np.array([0.0, 1.0, 0.0])
EZ = np.array([0.0, 0.0, 1.0])


def tensor_product(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    left, right = np.asarray(left, dtype=complex), np.asarray(right, dtype=complex)
    if left.ndim == 1:
        return np.outer(left, right).ravel()
    (m, n), (p, q) = left.shape, right.shape
    return (left[:, None, :, None] * right[None, :, None, :]).reshape(m * p, n * q)


def is_unit(v, tol: float = TOL.structural) -> bool:
    return abs(float(np.linalg.norm(v)) - 1.0) <= tol


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def sigma_dot(v) -> np.ndarray:
    """sigma . v for a real 3-vector (not necessarily unit)."""
    x, y, z = np.asarray(v, dtype=float)
    return x * SX + y * SY + z * SZ


def pauli_from_vector(alpha1: float, alpha2: float, axis) -> np.ndarray:
    """Matrix of the dichotomic observable alpha1*I + alpha2*sigma.axis."""
    axis = np.asarray(axis, dtype=float)
    if not is_unit(axis):
        raise ValueError(f"axis must be a unit vector, got norm {np.linalg.norm(axis)!r}")
    return alpha1 * I2 + alpha2 * sigma_dot(axis)


def pauli_components(m: np.ndarray) -> tuple[complex, np.ndarray]:
    """Decompose a 2x2 matrix as c0*I + c.sigma; returns (c0, c)."""
    m = np.asarray(m, dtype=complex)
    c0 = np.trace(m) / 2
    c = np.array([np.trace(p @ m) / 2 for p in PAULI])
    return c0, c


def bloch_vector(ket) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    return np.array([np.vdot(ket, p @ ket).real for p in PAULI])


def is_hermitian(m: np.ndarray, tol: float = TOL.structural) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def is_unitary(m: np.ndarray, tol: float = TOL.spectral) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def expectation(psi, m: np.ndarray) -> float:
    """<psi|M|psi> for Hermitian M; a sizeable imaginary part is an error."""
    psi = np.asarray(psi, dtype=complex)
    val = np.vdot(psi, np.asarray(m, dtype=complex) @ psi)
    if abs(val.imag) > TOL.imag_residual:
        raise NumericalError(f"expectation value has imaginary part {val.imag:.3e}")
    return float(val.real)


def fix_phase(vec: np.ndarray) -> complex:
    """Phase factor that makes the first non-negligible component real and >= 0.

    Returns the factor ``f`` (|f| = 1) such that ``vec * f`` obeys the convention.
    """
    for comp in vec:
        if abs(comp) > TOL.phase_cutoff:
            return np.conj(comp) / abs(comp)
    return 1.0 + 0.0j


def hermitian_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and phase-fixed eigenvectors (columns)."""
    try:
        w, v = np.linalg.eigh(np.asarray(m, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    for k in range(v.shape[1]):
        v[:, k] *= fix_phase(v[:, k])
    return w, v


def unitary_exp(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) for Hermitian H by spectral decomposition."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, TOL.spectral):
        raise ValueError("Hamiltonian must be Hermitian")
    w, v = hermitian_eig(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def svd_2x2(c: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """SVD ``C = L diag(s) R^dagger`` with s descending.

    Returns ``(L, s, R)`` where the columns of L and R are the left and right
    singular vectors. The phase of each left vector follows :func:`fix_phase`;
    the matching right vector absorbs the compensating phase.
    """
    c = np.asarray(c, dtype=complex)
    u, s, vh = np.linalg.svd(c)
    right = vh.conj().T
    for k in range(2):
        f = fix_phase(u[:, k])
        u[:, k] *= f
        right[:, k] *= f
    return u, s, right


def rotation_from_unitary(u: np.ndarray) -> np.ndarray:
    """Orthogonal R with U^dagger (sigma.v) U = sigma.(R v) for every v."""
    u = np.asarray(u, dtype=complex)
    conj = u.conj().T @ _PAULI_STACK @ u
    # R_ij = tr(sigma_i U^dagger sigma_j U) / 2
    return 0.5 * np.einsum("iab,jba->ij", _PAULI_STACK, conj).real


def orthogonal_to(b) -> np.ndarray:
    """Deterministic unit vector orthogonal to ``b``.

    Starts from the coordinate axis along which ``b`` has the smallest
    magnitude and applies one Gram-Schmidt step.
    """
    b = unit(b)
    e = np.zeros(3)
    e[int(np.argmin(np.abs(b)))] = 1.0
    return unit(e - np.dot(e, b) * b)


def safe_arccos(x, tol: float = TOL.clamp):
    """arccos that tolerates rounding overshoot up to ``tol`` and rejects more."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + tol):
        raise NumericalError(f"arccos argument outside [-1, 1]: {x}")
    out = np.arccos(np.clip(x, -1.0, 1.0))
    return float(out) if out.ndim == 0 else out


def angle_between(u, v) -> float:
    """Angle between two 3-vectors via atan2, accurate near 0 and pi."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), np.dot(u, v)))
