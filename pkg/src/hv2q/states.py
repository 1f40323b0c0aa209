"""Two-qubit pure states and local dichotomic observables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .linalg import EZ, I2, pauli_from_vector, tensor_product


@dataclass(frozen=True, eq=False)
class LocalObservable:
    """``alpha1 * I + alpha2 * sigma.axis`` with ``alpha2 >= 0`` and unit ``axis``.

    Build through :func:`canonicalize_observable` unless the inputs are
    already canonical.
    """

    alpha1: float
    alpha2: float
    axis: np.ndarray = field(default_factory=lambda: EZ.copy())

    def __post_init__(self):
        if self.alpha2 < 0:
            raise ValueError("alpha2 must be >= 0; use canonicalize_observable")
        axis = np.asarray(self.axis, dtype=float)
        if abs(np.linalg.norm(axis) - 1.0) > TOL.structural:
            raise ValueError("axis must be a unit vector")
        object.__setattr__(self, "alpha1", float(self.alpha1))
        object.__setattr__(self, "alpha2", float(self.alpha2))
        object.__setattr__(self, "axis", axis)

    @property
    def matrix(self) -> np.ndarray:
        return pauli_from_vector(self.alpha1, self.alpha2, self.axis)

    @property
    def spectrum(self) -> tuple[float, float]:
        return (self.alpha1 - self.alpha2, self.alpha1 + self.alpha2)

    @property
    def is_identity_like(self) -> bool:
        return self.alpha2 == 0.0

    def to_dict(self) -> dict:
        return {"alpha1": self.alpha1, "alpha2": self.alpha2, "axis": [float(v) for v in self.axis]}

    @classmethod
    def from_dict(cls, data: dict) -> "LocalObservable":
        try:
            return canonicalize_observable(float(data["alpha1"]), float(data["alpha2"]), data["axis"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed observable: {data!r}") from exc


def canonicalize_observable(alpha1: float, alpha2: float, axis) -> LocalObservable:
    """Bring an observable to the form alpha2 >= 0 with a unit axis.

    A negative gap flips the axis; a zero gap makes the observable a
    multiple of the identity and the axis is set to +z.
    """
    axis = np.asarray(axis, dtype=float).reshape(3)
    if alpha2 == 0:
        return LocalObservable(alpha1, 0.0, EZ.copy())
    norm = np.linalg.norm(axis)
    if norm == 0.0:
        raise ValueError("zero axis with nonzero alpha2")
    axis = axis / norm
    if alpha2 < 0:
        alpha2, axis = -alpha2, -axis
    return LocalObservable(alpha1, alpha2, axis)


def spin(axis) -> LocalObservable:
    """Spin component sigma.axis (spectrum {-1, +1})."""
    return canonicalize_observable(0.0, 1.0, axis)


def identity(value: float = 1.0) -> LocalObservable:
    return LocalObservable(value, 0.0, EZ.copy())


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """Normalized pure state; amplitudes ordered |00>, |01>, |10>, |11>."""

    ket: np.ndarray

    def __post_init__(self):
        ket = np.asarray(self.ket, dtype=complex).reshape(4)
        if abs(np.linalg.norm(ket) - 1.0) > TOL.structural:
            raise ValueError("state is not normalized")
        object.__setattr__(self, "ket", ket)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "TwoQubitState":
        ket = np.asarray(amplitudes, dtype=complex).reshape(4)
        norm = np.linalg.norm(ket)
        if norm == 0.0:
            raise ValueError("zero vector is not a state")
        return cls(ket / norm)

    @property
    def coefficients(self) -> np.ndarray:
        """2x2 matrix C with C[i, j] = <ij|psi>."""
        return self.ket.reshape(2, 2)

    def to_dict(self) -> dict:
        return {"amplitudes": [[float(z.real), float(z.imag)] for z in self.ket]}

    @classmethod
    def from_dict(cls, data: dict) -> "TwoQubitState":
        try:
            amps = data["amplitudes"]
            if len(amps) != 4:
                raise ValueError("expected 4 amplitudes")
            ket = np.array([complex(float(re), float(im)) for re, im in amps])
            if abs(np.linalg.norm(ket) - 1.0) <= TOL.structural:
                return cls(ket)
            return cls.from_amplitudes(ket)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed state: {data!r}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def singlet() -> TwoQubitState:
    s = 1 / np.sqrt(2)
    return TwoQubitState(np.array([0, s, -s, 0], dtype=complex))


def product_state(k1, k2) -> TwoQubitState:
    k1 = np.asarray(k1, dtype=complex)
    k2 = np.asarray(k2, dtype=complex)
    return TwoQubitState.from_amplitudes(tensor_product(k1 / np.linalg.norm(k1), k2 / np.linalg.norm(k2)))


def schmidt_form(mu1: float, a1=(1, 0), b1=(1, 0)) -> TwoQubitState:
    """sqrt(mu1)|a1 b1> + sqrt(1-mu1)|a2 b2> with a2, b2 the orthogonal kets."""
    a1 = np.asarray(a1, dtype=complex)
    b1 = np.asarray(b1, dtype=complex)
    a1, b1 = a1 / np.linalg.norm(a1), b1 / np.linalg.norm(b1)
    a2 = np.array([-np.conj(a1[1]), np.conj(a1[0])])
    b2 = np.array([-np.conj(b1[1]), np.conj(b1[0])])
    return TwoQubitState.from_amplitudes(
        np.sqrt(mu1) * tensor_product(a1, b1) + np.sqrt(1 - mu1) * tensor_product(a2, b2)
    )


def local_operator(x: LocalObservable | None, y: LocalObservable | None) -> np.ndarray:
    """4x4 matrix of X (x) Y; ``None`` stands for the identity."""
    left = I2 if x is None else x.matrix
    right = I2 if y is None else y.matrix
    return tensor_product(left, right)


def sample_unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` points uniform on the unit sphere, shape (n, 3).

    z uniform on [-1, 1] and azimuth uniform on [0, 2pi) is exactly the
    uniform measure (Archimedes).
    """
    z = rng.uniform(-1.0, 1.0, n)
    az = rng.uniform(0.0, 2 * np.pi, n)
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack((rho * np.cos(az), rho * np.sin(az), z))


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    return sample_unit_vectors(rng, 1)[0]


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_state(seed) -> TwoQubitState:
    """Haar-random pure state from four complex Gaussians."""
    rng = _rng(seed)
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    return TwoQubitState.from_amplitudes(z)


def random_observable(seed) -> LocalObservable:
    rng = _rng(seed)
    alpha1 = rng.uniform(-2.0, 2.0)
    alpha2 = rng.uniform(0.0, 2.0)
    return canonicalize_observable(alpha1, alpha2, random_unit_vector(rng))


def random_product_state(seed) -> TwoQubitState:
    rng = _rng(seed)
    k1 = rng.normal(size=2) + 1j * rng.normal(size=2)
    k2 = rng.normal(size=2) + 1j * rng.normal(size=2)
    return product_state(k1, k2)


def random_schmidt_state(seed, mu1_range=(0.5, 1.0)) -> TwoQubitState:
    """State with mu1 uniform in ``mu1_range`` and Haar-random local bases."""
    rng = _rng(seed)
    mu1 = rng.uniform(*mu1_range)
    ua = _haar_2x2(rng)
    ub = _haar_2x2(rng)
    return schmidt_form(mu1, ua[:, 0], ub[:, 0])


def _haar_2x2(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
