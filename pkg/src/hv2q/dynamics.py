"""Unitary time evolution and the model parameters along a trajectory.

The hidden variables never evolve; only the state does, and the frame and
response parameters are rebuilt from scratch at each time point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .frame import frame_of
from .general import verify_general
from .linalg import I2, SX, SY, SZ, is_hermitian, tensor_product, unitary_exp
from .minimal import verify_minimal
from .reports import to_csv
from .states import LocalObservable, TwoQubitState

MODELS = ("general", "minimal")


def evolve(state: TwoQubitState, h: np.ndarray, t: float) -> TwoQubitState:
    psi = unitary_exp(h, t) @ state.ket
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > TOL.structural:
        raise ValueError(f"norm drift {drift:.3e} after evolution")
    return TwoQubitState(psi / np.linalg.norm(psi))


def random_hamiltonian(seed, scale: float = 1.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return scale * 0.5 * (z + z.conj().T)


def local_hamiltonian(h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    """H1 (x) I + I (x) H2."""
    return tensor_product(h1, I2) + tensor_product(I2, h2)


def heisenberg_hamiltonian(coupling: float = 1.0) -> np.ndarray:
    return coupling * sum(tensor_product(p, p) for p in (SX, SY, SZ))


def hamiltonian_from_json(data) -> np.ndarray:
    """4x4 Hermitian matrix from rows of [re, im] pairs."""
    try:
        h = np.array([[complex(float(re), float(im)) for re, im in row] for row in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed Hamiltonian: {exc}") from exc
    if h.shape != (4, 4):
        raise ValueError(f"Hamiltonian must be 4x4, got {h.shape}")
    if not is_hermitian(h, TOL.spectral):
        raise ValueError("Hamiltonian is not Hermitian")
    return h


def hamiltonian_to_json(h: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(h)]


@dataclass
class TimelineRecord:
    t: float
    state: TwoQubitState
    mu1: float
    phi: float
    n: np.ndarray
    n_prime: np.ndarray
    xi: float
    chi: float
    axis_angle: float  # gamma* (general) or theta_hat (minimal)
    discrepancy: float
    table_discrepancy: float
    passed: bool

    def row(self) -> dict:
        return {
            "t": self.t,
            "mu1": self.mu1,
            "phi": self.phi,
            "n_x": float(self.n[0]),
            "n_y": float(self.n[1]),
            "n_z": float(self.n[2]),
            "xi": self.xi,
            "chi": self.chi,
            "axis_angle": self.axis_angle,
            "discrepancy": self.discrepancy,
            "table_discrepancy": self.table_discrepancy,
            "passed": self.passed,
        }


@dataclass
class Timeline:
    model: str
    records: list = field(default_factory=list)

    @property
    def times(self) -> list:
        return [r.t for r in self.records]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def failures(self) -> list:
        return [r.t for r in self.records if not r.passed]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "model": self.model,
            "passed": self.passed,
            "failures": self.failures,
            "records": [r.row() for r in self.records],
        }

    def to_csv(self) -> str:
        return to_csv([r.row() for r in self.records])


def frame_timeline(
    psi0: TwoQubitState,
    h: np.ndarray,
    times,
    x: LocalObservable,
    y: LocalObservable,
    model: str = "general",
) -> Timeline:
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}")
    times = [float(t) for t in times]
    if any(t2 < t1 for t1, t2 in zip(times, times[1:])):
        raise ValueError("times must be nondecreasing")
    verify = verify_general if model == "general" else verify_minimal
    timeline = Timeline(model=model)
    for t in times:
        state = evolve(psi0, h, t)
        frame = frame_of(state)
        rep = verify(state, x, y, frame=frame)
        angle = rep.params["gamma"] if model == "general" else rep.params["theta_hat"]
        timeline.records.append(
            TimelineRecord(
                t=t,
                state=state,
                mu1=frame.schmidt.mu1,
                phi=frame.phi,
                n=frame.n,
                n_prime=frame.n_prime,
                xi=rep.params["xi"],
                chi=rep.params["chi"],
                axis_angle=angle,
                discrepancy=rep.analytic_discrepancy,
                table_discrepancy=rep.table_discrepancy,
                passed=rep.analytic_passed,
            )
        )
    return timeline
