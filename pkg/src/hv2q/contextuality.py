"""Contextuality of the value assignments.

Two demonstrations: the value of X in a joint measurement differs from its
value when measured alone (on a set of hidden variables of positive
measure), and the Peres square of nine two-qubit Pauli products, for which
no context-independent assignment of +-1 values exists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .caps import cap_fraction, cap_intersection
from .frame import CanonicalFrame, frame_of
from .general import assign_values, solve_ahat
from .linalg import EX, EY, EZ, I2, SX, SY, SZ, angle_between, tensor_product
from .sampling import DEFAULT_CHUNK, chunked_sum, estimate, sample_sphere
from .states import LocalObservable, TwoQubitState, identity, singlet, spin

SINGLE_CONVENTIONS = ("a", "a_prime")


def single_context_axis(frame: CanonicalFrame, x: LocalObservable, convention: str) -> np.ndarray:
    if convention == "a":
        return x.axis
    if convention == "a_prime":
        return frame.rotate(x.axis)
    raise ValueError(f"unknown convention {convention!r}")


def single_values(frame: CanonicalFrame, x: LocalObservable, lam, convention: str = "a") -> np.ndarray:
    """F for X measured alone: the cap of half-angle xi around the single-context axis."""
    cos_xi = -frame.sin2phi * float(x.axis @ frame.n)
    axis = single_context_axis(frame, x, convention)
    return np.where(np.asarray(lam) @ axis >= cos_xi, 1, -1)


def disagreement_measure(xi: float, angle: float) -> float:
    """Measure of the symmetric difference of two caps of half-angle xi, ``angle`` apart."""
    return float(2.0 * (cap_fraction(xi) - cap_intersection(angle, xi, xi)))


@dataclass
class ViolationReport:
    a_hat: np.ndarray
    xi: float
    analytic: dict  # convention -> measure
    axis_angles: dict  # convention -> angle(a_hat, single-context axis)
    mc: dict = field(default_factory=dict)  # convention -> MCEstimate of the F disagreement
    mc_product: dict = field(default_factory=dict)  # convention -> MCEstimate of the product-rule violation

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "a_hat": self.a_hat.tolist(),
            "xi": self.xi,
            "analytic": dict(self.analytic),
            "axis_angles": dict(self.axis_angles),
            "mc": {k: v.to_dict() for k, v in self.mc.items()},
            "mc_product_rule": {k: v.to_dict() for k, v in self.mc_product.items()},
        }


def product_rule_violation(
    state: TwoQubitState,
    x: LocalObservable,
    y: LocalObservable,
    n_samples: int = 0,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int | None = None,
) -> ViolationReport:
    """Compare X's joint-context value with its single-context value.

    The joint-context value uses a_hat; the single-context value uses either
    a itself or its rotated image a'. Both conventions are reported. The
    product-rule check compares (X (x) Y)(lam) with X(lam) * Y(lam) built
    from single measurements.
    """
    frame = frame_of(state)
    params = solve_ahat(frame, x, y)
    report = ViolationReport(a_hat=params.a_hat, xi=params.xi, analytic={}, axis_angles={})
    for conv in SINGLE_CONVENTIONS:
        angle = angle_between(params.a_hat, single_context_axis(frame, x, conv))
        report.axis_angles[conv] = angle
        report.analytic[conv] = disagreement_measure(params.xi, angle)
    if not n_samples:
        return report

    def kernel(rng, n):
        lam = sample_sphere(rng, n)
        xj, yj, fj, _ = assign_values(params, x, y, lam)
        out = []
        for conv in SINGLE_CONVENTIONS:
            fs = single_values(frame, x, lam, conv)
            xs = x.alpha1 + x.alpha2 * fs
            out.append(np.count_nonzero(fs != fj))
            out.append(np.count_nonzero(~np.isclose(xj * yj, xs * yj, rtol=0.0, atol=1e-12)))
        return np.array(out, dtype=float)

    s = chunked_sum(kernel, n_samples, seed, chunk_size, threads)
    for k, conv in enumerate(SINGLE_CONVENTIONS):
        report.mc[conv] = estimate(s[2 * k], s[2 * k], n_samples)
        report.mc_product[conv] = estimate(s[2 * k + 1], s[2 * k + 1], n_samples)
    return report


_PAULI = {"I": (I2, None), "X": (SX, EX), "Y": (SY, EY), "Z": (SZ, EZ)}

PERES_LAYOUT = (
    (("X", "I"), ("I", "X"), ("X", "X")),
    (("I", "Y"), ("Y", "I"), ("Y", "Y")),
    (("X", "Y"), ("Y", "X"), ("Z", "Z")),
)
# required products: rows all +I; columns +I, +I, -I
ROW_SIGNS = (1, 1, 1)
COL_SIGNS = (1, 1, -1)


def peres_operator(entry) -> np.ndarray:
    return tensor_product(_PAULI[entry[0]][0], _PAULI[entry[1]][0])


def _product_sign(mats) -> int:
    prod = mats[0] @ mats[1] @ mats[2]
    for sign in (1, -1):
        if np.array_equal(prod, sign * np.eye(4)):
            return sign
    raise ValueError("product is not +-I")


def matrix_signs() -> tuple[list, list]:
    ops = [[peres_operator(e) for e in row] for row in PERES_LAYOUT]
    rows = [_product_sign(ops[i]) for i in range(3)]
    cols = [_product_sign([ops[i][j] for i in range(3)]) for j in range(3)]
    return rows, cols


def identity_violations(values: np.ndarray) -> np.ndarray:
    """Boolean array (..., 6): which row/column identities a 3x3 value grid breaks."""
    values = np.asarray(values)
    rows = values.prod(axis=-1) != np.array(ROW_SIGNS)
    cols = values.prod(axis=-2) != np.array(COL_SIGNS)
    return np.concatenate([rows, cols], axis=-1)


def noncontextual_assignments() -> list:
    """Every +-1 assignment to the nine operators satisfying all six identities."""
    found = []
    for vals in itertools.product((1, -1), repeat=9):
        grid = np.array(vals).reshape(3, 3)
        if not identity_violations(grid).any():
            found.append(grid)
    return found


def model_square_values(state: TwoQubitState, lam, convention: str = "a") -> np.ndarray:
    """Values the model assigns to the nine operators, shape (n, 3, 3).

    Single-party entries (one factor the identity) are measured alone; the
    others are joint measurements whose value is the product of the two
    assigned outcomes.
    """
    frame = frame_of(state)
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    grid = np.empty((lam.shape[0], 3, 3), dtype=int)
    for i, row in enumerate(PERES_LAYOUT):
        for j, (p, q) in enumerate(row):
            if q == "I":
                grid[:, i, j] = single_values(frame, spin(_PAULI[p][1]), lam, convention)
            elif p == "I":
                y = spin(_PAULI[q][1])
                params = solve_ahat(frame, identity(), y)
                grid[:, i, j] = assign_values(params, identity(), y, lam)[3]
            else:
                x, y = spin(_PAULI[p][1]), spin(_PAULI[q][1])
                params = solve_ahat(frame, x, y)
                xv, yv, _, _ = assign_values(params, x, y, lam)
                grid[:, i, j] = np.rint(xv * yv).astype(int)
    return grid


@dataclass
class SquareReport:
    row_signs: list
    col_signs: list
    noncontextual_count: int
    n_samples: int = 0
    violation_fraction: float = 0.0
    identity_fractions: list = field(default_factory=list)
    joint_vs_single_fraction: float = 0.0

    @property
    def identity_labels(self) -> list:
        return [f"row{i + 1}" for i in range(3)] + [f"col{j + 1}" for j in range(3)]

    @property
    def violated_identities(self) -> list:
        return [lab for lab, f in zip(self.identity_labels, self.identity_fractions) if f > 0]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "operators": [["".join(e) for e in row] for row in PERES_LAYOUT],
            "required_row_signs": list(ROW_SIGNS),
            "required_col_signs": list(COL_SIGNS),
            "row_signs": self.row_signs,
            "col_signs": self.col_signs,
            "noncontextual_assignments": self.noncontextual_count,
            "n_samples": self.n_samples,
            "violation_fraction": self.violation_fraction,
            "identity_fractions": dict(zip(self.identity_labels, self.identity_fractions)),
            "violated_identities": self.violated_identities,
            "joint_vs_single_fraction": self.joint_vs_single_fraction,
        }


def peres_square(state: TwoQubitState | None = None, n_samples: int = 1000, seed: int = 0) -> SquareReport:
    rows, cols = matrix_signs()
    report = SquareReport(row_signs=rows, col_signs=cols, noncontextual_count=len(noncontextual_assignments()))
    if n_samples:
        state = singlet() if state is None else state
        lam = sample_sphere(np.random.default_rng(seed), n_samples)
        grid = model_square_values(state, lam)
        viol = identity_violations(grid)
        report.n_samples = n_samples
        report.violation_fraction = float(viol.any(axis=-1).mean())
        report.identity_fractions = [float(v) for v in viol.mean(axis=0)]
        # joint entries against the product of their factors measured alone
        frame = frame_of(state)
        differs = np.zeros(n_samples, dtype=bool)
        for i, row in enumerate(PERES_LAYOUT):
            for j, (p, q) in enumerate(row):
                if "I" in (p, q):
                    continue
                y = spin(_PAULI[q][1])
                g_alone = assign_values(solve_ahat(frame, identity(), y), identity(), y, lam)[3]
                f_alone = single_values(frame, spin(_PAULI[p][1]), lam)
                differs |= grid[:, i, j] != f_alone * g_alone
        report.joint_vs_single_fraction = float(differs.mean())
    return report
