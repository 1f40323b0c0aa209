"""Bell's hidden-variable model for the singlet.

Single measurements: A = sign(a.lam), B = -sign(b.lam). In a joint
measurement party 1 answers along a_hat instead of a, where a_hat makes the
angle theta_hat = pi (1 - a.b)/2 with b. Ties sign(0) resolve to +1.
"""

from __future__ import annotations

import numpy as np

from .linalg import angle_between, orthogonal_to, unit
from .sampling import DEFAULT_CHUNK, MCEstimate, chunked_sum, estimate, sample_sphere


def sign(x) -> np.ndarray:
    return np.where(np.asarray(x) >= 0.0, 1, -1)


def place_axis(b, toward, angle: float) -> np.ndarray:
    """Unit vector at ``angle`` from ``b`` in span{b, toward}, on the side of ``toward``.

    When ``toward`` is (anti)parallel to ``b`` the plane is fixed by a
    deterministic vector orthogonal to ``b``.
    """
    b = unit(b)
    perp = np.asarray(toward, dtype=float) - np.dot(toward, b) * b
    norm = np.linalg.norm(perp)
    perp = perp / norm if norm >= 1e-9 else orthogonal_to(b)
    return unit(np.cos(angle) * b + np.sin(angle) * perp)


def bell_theta_hat(a, b) -> tuple[float, np.ndarray]:
    """Return (theta_hat, a_hat) for unit settings a, b."""
    cos_theta = float(np.clip(np.dot(a, b), -1.0, 1.0))
    theta_hat = 0.5 * np.pi * (1.0 - cos_theta)
    return theta_hat, place_axis(b, a, theta_hat)


def bell_assign_single(a, b, lam) -> tuple[np.ndarray, np.ndarray]:
    lam = np.asarray(lam, dtype=float)
    return sign(lam @ np.asarray(a)), -sign(lam @ np.asarray(b))


def bell_assign_joint(a, b, lam) -> tuple[np.ndarray, np.ndarray]:
    _, a_hat = bell_theta_hat(a, b)
    lam = np.asarray(lam, dtype=float)
    return sign(lam @ a_hat), -sign(lam @ np.asarray(b))


def bell_correlation(a, b) -> float:
    """<A B> of the joint assignment, exact: 2 theta_hat/pi - 1 = -a.b."""
    _, a_hat = bell_theta_hat(a, b)
    gamma = angle_between(a_hat, b)
    return 2.0 * gamma / np.pi - 1.0


def bell_monte_carlo(
    a, b, n_samples: int, seed: int, chunk_size: int = DEFAULT_CHUNK, joint: bool = True, threads: int | None = None
) -> tuple[MCEstimate, MCEstimate, MCEstimate]:
    """MC estimates of <A>, <B>, <AB> under the joint (or single) assignment."""
    assign = bell_assign_joint if joint else bell_assign_single

    def kernel(rng, n):
        lam = sample_sphere(rng, n)
        av, bv = assign(a, b, lam)
        ab = av * bv
        return np.array([av.sum(), n, bv.sum(), n, ab.sum(), n], dtype=float)

    s = chunked_sum(kernel, n_samples, seed, chunk_size, threads)
    return estimate(s[0], s[1], n_samples), estimate(s[2], s[3], n_samples), estimate(s[4], s[5], n_samples)
