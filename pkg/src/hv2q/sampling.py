"""Hidden-variable sampling and chunked, seed-deterministic Monte Carlo.

Each chunk gets its own generator spawned from ``SeedSequence(seed)``, and
per-chunk sums are reduced in chunk order, so a ``(seed, n_samples,
chunk_size)`` triple gives bit-identical results regardless of how many
threads run the chunks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .states import sample_unit_vectors

DEFAULT_CHUNK = 1 << 17


def sample_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` hidden variables uniform on the unit sphere (density 1/4pi), shape (n, 3)."""
    return sample_unit_vectors(rng, n)


def sample_circle(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` angles uniform on [0, 2pi): the single real hidden parameter."""
    return rng.uniform(0.0, 2 * np.pi, n)


def thread_count() -> int:
    env = os.environ.get("HV2Q_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def chunked_sum(
    kernel: Callable[[np.random.Generator, int], np.ndarray],
    n_samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int | None = None,
) -> np.ndarray:
    """Sum ``kernel(rng, n)`` over chunks covering ``n_samples`` draws."""
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    if chunk_size <= 0:
        raise ValueError("chunk_size must be positive")
    sizes = [chunk_size] * (n_samples // chunk_size)
    if n_samples % chunk_size:
        sizes.append(n_samples % chunk_size)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(children, sizes))

    def run(job):
        ss, n = job
        return np.asarray(kernel(np.random.default_rng(ss), n), dtype=float)

    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(jobs) == 1:
        parts = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, jobs))
    total = np.zeros_like(parts[0])
    for p in parts:
        total = total + p
    return total


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float

    def within(self, value: float, sigmas: float = 4.0, floor: float = 1e-12) -> bool:
        return abs(self.mean - value) <= sigmas * self.stderr + floor

    def z(self, value: float) -> float:
        if self.stderr == 0.0:
            return 0.0 if abs(self.mean - value) <= 1e-12 else float("inf")
        return float((self.mean - value) / self.stderr)

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr}


def estimate(total: float, total_sq: float, n: int) -> MCEstimate:
    mean = float(total / n)
    var = max(0.0, total_sq / n - mean * mean)
    return MCEstimate(mean, float(np.sqrt(var / n)))


@dataclass(frozen=True)
class MCResult:
    """MC estimates of <X>, <Y>, <XY> and the empirical (F, G) sign table."""

    n: int
    x: MCEstimate
    y: MCEstimate
    xy: MCEstimate
    table: np.ndarray  # [F index, G index], index 0 = +1

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "x": self.x.to_dict(),
            "y": self.y.to_dict(),
            "xy": self.xy.to_dict(),
            "table": self.table.tolist(),
        }


def moment_kernel(assign: Callable[[np.ndarray], tuple], draw: Callable[[np.random.Generator, int], np.ndarray]):
    """Kernel accumulating value moments for an ``assign(lambdas) -> (x, y, F, G)`` map."""

    def kernel(rng: np.random.Generator, n: int) -> np.ndarray:
        lam = draw(rng, n)
        xv, yv, f, g = assign(lam)
        xy = xv * yv
        fp, gp = f > 0, g > 0
        return np.array([
            xv.sum(), (xv * xv).sum(),
            yv.sum(), (yv * yv).sum(),
            xy.sum(), (xy * xy).sum(),
            np.count_nonzero(fp & gp), np.count_nonzero(fp & ~gp),
            np.count_nonzero(~fp & gp), np.count_nonzero(~fp & ~gp),
        ], dtype=float)

    return kernel


def run_moments(assign, draw, n_samples: int, seed: int, chunk_size: int = DEFAULT_CHUNK, threads: int | None = None) -> MCResult:
    s = chunked_sum(moment_kernel(assign, draw), n_samples, seed, chunk_size, threads)
    return MCResult(
        n=n_samples,
        x=estimate(s[0], s[1], n_samples),
        y=estimate(s[2], s[3], n_samples),
        xy=estimate(s[4], s[5], n_samples),
        table=(s[6:10] / n_samples).reshape(2, 2),
    )
