"""Monte Carlo estimates of Jacobi moments from unitary Brownian motion.

The process starts at the identity and is advanced by exact exponential
steps ``U <- exp(i sqrt(dt) H) U`` where ``H`` is a GUE matrix whose diagonal
entries are standard real normals and whose off-diagonal entries are
standard complex normals (``E|H_ab|^2 = 1``).  With this normalisation the
moment time ``t`` corresponds to physical time ``T = t * time_scale`` with
``time_scale = 1/d`` by default.

Sampling is split into independent streams seeded from one
``numpy.random.SeedSequence``; per-stream partial sums are merged in stream
order, so results are reproducible whatever executor is used.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

__all__ = [
    "MCConfig",
    "MCResult",
    "gue_batch",
    "unitary_step",
    "simulate_unitary_bm",
    "jacobi_trace_powers",
    "estimate_moments",
]

# truncation tolerance for the Taylor series of the step exponential
_TAYLOR_TOL = 1e-16
# above this norm the Taylor route loses accuracy, so diagonalise instead
_TAYLOR_MAX_NORM = 0.5


@dataclass(frozen=True)
class MCConfig:
    d: int
    m: int
    p: int
    t: float
    steps: int = 400
    samples: int = 10_000
    seed: int = 0
    streams: int = 4
    batch: int = 500
    time_scale: Optional[float] = None

    def __post_init__(self):
        if self.d < 1 or self.steps < 1 or self.samples < 1 or self.streams < 1:
            raise DomainError("d, steps, samples and streams must be positive")
        if not 1 <= self.m <= self.p <= self.d:
            raise DomainError("need 1 <= m <= p <= d")
        if self.t < 0:
            raise DomainError("t must be nonnegative")
        if self.time_scale is not None and not self.time_scale > 0:
            raise DomainError("time_scale must be positive")
        if self.batch < 1:
            raise DomainError("batch must be positive")

    @property
    def physical_time(self) -> float:
        scale = 1.0 / self.d if self.time_scale is None else self.time_scale
        return self.t * scale

    def stream_sizes(self) -> list[int]:
        base, extra = divmod(self.samples, self.streams)
        return [base + (1 if i < extra else 0) for i in range(self.streams)]


@dataclass
class MCResult:
    config: MCConfig
    mean: dict[int, float]
    stderr: dict[int, float]
    samples_used: int
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "config": {
                "d": cfg.d, "m": cfg.m, "p": cfg.p, "t": cfg.t,
                "steps": cfg.steps, "samples": cfg.samples, "seed": cfg.seed,
                "streams": cfg.streams, "physical_time": cfg.physical_time,
            },
            "moments": [
                {"n": n, "mean": self.mean[n], "stderr": self.stderr[n]}
                for n in sorted(self.mean)
            ],
            "samples_used": self.samples_used,
            "wall_time": self.wall_time,
        }


def gue_batch(rng: np.random.Generator, batch: int, d: int) -> np.ndarray:
    """``batch`` independent GUE matrices with unit-variance entries."""
    g = rng.standard_normal((batch, d, d))
    # the strict upper triangle of g and of g^T give real and imaginary parts
    upper = np.triu(g, 1)
    lower = np.triu(np.swapaxes(g, 1, 2), 1)
    z = (upper + 1j * lower) / math.sqrt(2.0)
    h = z + np.conj(np.swapaxes(z, 1, 2))
    idx = np.arange(d)
    h[:, idx, idx] = g[:, idx, idx]
    return h


def _expm_taylor(x: np.ndarray, norm: float) -> np.ndarray:
    d = x.shape[-1]
    # smallest order whose remainder bound falls below the tolerance
    order, bound = 1, norm
    while bound > _TAYLOR_TOL:
        order += 1
        bound *= norm / order
    # Paterson-Stockmeyer: powers up to x^s, then Horner in x^s
    s = max(1, math.isqrt(order))
    eye = np.eye(d, dtype=x.dtype)
    powers = [eye, x]
    for _ in range(2, s + 1):
        powers.append(powers[-1] @ x)
    coef = [1.0 / math.factorial(k) for k in range(order + 1)]
    blocks = order // s

    def block(b):
        lo = b * s
        hi = min(lo + s, order + 1)
        acc = coef[lo] * eye
        for k in range(lo + 1, hi):
            acc = acc + coef[k] * powers[k - lo]
        return acc

    out = block(blocks)
    for b in range(blocks - 1, -1, -1):
        out = block(b) + powers[s] @ out
    return out


def _expm_eigh(h: np.ndarray, scale: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * scale * w)[:, None, :]) @ np.conj(np.swapaxes(v, 1, 2))


def unitary_step(h: np.ndarray, dt: float) -> np.ndarray:
    """``exp(i sqrt(dt) h)`` for a batch of Hermitian matrices."""
    scale = math.sqrt(dt)
    # Frobenius norm bounds the operator norm of every matrix in the batch
    norm = scale * float(np.sqrt(np.max(np.sum(np.abs(h) ** 2, axis=(1, 2)))))
    if norm <= _TAYLOR_MAX_NORM:
        return _expm_taylor(1j * scale * h, norm)
    return _expm_eigh(h, scale)


def simulate_unitary_bm(d: int, T: float, steps: int, batch: int,
                        rng: np.random.Generator) -> np.ndarray:
    """A batch of unitary Brownian motions at physical time ``T``."""
    dt = T / steps
    u = np.broadcast_to(np.eye(d, dtype=complex), (batch, d, d)).copy()
    if T == 0:
        return u
    for _ in range(steps):
        u = unitary_step(gue_batch(rng, batch, d), dt) @ u
    return u


def jacobi_trace_powers(u: np.ndarray, m: int, p: int, n_max: int) -> np.ndarray:
    """``tr(J^n) / m`` for ``n = 1..n_max`` with ``J = Y Y*``, ``Y`` the m x p corner."""
    y = u[:, :m, :p]
    jm = y @ np.conj(np.swapaxes(y, 1, 2))
    ev = np.clip(np.linalg.eigvalsh(jm), 0.0, 1.0)
    powers = ev[:, :, None] ** np.arange(1, n_max + 1)
    return powers.sum(axis=1) / m


def _run_stream(cfg: MCConfig, seed_seq: np.random.SeedSequence, size: int,
                n_max: int) -> tuple[int, np.ndarray, np.ndarray]:
    rng = np.random.Generator(np.random.Philox(seed_seq))
    total = np.zeros(n_max)
    total_sq = np.zeros(n_max)
    done = 0
    while done < size:
        b = min(cfg.batch, size - done)
        u = simulate_unitary_bm(cfg.d, cfg.physical_time, cfg.steps, b, rng)
        vals = jacobi_trace_powers(u, cfg.m, cfg.p, n_max)
        total += vals.sum(axis=0)
        total_sq += (vals ** 2).sum(axis=0)
        done += b
    return size, total, total_sq


def estimate_moments(cfg: MCConfig, n_max: int = 2, executor: Optional[Executor] = None,
                     progress: Optional[Callable[[int, int], None]] = None) -> MCResult:
    """Sample means and standard errors of ``tr(J^n)/m`` for ``n = 1..n_max``."""
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    start = time.perf_counter()
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.streams)
    sizes = cfg.stream_sizes()
    jobs = [(s, size) for s, size in zip(seeds, sizes) if size > 0]
    if executor is None:
        parts = []
        for i, (s, size) in enumerate(jobs):
            parts.append(_run_stream(cfg, s, size, n_max))
            if progress:
                progress(i + 1, len(jobs))
    else:
        futures = [executor.submit(_run_stream, cfg, s, size, n_max) for s, size in jobs]
        parts = [f.result() for f in futures]

    count = 0
    total = np.zeros(n_max)
    total_sq = np.zeros(n_max)
    for size, s1, s2 in parts:
        count += size
        total += s1
        total_sq += s2
    mean = total / count
    if count > 1:
        var = np.maximum(total_sq - count * mean ** 2, 0.0) / (count - 1)
        se = np.sqrt(var / count)
    else:
        se = np.full(n_max, math.inf)
    return MCResult(
        config=cfg,
        mean={n: float(mean[n - 1]) for n in range(1, n_max + 1)},
        stderr={n: float(se[n - 1]) for n in range(1, n_max + 1)},
        samples_used=count,
        wall_time=time.perf_counter() - start,
    )
