"""Continuous-time random walk Monte Carlo: memoryless and heavy-tailed.

Walkers hop +/- dx with probability 1/2.  In memoryless mode (alpha = 1)
every hop takes exactly one slot dtau and the mean square displacement grows
linearly.  In heavy-tailed mode the number of slots between hops is drawn
from the discrete power law

    psi(n) = d_alpha * n^-(1+alpha),   n >= 1,   0 < alpha < 1,

whose normalisation d_alpha is computed once by partial summation plus an
analytic midpoint tail.  The waiting times have infinite mean, walkers get
stuck for long stretches, and the ensemble subdiffuses: <x^2> ~ t^alpha
with the diffusivity identified through

    k_alpha = dx^2 / (d_alpha * dtau^alpha * |Gamma(-alpha)|),

which is the scaling under which the occupation density converges to the
time-fractional fundamental solution (see :mod:`fracalc.diffusion`).

Reproducibility: every walker owns a counter-based Philox stream at a fixed
offset derived from the seed, so results are bit-identical for a given
config regardless of batching or thread count.  FRACALC_THREADS (or the
``threads`` argument) only splits walker blocks across a pool; block results
are reduced in index order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BinningError, MemoryBudgetError, ValidationError
from .special_fn import gamma

__all__ = [
    "WalkConfig",
    "WaitingDist",
    "EnsembleStats",
    "sample_waiting",
    "run_ensemble",
    "compare_to_fundamental",
]

_TABLE_SIZE = 1_000_000


@dataclass(frozen=True)
class WalkConfig:
    """Step size, slot duration, tail order (1 = memoryless), ensemble size."""

    dx: float
    dtau: float
    alpha: float
    n_walkers: int
    t_end: float
    seed: int

    def __post_init__(self) -> None:
        if not (self.dx > 0.0 and self.dtau > 0.0 and self.t_end > 0.0):
            raise ValidationError("dx, dtau, t_end must be > 0")
        if not (0.0 < self.alpha <= 1.0):
            raise ValidationError("alpha must lie in (0,1] (1 = memoryless)")
        if self.n_walkers < 1:
            raise ValidationError("need at least one walker")

    @property
    def k_alpha(self) -> float:
        """Diffusivity implied by the lattice scaling."""
        if self.alpha == 1.0:
            return self.dx**2 / self.dtau
        d_a = _d_alpha(self.alpha)
        gam = abs(gamma(-self.alpha))
        return self.dx**2 / (d_a * self.dtau**self.alpha * gam)


@lru_cache(maxsize=32)
def _d_alpha(alpha: float) -> float:
    """Normalisation with sum_{n>=1} d_alpha n^-(1+alpha) = 1."""
    n = np.arange(1, _TABLE_SIZE + 1, dtype=float)
    partial = float(np.sum(n ** (-1.0 - alpha)))
    tail = (_TABLE_SIZE + 0.5) ** (-alpha) / alpha  # midpoint integral tail
    return 1.0 / (partial + tail)


@lru_cache(maxsize=8)
def _waiting_tables(alpha: float):
    n = np.arange(1, _TABLE_SIZE + 1, dtype=float)
    pmf = _d_alpha(alpha) * n ** (-1.0 - alpha)
    cdf = np.cumsum(pmf)
    cdf.setflags(write=False)
    return cdf


@dataclass(frozen=True)
class WaitingDist:
    """Discrete power-law waiting distribution with a tabulated head.

    Draws beyond the table are inverted from the analytic midpoint tail of
    the survival function; the induced distribution matches the exact one to
    O(n^-2) relative there.
    """

    alpha: float
    d_alpha: float
    table_size: int

    @classmethod
    def build(cls, alpha: float) -> "WaitingDist":
        if not (0.0 < alpha < 1.0):
            raise ValidationError("WaitingDist needs alpha in (0,1)")
        return cls(alpha, _d_alpha(alpha), _TABLE_SIZE)

    @property
    def cdf(self) -> np.ndarray:
        return _waiting_tables(self.alpha)

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random(size)
        cdf = self.cdf
        out = np.searchsorted(cdf, u, side="left") + 1
        over = u >= cdf[-1]
        if np.any(over):
            v = 1.0 - u[over]  # tail mass below the draw
            n_tail = (self.d_alpha / (self.alpha * v)) ** (1.0 / self.alpha) + 0.5
            out[over] = np.minimum(n_tail, 2.0**62).astype(np.int64)
        return out.astype(np.int64)


def sample_waiting(w: WaitingDist, rng: np.random.Generator) -> int:
    """One waiting draw (in slots, >= 1) from the walker's stream."""
    return int(w.sample_many(rng, 1)[0])


@dataclass(frozen=True)
class EnsembleStats:
    """Log-spaced MSD series plus the occupation histogram at t_end."""

    times: np.ndarray
    msd: np.ndarray
    hist_edges: np.ndarray
    hist_counts: np.ndarray
    n_walkers: int


def _walker_rng(seed: int, walker: int) -> np.random.Generator:
    key = int(np.random.SeedSequence(seed).generate_state(1, np.uint64)[0])
    return np.random.Generator(np.random.Philox(key=key, counter=walker << 128))


def _run_block(cfg: WalkConfig, wdist, sample_times: np.ndarray,
               walkers: range):
    x2 = np.zeros(sample_times.size)
    finals = np.empty(len(walkers))
    slots_end = cfg.t_end / cfg.dtau
    for i, w in enumerate(walkers):
        rng = _walker_rng(cfg.seed, w)
        arrivals = []
        steps = []
        total = 0.0
        chunk = 64
        while total <= slots_end:
            if cfg.alpha == 1.0:
                waits = np.ones(chunk)
            else:
                waits = wdist.sample_many(rng, chunk).astype(float)
            s = rng.random(chunk)
            arrivals.append(waits)
            steps.append(np.where(s < 0.5, -cfg.dx, cfg.dx))
            total += float(np.sum(waits))
            chunk = min(4 * chunk, 65536)
        t_arr = np.cumsum(np.concatenate(arrivals)) * cfg.dtau
        pos = np.concatenate([[0.0], np.cumsum(np.concatenate(steps))])
        idx = np.searchsorted(t_arr, sample_times, side="right")
        x2 += pos[idx] ** 2
        finals[i] = pos[int(np.searchsorted(t_arr, cfg.t_end, side="right"))]
    return x2, finals


def run_ensemble(
    cfg: WalkConfig,
    n_times: int = 48,
    threads: int | None = None,
    mem_cap: int = 2**26,
) -> EnsembleStats:
    """Simulate the ensemble; MSD on a log-spaced grid, histogram at t_end.

    Deterministic for a given config: walker streams are fixed by (seed,
    walker index) alone, and block results are reduced in walker order.
    """
    if cfg.n_walkers * n_times > mem_cap:
        raise MemoryBudgetError(
            f"n_walkers * n_times = {cfg.n_walkers * n_times} exceeds "
            f"mem_cap = {mem_cap}"
        )
    sample_times = np.geomspace(cfg.dtau, cfg.t_end, n_times)
    sample_times[-1] = cfg.t_end
    wdist = WaitingDist.build(cfg.alpha) if cfg.alpha < 1.0 else None

    if threads is None:
        threads = int(os.environ.get("FRACALC_THREADS", "1"))
    threads = max(1, threads)
    block = 4096
    blocks = [
        range(lo, min(lo + block, cfg.n_walkers))
        for lo in range(0, cfg.n_walkers, block)
    ]
    if threads == 1 or len(blocks) == 1:
        results = [_run_block(cfg, wdist, sample_times, b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(lambda b: _run_block(cfg, wdist, sample_times, b), blocks)
            )
    x2 = np.zeros(sample_times.size)
    finals = []
    for bx2, bf in results:  # fixed block order: bit-reproducible reduction
        x2 += bx2
        finals.append(bf)
    finals = np.concatenate(finals)
    msd = x2 / cfg.n_walkers

    # histogram on the step lattice, bins two lattice units wide
    width = 2.0 * cfg.dx
    lo = math.floor(finals.min() / width) * width - 0.5 * width
    hi = math.ceil(finals.max() / width) * width + 0.5 * width
    nbin = max(1, int(round((hi - lo) / width)))
    counts, edges = np.histogram(finals, bins=nbin, range=(lo, hi))
    return EnsembleStats(sample_times, msd, edges, counts, cfg.n_walkers)


def compare_to_fundamental(
    stats: EnsembleStats, profile_x: np.ndarray, profile_u: np.ndarray
) -> float:
    """Sup-norm gap between the ensemble density and a reference profile.

    The reference (x, u) pair normally comes from the diffusion solver at
    matching order and diffusivity; bins outside its support raise
    BinningError rather than extrapolating.
    """
    centers = 0.5 * (stats.hist_edges[:-1] + stats.hist_edges[1:])
    if centers.min() < profile_x.min() - 1e-9 or centers.max() > profile_x.max() + 1e-9:
        raise BinningError(
            "histogram support extends beyond the reference profile grid"
        )
    widths = np.diff(stats.hist_edges)
    density = stats.hist_counts / (stats.n_walkers * widths)
    u_ref = np.interp(centers, profile_x, profile_u)
    return float(np.max(np.abs(density - u_ref)))
