"""Stop-and-wait ARQ link simulator with per-symbol error draws.

Randomness comes from numpy's Philox counter-based generator keyed by the
64-bit seed. Trials are processed in fixed blocks; block ``b`` uses the
stream ``Philox(key=seed).jumped(b)``, so any partitioning of blocks over
workers reproduces the serial result.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

BLOCK_TRIALS = 4096
# bound on uniforms materialised per draw
_MAX_DRAW = 1 << 22


@dataclass(frozen=True)
class TrialConfig:
    sep: float
    n_sym: int
    trials: int = 100_000
    seed: int = 0
    max_rounds_per_packet: int = 100_000

    def __post_init__(self):
        if not 0 <= self.sep < 1:
            raise ValueError("sep must be in [0, 1)")
        if self.n_sym < 1:
            raise ValueError("n_sym must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.max_rounds_per_packet < 1:
            raise ValueError("max_rounds_per_packet must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass
class TrialStats:
    mean_transmissions: float
    stderr: float
    trials: int
    histogram: dict = field(default_factory=dict)
    capped: int = 0
    energy_mean: float | None = None
    energy_stderr: float | None = None


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed).jumped(block))


def _run_block(cfg: TrialConfig, rng: np.random.Generator, n: int) -> np.ndarray:
    """Transmissions used by each of `n` trials (0 marks a capped trial)."""
    counts = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    rounds = 0
    while active.size and rounds < cfg.max_rounds_per_packet:
        rounds += 1
        counts[active] += 1
        ok = np.empty(active.size, dtype=bool)
        step = max(1, _MAX_DRAW // cfg.n_sym)
        for lo in range(0, active.size, step):
            u = rng.random((min(step, active.size - lo), cfg.n_sym))
            ok[lo:lo + u.shape[0]] = ~np.any(u < cfg.sep, axis=1)
        active = active[~ok]
    counts[active] = 0
    return counts


def simulate_link(cfg: TrialConfig, round_energy: float | None = None) -> TrialStats:
    """Simulate `cfg.trials` packets; `round_energy` (J, data + ACK) adds an energy estimate."""
    parts = []
    for b, lo in enumerate(range(0, cfg.trials, BLOCK_TRIALS)):
        n = min(BLOCK_TRIALS, cfg.trials - lo)
        parts.append(_run_block(cfg, _block_rng(cfg.seed, b), n))
    counts = np.concatenate(parts)
    capped = int(np.count_nonzero(counts == 0))
    done = counts[counts > 0]
    if capped:
        log.warning("%d of %d trials hit the %d-round cap and were excluded",
                    capped, cfg.trials, cfg.max_rounds_per_packet)
    if done.size == 0:
        raise RuntimeError("every trial hit the round cap")
    mean = float(done.mean())
    stderr = float(done.std(ddof=1) / np.sqrt(done.size)) if done.size > 1 else 0.0
    values, freq = np.unique(counts, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, freq)}
    stats = TrialStats(mean_transmissions=mean, stderr=stderr, trials=cfg.trials, histogram=hist, capped=capped)
    if round_energy is not None:
        e = done * float(round_energy)
        stats.energy_mean = float(e.mean())
        stats.energy_stderr = float(e.std(ddof=1) / np.sqrt(e.size)) if e.size > 1 else 0.0
    return stats


def compare_to_analytic(stats: TrialStats, analytic_n_re: float, z_max: float = 3.0) -> dict:
    if not stats.stderr > 0:
        raise ValueError("stderr must be > 0 to form a z-score")
    z = abs(stats.mean_transmissions - analytic_n_re) / stats.stderr
    return {"z_score": z, "pass": bool(z <= z_max)}
