"""Seeded Monte Carlo dephasing during state transfer.

The transfer time is sliced into equal segments (default 25).  After each
segment, with probability p, a single Z is applied at one uniformly random
site.  The score of a trial is the probability of finding the excitation
on the expected output site in the final state.

Reproducibility contract: every trial owns a substream spawned
deterministically from (seed, trial index), and each trial draws exactly
``steps`` uniforms followed by ``steps`` site indices, whether or not the
flips fire.  Identical (seed, config, inputs) therefore give bit-identical
records run to run.  The batched and single-trial code paths share the
draw pattern and agree to floating-point roundoff (their matrix products
may round differently).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .algebra import BitConfig, StateVector
from .evolution import Propagator

__all__ = [
    "NoiseConfig",
    "RunRecord",
    "TransferTask",
    "trial_rngs",
    "dephasing_trial",
    "dephasing_ensemble",
    "noise_sweep",
]

#: Where in each segment the possible phase flip is applied.
ERROR_PLACEMENT = "evolve-then-flip"


@dataclass(frozen=True)
class NoiseConfig:
    p: float
    steps: int = 25
    trials: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"flip probability must be in [0, 1], got {self.p}")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class RunRecord:
    p: float
    mean_fidelity: float
    standard_error: float
    trials: int
    seed: int
    hamiltonian: str
    source_site: int
    target_site: int
    error_placement: str = ERROR_PLACEMENT

    def __post_init__(self):
        if not 0.0 <= self.mean_fidelity <= 1.0:
            raise ValueError(f"mean fidelity {self.mean_fidelity} out of [0, 1]")


@dataclass(frozen=True)
class TransferTask:
    """One Hamiltonian with its transfer endpoints for the comparison."""

    label: str
    prop: Propagator
    source: BitConfig
    measure_site: int
    total_time: float


def trial_rngs(seed: int, trials: int) -> List[np.random.Generator]:
    """Deterministic per-trial generators from one 64-bit seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def _trial_draws(rng: np.random.Generator, steps: int, n_sites: int):
    """The fixed per-trial draw pattern shared by all code paths."""
    uniforms = rng.random(steps)
    sites = rng.integers(1, n_sites + 1, size=steps)
    return uniforms, sites


def dephasing_trial(prop: Propagator, source: BitConfig, measure_site: int,
                    total_time: float, cfg: NoiseConfig,
                    rng: np.random.Generator) -> float:
    """One noisy transfer; returns P(measure_site is up) at the end."""
    if total_time <= 0.0:
        raise ValueError("total_time must be positive")
    n = prop.n_sites
    uniforms, sites = _trial_draws(rng, cfg.steps, n)
    dt = total_time / cfg.steps
    psi = StateVector.basis_state(source)
    for step in range(cfg.steps):
        psi = prop.evolve(psi, dt)
        if uniforms[step] < cfg.p:
            amps = psi.amplitudes.copy()
            bit = 1 << (int(sites[step]) - 1)
            idx = np.arange(amps.size)
            amps[(idx & bit) != 0] *= -1.0
            psi = StateVector(n, amps)
    return min(1.0, psi.site_up_probability(measure_site))


def dephasing_ensemble(prop: Propagator, source: BitConfig, measure_site: int,
                       total_time: float, cfg: NoiseConfig) -> np.ndarray:
    """All trial fidelities, batched over trials for speed.

    Matches looping :func:`dephasing_trial` over :func:`trial_rngs` in
    trial order, up to matrix-product roundoff.
    """
    if total_time <= 0.0:
        raise ValueError("total_time must be positive")
    n = prop.n_sites
    dim = 1 << n
    rngs = trial_rngs(cfg.seed, cfg.trials)
    uniforms = np.empty((cfg.trials, cfg.steps))
    sites = np.empty((cfg.trials, cfg.steps), dtype=np.int64)
    for i, rng in enumerate(rngs):
        uniforms[i], sites[i] = _trial_draws(rng, cfg.steps, n)
    flips = uniforms < cfg.p

    u_seg = prop.unitary(total_time / cfg.steps)
    states = np.zeros((dim, cfg.trials), dtype=complex)
    states[source.index, :] = 1.0
    idx = np.arange(dim)
    for step in range(cfg.steps):
        states = u_seg @ states
        hit = np.flatnonzero(flips[:, step])
        if hit.size:
            # sign pattern per flipped trial: -1 where the drawn site is up
            bits = 1 << (sites[hit, step] - 1)
            signs = np.where((idx[:, None] & bits[None, :]) != 0, -1.0, 1.0)
            states[:, hit] *= signs
    site_mask = ((idx >> (measure_site - 1)) & 1).astype(bool)
    return np.minimum(np.sum(np.abs(states[site_mask, :]) ** 2, axis=0), 1.0)


def noise_sweep(tasks: Sequence[TransferTask], p_grid: Sequence[float],
                cfg: NoiseConfig) -> List[RunRecord]:
    """One record per (task, p); the same random streams feed every task
    at a given p (common random numbers sharpen the comparison)."""
    if not p_grid:
        raise ValueError("p grid must be nonempty")
    n_sites = {task.prop.n_sites for task in tasks}
    if len(n_sites) != 1:
        raise ValueError("all tasks must share one chain length for common streams")
    records = []
    for p in p_grid:
        p_cfg = NoiseConfig(p=p, steps=cfg.steps, trials=cfg.trials, seed=cfg.seed)
        for task in tasks:
            fids = dephasing_ensemble(
                task.prop, task.source, task.measure_site, task.total_time, p_cfg
            )
            mean = float(np.mean(fids))
            stderr = float(np.std(fids, ddof=1) / np.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
            records.append(RunRecord(
                p=float(p),
                mean_fidelity=mean,
                standard_error=stderr,
                trials=cfg.trials,
                seed=cfg.seed,
                hamiltonian=task.label,
                source_site=next(i for i, b in enumerate(task.source.bits, 1) if b),
                target_site=task.measure_site,
            ))
    return records
