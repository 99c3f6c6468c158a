"""Monte Carlo emulation of waveplate misalignment and finite photon counts.

One trial perturbs every Euler angle, recomputes the seven experimental runs
(no intermediate measurement, three pass-one-mode runs, three block-one-mode
runs), replaces each run by a multinomial photon-count sample and rebuilds
the full report from the empirical tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NORM_TOL, InvalidInputError
from .lgi import (
    DichotomicMap,
    EvolutionConfig,
    LgiReport,
    ProbabilityTable,
    TableKind,
    joint_ambiguous,
    joint_unambiguous,
    marginal_distribution,
    report_from_tables,
    report_record,
)

N_RUNS = 7


@dataclass(frozen=True)
class NoiseConfig:
    sigma_waveplate: float = 0.1  # degrees, per physical plate
    waveplates_per_angle: int = 2
    counts_per_run: int | None = 14000  # None: exact probabilities, no shot noise
    trials: int = 1000
    seed: int = 7

    def __post_init__(self):
        if not (math.isfinite(self.sigma_waveplate) and self.sigma_waveplate >= 0):
            raise InvalidInputError("sigma_waveplate must be finite and >= 0")
        if self.waveplates_per_angle < 0:
            raise InvalidInputError("waveplates_per_angle must be >= 0")
        if self.counts_per_run is not None and self.counts_per_run < 1:
            raise InvalidInputError("counts_per_run must be >= 1")
        if self.trials < 1:
            raise InvalidInputError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise InvalidInputError("seed must be an unsigned 64-bit integer")

    @property
    def angle_sigma(self) -> float:
        """Std of each Euler angle in radians; a half-wave plate doubles its rotation error."""
        return math.radians(2.0 * self.sigma_waveplate * math.sqrt(self.waveplates_per_angle))


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    std: float
    n: int


@dataclass(frozen=True)
class McSummary:
    metrics: dict[str, MetricSummary]
    trials: int

    def __getitem__(self, key: str) -> MetricSummary:
        return self.metrics[key]

    def mean(self, key: str) -> float:
        return self.metrics[key].mean

    def std(self, key: str) -> float:
        return self.metrics[key].std


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def perturb_angles(cfg: EvolutionConfig, noise: NoiseConfig, rng: np.random.Generator) -> EvolutionConfig:
    sigma = noise.angle_sigma
    if sigma == 0:
        return cfg
    angles = np.asarray(cfg.angles()) + rng.normal(0.0, sigma, size=6)
    return EvolutionConfig.from_angles(angles, cfg.initial_state)


def exact_runs(cfg: EvolutionConfig) -> np.ndarray:
    """(7, 3) detection probabilities at t3: marginal run, pass-A/B/C runs, block-A/B/C runs."""
    return np.vstack(
        [
            marginal_distribution(cfg),
            joint_unambiguous(cfg).entries.T,
            joint_ambiguous(cfg).entries.T,
        ]
    )


def sample_empirical_table(probs, counts_per_run: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial photon counts over {A, B, C, lost} for each run, as fractions of counts_per_run."""
    p = np.atleast_2d(np.asarray(probs, dtype=float))
    if np.any(p < -NORM_TOL):
        raise InvalidInputError("run probabilities must be nonnegative")
    detected = p.sum(axis=1)
    if np.any(detected > 1 + NORM_TOL):
        raise InvalidInputError("run probabilities sum to more than 1")
    p = np.clip(p, 0.0, None)
    lost = np.clip(1.0 - p.sum(axis=1), 0.0, None)
    pvals = np.column_stack([p, lost])
    pvals /= pvals.sum(axis=1, keepdims=True)
    counts = rng.multinomial(counts_per_run, pvals)
    out = counts[:, :3] / counts_per_run
    return out.reshape(np.shape(probs))


def report_from_runs(runs: np.ndarray, qmap: DichotomicMap = DichotomicMap()) -> LgiReport:
    runs = np.asarray(runs, dtype=float)
    return report_from_tables(
        runs[0],
        ProbabilityTable(TableKind.UNAMBIGUOUS, runs[1:4].T),
        ProbabilityTable(TableKind.AMBIGUOUS, runs[4:7].T),
        qmap,
    )


def simulate_trial(
    cfg: EvolutionConfig, noise: NoiseConfig, trial: int, qmap: DichotomicMap = DichotomicMap()
) -> LgiReport:
    rng = trial_rng(noise.seed, trial)
    runs = exact_runs(perturb_angles(cfg, noise, rng))
    if noise.counts_per_run is not None:
        runs = sample_empirical_table(runs, noise.counts_per_run, rng)
    return report_from_runs(runs, qmap)


def monte_carlo(cfg: EvolutionConfig, noise: NoiseConfig, qmap: DichotomicMap = DichotomicMap()) -> McSummary:
    records = [report_record(simulate_trial(cfg, noise, t, qmap)) for t in range(noise.trials)]
    keys = list(records[0])
    data = np.array([[r[k] for k in keys] for r in records])
    means = data.mean(axis=0)
    stds = data.std(axis=0, ddof=1) if noise.trials > 1 else np.zeros(len(keys))
    metrics = {
        k: MetricSummary(float(means[i]), float(stds[i]), noise.trials) for i, k in enumerate(keys)
    }
    return McSummary(metrics, noise.trials)
